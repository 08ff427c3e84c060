#pragma once

#include <Eigen/Dense>

#include "hvlab/grid.hpp"
#include "hvlab/spectral.hpp"

namespace hvlab {

/// One-particle reduced density matrix on a d = 1 grid.
/// kernel(i, j) = omega(x_i; x_j); the operator acting on grid vectors is h * kernel.
struct DensityMatrix {
  PhaseSpaceGrid grid;
  Eigen::MatrixXcd kernel;
  int N = 0;

  /// h * sum_i kernel(i, i)
  double trace() const;
  /// h * kernel, the matrix of the operator in the grid basis.
  Eigen::MatrixXcd op() const { return grid.h * kernel; }
};

/// W(x_i, v_j) stored as values(i, j).
struct WignerFunction {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;

  /// h * dv * sum W
  double mass() const;
};

/// rho(x_i) = omega(x_i; x_i) / N.
struct SpatialDensity {
  PhaseSpaceGrid grid;
  Eigen::VectorXd values;

  double mass() const;
};

struct StateDiagnostics {
  double hermiticity = 0.0;  ///< max |K - K^*| / max(1, max |K|)
  double trace = 0.0;
  double min_eig = 0.0;      ///< extreme eigenvalues of h * kernel
  double max_eig = 0.0;
  double purity = 0.0;       ///< tr omega^2
};

StateDiagnostics inspect(const DensityMatrix& omega);

/// Throws ValidationError naming the violated invariant: Hermiticity (1e-12),
/// trace = N (relative 1e-8), spectrum in [-1e-8, 1 + 1e-8].
void validate(const DensityMatrix& omega);

bool is_hermitian(const Eigen::MatrixXcd& k, double tol = 1e-12);

SpatialDensity density(const DensityMatrix& omega);
/// Velocity marginal: rho(x_i) = dv * sum_j W(x_i, v_j).
SpatialDensity density(const WignerFunction& w);

/// Rank-one projector |phi><phi| for a grid vector normalized with h * sum |phi|^2 = 1.
DensityMatrix projector(const PhaseSpaceGrid& grid, const Eigen::VectorXcd& phi, int N);

}  // namespace hvlab

#pragma once

#include <functional>

#include "hvlab/density_matrix.hpp"
#include "hvlab/potential.hpp"

namespace hvlab {

/// Direct-term field U = gamma (V_reg * rho) on a d = 1 grid.
///
/// V_reg is |x|^{-alpha} tabulated through fdll_reconstruct at the grid
/// offsets |o| h, with the o = 0 entry capped by its value at h/2. The
/// convolution is carried out on a zero-padded grid of 2M points, so no
/// periodic images of the physical box interact. The force is the spectral
/// derivative of the padded potential, restricted to the physical box.
class MeanField {
public:
  MeanField(const PhaseSpaceGrid& grid, const RadialPotential& potential);

  struct Fields {
    Eigen::VectorXd U;       ///< potential at x_i
    Eigen::VectorXd E;       ///< dU/dx at x_i
    Eigen::VectorXd E_half;  ///< dU/dx at x_i + h/2 (filled on request)
  };

  Fields fields(const SpatialDensity& rho, bool half_grid = false) const;
  Eigen::VectorXd potential(const SpatialDensity& rho) const;
  Eigen::VectorXd force(const SpatialDensity& rho) const;

  /// (1/2) h sum U rho
  double interaction_energy(const SpatialDensity& rho) const;

  /// V_reg at offsets 0..M (unsigned, before gamma).
  const Eigen::VectorXd& kernel_table() const { return table_; }
  const PhaseSpaceGrid& grid() const { return grid_; }
  const RadialPotential& radial() const { return potential_; }

private:
  Eigen::VectorXd padded_potential(const SpatialDensity& rho) const;

  PhaseSpaceGrid grid_;
  RadialPotential potential_;
  Eigen::VectorXd table_;
  Eigen::VectorXcd kernel_hat_;
};

Eigen::VectorXd mean_field_potential(const SpatialDensity& rho, const RadialPotential& potential);
Eigen::VectorXd force_field(const SpatialDensity& rho, const RadialPotential& potential);

/// Prescribed potential U(x, t) with its derivative; replaces the mean field
/// in the solvers and estimators when supplied (test fields such as x^2).
struct ExternalField {
  std::function<double(double x, double t)> U;
  std::function<double(double x, double t)> dU;
};

/// iint |v|^2 W + (1/2) iint V rho rho: conserved by the Vlasov flow with
/// transport 2 v d_x.
double total_energy(const WignerFunction& w, const MeanField& field);

/// tr(-eps^2 Lap omega) / N + (1/2) iint V rho rho for the Hartree flow.
double hartree_energy(const DensityMatrix& omega, const MeanField& field);

}  // namespace hvlab

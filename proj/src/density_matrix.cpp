#include "hvlab/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hvlab/error.hpp"

namespace hvlab {

double DensityMatrix::trace() const { return grid.h * kernel.diagonal().real().sum(); }

double WignerFunction::mass() const { return grid.h * grid.dv() * values.sum(); }

double SpatialDensity::mass() const { return grid.h * values.sum(); }

bool is_hermitian(const Eigen::MatrixXcd& k, double tol) {
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  return (k - k.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

StateDiagnostics inspect(const DensityMatrix& omega) {
  StateDiagnostics s;
  const auto& k = omega.kernel;
  s.hermiticity = (k - k.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, k.cwiseAbs().maxCoeff());
  s.trace = omega.trace();
  Eigen::MatrixXcd a = omega.op();
  a = 0.5 * (a + a.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  s.min_eig = es.eigenvalues().minCoeff();
  s.max_eig = es.eigenvalues().maxCoeff();
  s.purity = es.eigenvalues().squaredNorm();
  return s;
}

void validate(const DensityMatrix& omega) {
  if (omega.grid.d != 1) throw ValidationError("density matrix: only d = 1 is supported");
  const int M = omega.grid.M;
  if (omega.kernel.rows() != M || omega.kernel.cols() != M) {
    throw ValidationError("density matrix: kernel shape does not match grid");
  }
  if (omega.N <= 0) throw ValidationError("density matrix: N must be positive");
  const auto s = inspect(omega);
  std::ostringstream msg;
  if (s.hermiticity > 1e-12) {
    msg << "density matrix: not Hermitian (residual " << s.hermiticity << ")";
    throw ValidationError(msg.str());
  }
  if (std::abs(s.trace - omega.N) > 1e-8 * omega.N) {
    msg << "density matrix: trace " << s.trace << " differs from N = " << omega.N;
    throw ValidationError(msg.str());
  }
  if (s.min_eig < -1e-8 || s.max_eig > 1.0 + 1e-8) {
    msg << "density matrix: occupation outside [0,1] (min " << s.min_eig << ", max " << s.max_eig << ")";
    throw ValidationError(msg.str());
  }
}

SpatialDensity density(const DensityMatrix& omega) {
  return {omega.grid, omega.kernel.diagonal().real() / static_cast<double>(omega.N)};
}

SpatialDensity density(const WignerFunction& w) {
  return {w.grid, w.grid.dv() * w.values.rowwise().sum()};
}

DensityMatrix projector(const PhaseSpaceGrid& grid, const Eigen::VectorXcd& phi, int N) {
  if (phi.size() != grid.M) throw GridMismatchError("projector: vector length does not match grid");
  return {grid, phi * phi.adjoint(), N};
}

}  // namespace hvlab

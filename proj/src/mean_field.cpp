#include "hvlab/mean_field.hpp"

#include "hvlab/error.hpp"
#include "hvlab/norms.hpp"

namespace hvlab {

MeanField::MeanField(const PhaseSpaceGrid& grid, const RadialPotential& potential)
    : grid_(grid), potential_(potential) {
  validate(potential_);
  if (grid_.d != 1) throw ConfigError("d", "mean field is implemented for d = 1");
  const int M = grid_.M;
  const auto decomp = make_fdll(potential_);
  table_.resize(M + 1);
  table_[0] = fdll_reconstruct(decomp, 0.5 * grid_.h);
  for (int o = 1; o <= M; ++o) table_[o] = fdll_reconstruct(decomp, o * grid_.h);

  Eigen::VectorXcd kernel(2 * M);
  for (int o = 0; o < 2 * M; ++o) kernel[o] = table_[o <= M ? o : 2 * M - o];
  kernel_hat_ = spectral::fft(kernel) * (grid_.h * potential_.gamma);
}

Eigen::VectorXd MeanField::padded_potential(const SpatialDensity& rho) const {
  require_same_grid(rho.grid, grid_, "mean field");
  const int M = grid_.M;
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(2 * M);
  padded.head(M) = rho.values;
  return spectral::periodic_convolve(padded, kernel_hat_);
}

MeanField::Fields MeanField::fields(const SpatialDensity& rho, bool half_grid) const {
  const int M = grid_.M;
  const double period = 2.0 * grid_.L;
  const Eigen::VectorXd u = padded_potential(rho);
  const Eigen::VectorXd du = spectral::spectral_derivative(u, period);
  Fields f{u.head(M), du.head(M), {}};
  if (half_grid) f.E_half = spectral::fourier_shift(du, -0.5 * grid_.h, period).head(M);
  return f;
}

Eigen::VectorXd MeanField::potential(const SpatialDensity& rho) const {
  return padded_potential(rho).head(grid_.M);
}

Eigen::VectorXd MeanField::force(const SpatialDensity& rho) const { return fields(rho).E; }

double MeanField::interaction_energy(const SpatialDensity& rho) const {
  return 0.5 * grid_.h * potential(rho).dot(rho.values);
}

Eigen::VectorXd mean_field_potential(const SpatialDensity& rho, const RadialPotential& potential) {
  return MeanField(rho.grid, potential).potential(rho);
}

Eigen::VectorXd force_field(const SpatialDensity& rho, const RadialPotential& potential) {
  return MeanField(rho.grid, potential).force(rho);
}

double total_energy(const WignerFunction& w, const MeanField& field) {
  return phase_space_kinetic(w) + field.interaction_energy(density(w));
}

double hartree_energy(const DensityMatrix& omega, const MeanField& field) {
  return kinetic_energy(omega) / omega.N + field.interaction_energy(density(omega));
}

}  // namespace hvlab

#include "hvlab/thermal.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hvlab/error.hpp"

namespace hvlab {
namespace {

double occupation(double e, double mu, double T) {
  const double u = (e - mu) / T;
  if (u > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(u));
}

double occupied(const Eigen::VectorXd& e, double mu, double T) {
  double s = 0.0;
  for (double x : e) s += occupation(x, mu, T);
  return s;
}

void require_coupling(const PhaseSpaceGrid& grid, int N) {
  if (N < 1) throw ConfigError("N", "must be at least 1");
  if (grid.d != 1) throw ConfigError("d", "states are built for d = 1 only");
  if (std::abs(grid.eps * N - 1.0) > 1e-12) {
    throw ConfigError("eps", "grid eps " + std::to_string(grid.eps) + " is not 1/N for N = " + std::to_string(N));
  }
}

DensityMatrix from_eigenbasis(const PhaseSpaceGrid& grid, int N, const Eigen::MatrixXcd& phi,
                              const Eigen::VectorXd& f) {
  DensityMatrix omega{grid, phi * f.asDiagonal() * phi.adjoint() / grid.h, N};
  omega.kernel = 0.5 * (omega.kernel + omega.kernel.adjoint()).eval();
  return omega;
}

}  // namespace

Eigen::MatrixXd kinetic_matrix(const PhaseSpaceGrid& grid) {
  const int M = grid.M;
  const auto k = fft_wavenumbers(M, grid.L);
  Eigen::VectorXd col(M);
  for (int n = 0; n < M; ++n) {
    double s = 0.0;
    for (int p = 0; p < M; ++p) s += k[p] * k[p] * std::cos(k[p] * n * grid.h);
    col[n] = grid.eps * grid.eps * s / M;
  }
  Eigen::MatrixXd t(M, M);
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) t(a, b) = col[std::abs(a - b)];
  }
  return t;
}

Eigen::VectorXd fermi_occupations(const Eigen::VectorXd& energies, int N, double T, double* mu_out) {
  if (!(T > 0.0)) throw ConfigError("T", "temperature must be positive");
  if (N >= energies.size()) {
    throw ConvergenceError("chemical potential: cannot place N = " + std::to_string(N) + " particles in " +
                           std::to_string(energies.size()) + " levels; use a larger grid");
  }
  double lo = energies.minCoeff() - 50.0 * T - 1.0;
  double hi = energies.maxCoeff() + 50.0 * T + 1.0;
  if (!(occupied(energies, lo, T) < N && occupied(energies, hi, T) > N)) {
    throw ConvergenceError("chemical potential: bisection could not bracket N; use a larger grid");
  }
  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    mu = 0.5 * (lo + hi);
    const double n = occupied(energies, mu, T);
    if (std::abs(n - N) < 1e-12 * N) break;
    (n < N ? lo : hi) = mu;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mu))) break;
  }
  Eigen::VectorXd f(energies.size());
  for (Eigen::Index n = 0; n < energies.size(); ++n) f[n] = occupation(energies[n], mu, T);
  if (std::abs(f.sum() - N) > 1e-10 * N) {
    throw ConvergenceError("chemical potential: occupation sum " + std::to_string(f.sum()) +
                           " missed N; use a larger grid or higher temperature");
  }
  if (mu_out) *mu_out = mu;
  return f;
}

DensityMatrix build_thermal_state(const PhaseSpaceGrid& grid, int N, double trap, double T) {
  require_coupling(grid, N);
  if (!(T > 0.0)) throw ConfigError("T", "temperature must be positive");
  Eigen::MatrixXd h0 = kinetic_matrix(grid);
  for (int i = 0; i < grid.M; ++i) h0(i, i) += trap * grid.x_nodes[i] * grid.x_nodes[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
  const Eigen::VectorXd f = fermi_occupations(es.eigenvalues(), N, T);
  return from_eigenbasis(grid, N, es.eigenvectors().cast<cplx>(), f);
}

DensityMatrix random_mixed_state(const PhaseSpaceGrid& grid, int N, std::uint64_t seed) {
  require_coupling(grid, N);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const int M = grid.M;
  Eigen::MatrixXcd a(M, M);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < M; ++i) a(i, j) = cplx{gauss(rng), gauss(rng)};
  }
  Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  std::uniform_real_distribution<double> temp(0.5, 3.0);
  const Eigen::VectorXd f = fermi_occupations(es.eigenvalues(), N, temp(rng));
  return from_eigenbasis(grid, N, es.eigenvectors(), f);
}

}  // namespace hvlab

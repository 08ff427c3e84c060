#include "hvlab/norms.hpp"

#include <cmath>
#include <string>

#include "hvlab/error.hpp"

namespace hvlab {

double trace_norm(const Eigen::MatrixXcd& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double herm = (a - a.adjoint()).cwiseAbs().maxCoeff();
  const double anti = (a + a.adjoint()).cwiseAbs().maxCoeff();
  if (herm <= 1e-13 * scale) {
    Eigen::MatrixXcd s = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  if (anti <= 1e-13 * scale) {
    Eigen::MatrixXcd s = cplx{0.0, -0.5} * (a - a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_grid(a.grid, b.grid, "trace_distance");
  return trace_norm(a.grid.h * (a.kernel - b.kernel));
}

double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_grid(a.grid, b.grid, "hs_distance");
  return a.grid.h * (a.kernel - b.kernel).norm();
}

double l2_distance(const WignerFunction& a, const WignerFunction& b) {
  require_same_grid(a.grid, b.grid, "l2_distance");
  return std::sqrt(a.grid.cell()) * (a.values - b.values).norm();
}

double hs_norm(const DensityMatrix& a) { return a.grid.h * a.kernel.norm(); }

double l2_norm(const WignerFunction& w) { return std::sqrt(w.grid.cell()) * w.values.norm(); }

double velocity_moment(const WignerFunction& w, double m, bool absolute) {
  const auto& g = w.grid;
  double total = 0.0;
  for (int j = 0; j < g.M; ++j) {
    const double weight = std::pow(std::abs(g.v_nodes[j]), m);
    total += weight * (absolute ? w.values.col(j).cwiseAbs().sum() : w.values.col(j).sum());
  }
  return g.cell() * total;
}

double signed_velocity_moment(const WignerFunction& w, int m) {
  const auto& g = w.grid;
  double total = 0.0;
  for (int j = 0; j < g.M; ++j) total += std::pow(g.v_nodes[j], m) * w.values.col(j).sum();
  return g.cell() * total;
}

std::vector<double> weighted_sobolev_norms(const WignerFunction& w, int s_max, double a) {
  if (s_max < 0 || s_max > 6) {
    throw DomainError("weighted_sobolev_norm: order " + std::to_string(s_max) + " unsupported (0..6)");
  }
  if (a < 0.0) throw DomainError("weighted_sobolev_norm: weight order must be non-negative");
  const auto& g = w.grid;
  const int M = g.M;
  Eigen::MatrixXd weight(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      weight(i, j) = std::pow(1.0 + g.x_nodes[i] * g.x_nodes[i] + g.v_nodes[j] * g.v_nodes[j], a);
    }
  }

  Eigen::MatrixXcd hat = w.values.cast<cplx>();
  spectral::dft_columns(hat, spectral::kForward);
  spectral::dft_rows(hat, spectral::kForward);
  const auto kx = fft_wavenumbers(M, g.L);
  const auto kv = fft_wavenumbers(M, M * g.dv());

  // by_order[n] = weighted squared norm of all derivatives of total order n
  std::vector<double> by_order(s_max + 1, 0.0);
  for (int bx = 0; bx <= s_max; ++bx) {
    for (int bv = 0; bx + bv <= s_max; ++bv) {
      Eigen::MatrixXd deriv;
      if (bx == 0 && bv == 0) {
        deriv = w.values;
      } else {
        Eigen::MatrixXcd d = hat;
        for (int q = 0; q < M; ++q) {
          for (int p = 0; p < M; ++p) {
            const bool nyq = (bx > 0 && 2 * p == M) || (bv > 0 && 2 * q == M);
            d(p, q) *= nyq ? cplx{0.0, 0.0}
                           : std::pow(cplx{0.0, kx[p]}, bx) * std::pow(cplx{0.0, kv[q]}, bv);
          }
        }
        spectral::dft_columns(d, spectral::kBackward);
        spectral::dft_rows(d, spectral::kBackward);
        deriv = d.real() / (static_cast<double>(M) * M);
      }
      by_order[bx + bv] += (weight.array() * deriv.array().square()).sum();
    }
  }
  std::vector<double> norms(s_max + 1);
  double acc = 0.0;
  for (int n = 0; n <= s_max; ++n) {
    acc += by_order[n];
    norms[n] = std::sqrt(g.cell() * acc);
  }
  return norms;
}

double weighted_sobolev_norm(const WignerFunction& w, int s, double a) {
  if (s < 0 || s > 6) throw DomainError("weighted_sobolev_norm: order " + std::to_string(s) + " unsupported (0..6)");
  return weighted_sobolev_norms(w, s, a).back();
}

double kinetic_energy(const DensityMatrix& omega) {
  const auto& g = omega.grid;
  const int M = g.M;
  Eigen::MatrixXcd b = omega.kernel;
  spectral::dft_columns(b, spectral::kForward);
  spectral::dft_rows(b, spectral::kBackward);
  const auto k = fft_wavenumbers(M, g.L);
  double total = 0.0;
  for (int p = 0; p < M; ++p) total += k[p] * k[p] * b(p, p).real();
  return g.eps * g.eps * g.h / M * total;
}

double phase_space_kinetic(const WignerFunction& w) { return velocity_moment(w, 2.0); }

}  // namespace hvlab

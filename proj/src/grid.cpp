#include "hvlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hvlab/error.hpp"

namespace hvlab {

double PhaseSpaceGrid::dv() const { return 2.0 * std::numbers::pi * eps / L; }
double PhaseSpaceGrid::dk() const { return 2.0 * std::numbers::pi / L; }
double PhaseSpaceGrid::v_max() const { return std::numbers::pi * eps * M / L; }
double PhaseSpaceGrid::cell() const { return h * dv(); }

bool PhaseSpaceGrid::same_as(const PhaseSpaceGrid& other) const {
  return d == other.d && M == other.M && L == other.L && eps == other.eps;
}

PhaseSpaceGrid make_grid(int d, double L, int M, double eps, int min_points) {
  if (d != 1 && d != 3) throw ConfigError("d", "unsupported dimension " + std::to_string(d));
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("L", "must be positive and finite");
  if (M % 2 != 0) throw ConfigError("M", "must be even, got " + std::to_string(M));
  if (M < min_points) {
    throw ConfigError("M", "must be at least " + std::to_string(min_points) + ", got " +
                               std::to_string(M));
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps", "must be positive and finite");

  PhaseSpaceGrid g;
  g.d = d;
  g.L = L;
  g.M = M;
  g.h = L / M;
  g.eps = eps;
  g.x_nodes.resize(M);
  g.v_nodes.resize(M);
  g.k_nodes.resize(M);
  const double dk = g.dk();
  for (int j = 0; j < M; ++j) {
    g.x_nodes[j] = -0.5 * L + j * g.h;
    g.k_nodes[j] = dk * (j - M / 2);
    g.v_nodes[j] = eps * g.k_nodes[j];
  }
  return g;
}

void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b, const char* what) {
  if (!a.same_as(b)) throw GridMismatchError(std::string(what) + ": operands live on different grids");
}

std::vector<double> fft_wavenumbers(int n, double period) {
  std::vector<double> k(n);
  const double dk = 2.0 * std::numbers::pi / period;
  for (int p = 0; p < n; ++p) k[p] = dk * (p < n / 2 ? p : p - n);
  return k;
}

}  // namespace hvlab

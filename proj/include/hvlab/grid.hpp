#pragma once

#include <vector>

namespace hvlab {

/// Periodic position grid on [-L/2, L/2)^d together with the velocity grid
/// dual to the scaled separation (x - x') / eps.
///
/// Per axis: x_i = -L/2 + i h, v_j = (2 pi eps / L)(j - M/2),
/// k_j = (2 pi / L)(j - M/2), with h = L / M. The velocity spacing is chosen so
/// that the discrete Wigner / Weyl pair is an exact change of basis.
struct PhaseSpaceGrid {
  int d = 1;
  double L = 0.0;
  int M = 0;
  double h = 0.0;
  double eps = 0.0;
  std::vector<double> x_nodes;
  std::vector<double> v_nodes;
  std::vector<double> k_nodes;

  double dv() const;        ///< velocity spacing 2 pi eps / L
  double dk() const;        ///< wavenumber spacing 2 pi / L
  double v_max() const;     ///< half-span of the velocity grid, pi eps M / L
  double cell() const;      ///< phase-space cell h * dv (per axis)

  bool same_as(const PhaseSpaceGrid& other) const;
};

/// Builds a grid. M must be even and at least `min_points`; L, eps > 0;
/// d in {1, 3}. Violations throw ConfigError naming the field.
PhaseSpaceGrid make_grid(int d, double L, int M, double eps, int min_points = 8);

/// Throws GridMismatchError unless `a` and `b` describe the same grid.
void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b, const char* what);

/// Wavenumbers in FFT storage order (0, 1, ..., n/2-1, -n/2, ..., -1) * 2 pi / period.
std::vector<double> fft_wavenumbers(int n, double period);

}  // namespace hvlab

#include "hvlab/wigner.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hvlab/error.hpp"

namespace hvlab {
namespace {

int wrap(int i, int M) { return ((i % M) + M) % M; }

int floor_half(int m) { return m >= 0 ? m / 2 : -((-m + 1) / 2); }

void require_layout(const PhaseSpaceGrid& g, const char* what) {
  if (g.d != 1) throw DomainError(std::string(what) + ": only d = 1 is supported");
  if (g.M % 4 != 0) {
    throw ConfigError("M", std::string(what) + " needs M divisible by 4, got " + std::to_string(g.M));
  }
}

// Phase applied in Fourier space to move an odd-separation column from the
// half grid onto the grid. The Nyquist coefficient takes the sign of m so
// that columns m and -m stay complex conjugates.
cplx half_shift_phase(int p, int M, int m) {
  if (2 * p == M) return m > 0 ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
  const int pp = p < M / 2 ? p : p - M;
  return std::polar(1.0, -std::numbers::pi * pp / M);
}

void shift_odd_columns(Eigen::MatrixXcd& f, bool inverse) {
  const int M = static_cast<int>(f.rows());
  spectral::dft_columns(f, spectral::kForward);
  for (int s = 0; s < M; ++s) {
    const int m = s < M / 2 ? s : s - M;
    if (m % 2 == 0) continue;
    for (int p = 0; p < M; ++p) {
      const cplx ph = half_shift_phase(p, M, m);
      f(p, s) *= inverse ? std::conj(ph) : ph;
    }
  }
  spectral::dft_columns(f, spectral::kBackward);
  f /= static_cast<double>(M);
}

}  // namespace

WignerFunction wigner_transform(const DensityMatrix& omega) {
  const auto& g = omega.grid;
  require_layout(g, "wigner_transform");
  const int M = g.M;
  if (omega.kernel.rows() != M || omega.kernel.cols() != M) {
    throw GridMismatchError("wigner_transform: kernel shape does not match grid");
  }
  if (!is_hermitian(omega.kernel)) throw ValidationError("wigner_transform: kernel is not Hermitian");

  // f(i, s): separation m = s (mod M), centre x_i (x_i + h/2 for odd m before the shift).
  Eigen::MatrixXcd f(M, M);
  for (int s = 0; s < M; ++s) {
    const int m = s < M / 2 ? s : s - M;
    const int q = floor_half(m);
    for (int i = 0; i < M; ++i) {
      const int b = wrap(i - q, M);
      f(i, s) = omega.kernel(wrap(b + m, M), b);
    }
  }
  shift_odd_columns(f, false);

  // m = -M/2 pairs (a, b) with (b, a); fold the conjugate pair into a real column.
  const int half = M / 2;
  for (int i = 0; i < half; ++i) {
    const cplx r = f(i, half);
    f(i, half) = r.real() + r.imag();
    f(i + half, half) = r.real() - r.imag();
  }

  for (int s = 1; s < M; s += 2) f.col(s) = -f.col(s);
  spectral::dft_rows(f, spectral::kForward);

  WignerFunction w{g, (g.h / (2.0 * std::numbers::pi)) * f.real()};
  return w;
}

DensityMatrix weyl_quantize(const WignerFunction& w, int N) {
  const auto& g = w.grid;
  require_layout(g, "weyl_quantize");
  if (N <= 0) throw ConfigError("N", "must be positive");
  if (std::abs(g.eps * N - 1.0) > 1e-12) {
    throw GridMismatchError("weyl_quantize: grid eps = " + std::to_string(g.eps) +
                            " is not 1/N for N = " + std::to_string(N));
  }
  const int M = g.M;
  if (w.values.rows() != M || w.values.cols() != M) {
    throw GridMismatchError("weyl_quantize: Wigner array shape does not match grid");
  }

  Eigen::MatrixXcd f = w.values.cast<cplx>();
  spectral::dft_rows(f, spectral::kBackward);
  f *= 2.0 * std::numbers::pi / (g.h * M);
  for (int s = 1; s < M; s += 2) f.col(s) = -f.col(s);

  const int half = M / 2;
  for (int i = 0; i < half; ++i) {
    const double p = f(i, half).real();
    const double q = f(i + half, half).real();
    const cplx r{0.5 * (p + q), 0.5 * (p - q)};
    f(i, half) = r;
    f(i + half, half) = std::conj(r);
  }
  shift_odd_columns(f, true);

  DensityMatrix omega{g, Eigen::MatrixXcd(M, M), N};
  for (int s = 0; s < M; ++s) {
    const int m = s < M / 2 ? s : s - M;
    const int q = floor_half(m);
    for (int i = 0; i < M; ++i) {
      const int b = wrap(i - q, M);
      omega.kernel(wrap(b + m, M), b) = f(i, s);
    }
  }
  return omega;
}

}  // namespace hvlab

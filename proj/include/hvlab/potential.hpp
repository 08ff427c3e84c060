#pragma once

namespace hvlab {

/// V(x) = |x|^{-alpha} with sign gamma (+1 repulsive, -1 attractive) in d dimensions.
struct RadialPotential {
  double alpha = 0.25;
  int gamma = 1;
  int d = 1;
};

/// Throws ConfigError unless alpha in (0, 1/2), gamma = +-1, d in {1, 3}.
void validate(const RadialPotential& v);
RadialPotential make_potential(double alpha, int gamma, int d = 1);

/// Gaussian-scale representation of |x|^{-alpha}:
///   |x|^{-alpha} = c(alpha, d) int_0^inf r^{-1-alpha} exp(-|x|^2 / (2 r^2)) dr.
/// The d-dimensional form before the z-integral uses mollifiers
/// exp(-|x - z|^2 / r^2) with weight full_weight(r).
struct FdllDecomposition {
  RadialPotential potential;
  double c = 0.0;  ///< calibrated normalization

  /// Reduced weight c r^{-1-alpha}.
  double weight(double r) const;
  /// Weight of the unreduced product-of-mollifiers form, c (2/pi)^{d/2} r^{-(d+1+alpha)}.
  double full_weight(double r) const;
};

/// Calibrates c(alpha, d) by adaptive quadrature so that the representation
/// returns 1 at |x| = 1. Cached per (alpha, d); thread-safe.
double fdll_normalization(double alpha, int d);

FdllDecomposition make_fdll(const RadialPotential& v);

/// Reduced weight at radius r (DomainError for r <= 0).
double fdll_weight(const RadialPotential& v, double r);

/// Evaluates the r-integral at |x| by adaptive quadrature. x = 0 throws DomainError.
double fdll_reconstruct(const FdllDecomposition& decomp, double x);

/// int exp(-|x - z|^2 / r^2) exp(-|y - z|^2 / r^2) dz = constant * exp(-|x - y|^2 / widened_scale^2)
struct ZReduction {
  double constant = 0.0;        ///< (pi/2)^{d/2} r^d
  double widened_scale = 0.0;   ///< r sqrt(2)
};

ZReduction z_reduction_constant(double r, int d);

}  // namespace hvlab

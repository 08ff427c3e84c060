#include "hvlab/potential.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "hvlab/error.hpp"

namespace hvlab {
namespace {

double scale_integral(double alpha, double x) {
  auto f = [alpha, x](double r) { return std::pow(r, -1.0 - alpha) * std::exp(-x * x / (2.0 * r * r)); };
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12, &err, &l1);
  if (!std::isfinite(value) || err > 1e-8 * std::abs(value)) {
    throw ConvergenceError("fdll quadrature did not converge at |x| = " + std::to_string(x) +
                           " (error estimate " + std::to_string(err) + ")");
  }
  return value;
}

}  // namespace

void validate(const RadialPotential& v) {
  if (!(v.alpha > 0.0 && v.alpha < 0.5)) {
    throw ConfigError("alpha", "must lie in (0, 1/2), got " + std::to_string(v.alpha));
  }
  if (v.gamma != 1 && v.gamma != -1) throw ConfigError("gamma", "must be +1 or -1");
  if (v.d != 1 && v.d != 3) throw ConfigError("d", "unsupported dimension " + std::to_string(v.d));
}

RadialPotential make_potential(double alpha, int gamma, int d) {
  RadialPotential v{alpha, gamma, d};
  validate(v);
  return v;
}

double fdll_normalization(double alpha, int d) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(alpha, d);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double c = 1.0 / scale_integral(alpha, 1.0);
  cache.emplace(key, c);
  return c;
}

FdllDecomposition make_fdll(const RadialPotential& v) {
  validate(v);
  return {v, fdll_normalization(v.alpha, v.d)};
}

double FdllDecomposition::weight(double r) const {
  if (!(r > 0.0)) throw DomainError("fdll weight: radius must be positive");
  return c * std::pow(r, -1.0 - potential.alpha);
}

double FdllDecomposition::full_weight(double r) const {
  if (!(r > 0.0)) throw DomainError("fdll weight: radius must be positive");
  return c * std::pow(2.0 / std::numbers::pi, 0.5 * potential.d) * std::pow(r, -(potential.d + 1.0 + potential.alpha));
}

double fdll_weight(const RadialPotential& v, double r) { return make_fdll(v).weight(r); }

double fdll_reconstruct(const FdllDecomposition& decomp, double x) {
  if (x == 0.0) throw DomainError("fdll_reconstruct: |x|^{-alpha} is singular at x = 0");
  return decomp.c * scale_integral(decomp.potential.alpha, std::abs(x));
}

ZReduction z_reduction_constant(double r, int d) {
  if (!(r > 0.0)) throw DomainError("z_reduction_constant: radius must be positive");
  return {std::pow(0.5 * std::numbers::pi, 0.5 * d) * std::pow(r, d), r * std::numbers::sqrt2};
}

}  // namespace hvlab

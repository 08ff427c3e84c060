#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvlab/mean_field.hpp"

namespace hvlab {

struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs_bound = 0.0;
  double ratio = 0.0;
  std::map<std::string, double> params;
  bool pass = false;
};

using Vec3 = std::array<double, 3>;

/// Nodes and weights of n-point Gauss-Hermite quadrature (weight e^{-t^2}),
/// Golub-Welsch. Cached.
const std::pair<std::vector<double>, std::vector<double>>& gauss_hermite(int n);

struct GaussianQuadratureOptions {
  std::vector<int> refinement{8, 16, 32, 64, 96, 128};
  double rel_tol = 1e-6;
};

/// LHS = int du e^{-s|z-u|^2/r^2} (sqrt(s)|z-u|/r)^j e^{-(1-s)|w-u|^2/r^2} (sqrt(1-s)|w-u|/r)^k
/// over R^3 by tensor Gauss-Hermite quadrature centred at s z + (1-s) w with
/// scale r, refined until successive values agree to rel_tol
/// (ConvergenceError with the refinement trace otherwise).
/// RHS = r^3 s(1-s) e^{-s(1-s)|z-w|^2/r^2} (1 + (sqrt(s(1-s))|z-w|/r)^{j+k}).
/// For j = k = 0 pass means agreement with the closed form pi^{3/2} r^3 e^{...}
/// to 1e-8; otherwise pass means a finite ratio (the constant is not known).
EstimateReport gaussian_integral_check(const Vec3& z, const Vec3& w, double s, double r, int j, int k,
                                       const GaussianQuadratureOptions& opts = {});

/// ||rho||_{L^p} <= c (iint |v|^m |W|)^{d/(m+d)}, p = (m+d)/d, with
/// c = (omega_d ||W||_inf)^{m/(m+d)} (1 + d/m) (m/d)^{d/(m+d)}.
/// Pass when LHS <= RHS (1 + 1e-8).
EstimateReport interpolation_check(const WignerFunction& w, double m);

struct RemainderResult {
  double trace_norm = 0.0;
  double ratio = 0.0;  ///< trace_norm / (N eps^2)
};

/// B(x; y) = [U(x) - U(y) - U'((x+y)/2)(x - y)] omega~(x; y), omega~ = weyl_quantize(W~, N),
/// U the mean field of the density of W~ (or `field` at time t). Returns tr |h B|.
RemainderResult remainder_trace_norm(const WignerFunction& w_tilde, const MeanField& field, int N);
RemainderResult remainder_trace_norm(const WignerFunction& w_tilde, const RadialPotential& potential, int N);
RemainderResult remainder_trace_norm(const WignerFunction& w_tilde, const ExternalField& field, double t, int N);

/// tr |[U_D, omega~]| with U_D = V_reg * (rho - rho~).
double duhamel_commutator_norm(const SpatialDensity& rho, const SpatialDensity& rho_tilde,
                               const DensityMatrix& omega_tilde, const MeanField& field);
double duhamel_commutator_norm(const SpatialDensity& rho, const SpatialDensity& rho_tilde,
                               const DensityMatrix& omega_tilde, const RadialPotential& potential);

/// h sum |rho_a - rho_b| <= tr |a - b| / N.
EstimateReport l1_trace_bound_check(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace hvlab

#pragma once

#include <vector>

#include "hvlab/density_matrix.hpp"

namespace hvlab {

/// Sum of singular values. Hermitian and anti-Hermitian input goes through
/// the self-adjoint eigensolver; anything else through a divide-and-conquer SVD.
double trace_norm(const Eigen::MatrixXcd& a);

/// tr |a - b| for the operators h * kernel.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
/// Frobenius norm of h * (a.kernel - b.kernel).
double hs_distance(const DensityMatrix& a, const DensityMatrix& b);
/// Grid L2 norm (h dv sum |Wa - Wb|^2)^{1/2}.
double l2_distance(const WignerFunction& a, const WignerFunction& b);

double hs_norm(const DensityMatrix& a);
double l2_norm(const WignerFunction& w);

/// h dv sum |v|^m W, or with |W| when `absolute` is set.
double velocity_moment(const WignerFunction& w, double m, bool absolute = false);
/// h dv sum v^m W (odd m keeps the sign of v).
double signed_velocity_moment(const WignerFunction& w, int m);

/// (sum_{bx + bv <= s} h dv sum (1 + x^2 + v^2)^a |d_x^bx d_v^bv W|^2)^{1/2}
/// with spectral derivatives on the periodic phase-space grid. s <= 6.
double weighted_sobolev_norm(const WignerFunction& w, int s, double a);
/// Norms for every order 0..s_max from one pass (entry s equals weighted_sobolev_norm(w, s, a)).
std::vector<double> weighted_sobolev_norms(const WignerFunction& w, int s_max, double a);

/// tr(-eps^2 Lap omega) through the Fourier multiplier eps^2 k^2.
double kinetic_energy(const DensityMatrix& omega);

/// h dv sum |v|^2 W: the phase-space kinetic term paired with kinetic_energy / N.
double phase_space_kinetic(const WignerFunction& w);

}  // namespace hvlab

#pragma once

#include "hvlab/density_matrix.hpp"

namespace hvlab {

/// Discrete Wigner transform
///   W(x_i, v_j) = (eps / 2 pi) sum_y omega(x_i + eps y / 2; x_i - eps y / 2) e^{-i v_j y} dy,
/// with y running over the separations m h / eps. Odd separations have their
/// centre on the half grid and are moved to x_i by a band-limited shift, so
/// the map kernel -> W is an orthogonal change of basis (up to scale).
/// Requires d = 1 and M divisible by 4. Throws ValidationError for a
/// non-Hermitian kernel.
WignerFunction wigner_transform(const DensityMatrix& omega);

/// Inverse of wigner_transform:
///   omega(x; y) = N sum_v W((x + y) / 2, v) e^{i v (x - y) / eps} dv.
/// Requires eps * N = 1 on the grid of `w` (GridMismatchError otherwise).
DensityMatrix weyl_quantize(const WignerFunction& w, int N);

}  // namespace hvlab

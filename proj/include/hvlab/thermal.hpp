#pragma once

#include <cstdint>

#include "hvlab/density_matrix.hpp"

namespace hvlab {

/// Matrix of -eps^2 Lap on the periodic grid (spectral, Nyquist mode kept).
Eigen::MatrixXd kinetic_matrix(const PhaseSpaceGrid& grid);

/// Fermi occupations 1 / (1 + exp((E - mu) / T)) with mu bisected so that
/// they sum to N within 1e-10. Throws ConvergenceError if N cannot be
/// bracketed (N larger than the number of levels).
Eigen::VectorXd fermi_occupations(const Eigen::VectorXd& energies, int N, double T, double* mu_out = nullptr);

/// Fermi-Dirac mixed state of h0 = -eps^2 Lap + trap x^2.
/// Requires eps * N = 1 on the grid, N >= 1, T > 0.
DensityMatrix build_thermal_state(const PhaseSpaceGrid& grid, int N, double trap, double T);

/// Mixed state with Fermi occupations over the eigenbasis of a random complex
/// Hermitian matrix; deterministic in `seed`.
DensityMatrix random_mixed_state(const PhaseSpaceGrid& grid, int N, std::uint64_t seed);

}  // namespace hvlab

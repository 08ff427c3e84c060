#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hvlab/mean_field.hpp"

namespace hvlab {

enum class HartreeScheme {
  drift_kick_drift,  ///< half kinetic, kick with U from the half-drifted density, half kinetic
  kick_drift_kick,   ///< half kick, kinetic, half kick
};

HartreeScheme parse_hartree_scheme(const std::string& name);
std::string to_string(HartreeScheme s);

struct HartreeConfig {
  double dt = 0.01;
  double t_final = 1.0;
  RadialPotential potential;
  HartreeScheme scheme = HartreeScheme::drift_kick_drift;
  /// kick_drift_kick only: evaluate both half kicks with U from a predicted
  /// midpoint density instead of U(rho_n) / U(rho_{n+1}).
  bool midpoint_predictor = true;
  /// Abort when the trace or the spectrum leaves [0, 1] by more than this.
  double stability_tol = 1e-6;
};

void validate(const HartreeConfig& cfg);

/// Number of steps t / dt, requiring it to be integral within 1e-9.
long step_count(double t, double dt, const char* field);

struct HartreeSample {
  double t;
  const DensityMatrix& omega;
  const SpatialDensity& rho;
  const Eigen::VectorXd& U;
};

using HartreeObserver = std::function<void(const HartreeSample&)>;

struct HartreeTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// i eps d_t omega = [-eps^2 Lap + U, omega] on a fixed grid.
class HartreePropagator {
public:
  HartreePropagator(const PhaseSpaceGrid& grid, const HartreeConfig& cfg,
                    std::optional<ExternalField> field = std::nullopt);

  /// One full step from time t.
  DensityMatrix step(const DensityMatrix& omega, double t) const;

  /// omega <- e^{-i tau h_kin / eps} omega e^{i tau h_kin / eps}
  void drift(Eigen::MatrixXcd& kernel, double tau) const;
  /// omega(a, b) <- e^{-i tau (U_a - U_b) / eps} omega(a, b)
  void kick(Eigen::MatrixXcd& kernel, const Eigen::VectorXd& U, double tau) const;

  Eigen::VectorXd potential(const DensityMatrix& omega, double t) const;

  const HartreeConfig& config() const { return cfg_; }
  const std::optional<MeanField>& mean_field() const { return mean_field_; }
  const PhaseSpaceGrid& grid() const { return grid_; }

private:
  PhaseSpaceGrid grid_;
  HartreeConfig cfg_;
  std::optional<ExternalField> external_;
  std::optional<MeanField> mean_field_;
  std::vector<double> k2_;
};

DensityMatrix hartree_step(const DensityMatrix& omega, const HartreeConfig& cfg);

/// Evolves to cfg.t_final and returns the states at t = 0 and at every
/// requested sample time (default: t_final). Sample times must be multiples
/// of dt. Throws StabilityError when the trace or the spectrum drifts by more
/// than cfg.stability_tol (the spectrum is checked at sample times).
HartreeTrajectory evolve_hartree(const DensityMatrix& omega0, const HartreeConfig& cfg,
                                 std::vector<double> sample_times = {},
                                 const std::vector<HartreeObserver>& observers = {},
                                 std::optional<ExternalField> field = std::nullopt);

}  // namespace hvlab

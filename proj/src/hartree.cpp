#include "hvlab/hartree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hvlab/error.hpp"

namespace hvlab {

HartreeScheme parse_hartree_scheme(const std::string& name) {
  if (name == "drift_kick_drift") return HartreeScheme::drift_kick_drift;
  if (name == "kick_drift_kick") return HartreeScheme::kick_drift_kick;
  throw ConfigError("hartree_scheme", "unknown Hartree scheme '" + name + "'");
}

std::string to_string(HartreeScheme s) {
  return s == HartreeScheme::drift_kick_drift ? "drift_kick_drift" : "kick_drift_kick";
}

void validate(const HartreeConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (cfg.t_final < 0.0) throw ConfigError("t_final", "must be non-negative");
  if (cfg.t_final > 0.0 && cfg.t_final < cfg.dt * (1.0 - 1e-9)) throw ConfigError("t_final", "must be at least dt");
  if (!(cfg.stability_tol > 0.0)) throw ConfigError("stability_tol", "must be positive");
  validate(cfg.potential);
}

long step_count(double t, double dt, const char* field) {
  const double n = t / dt;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * std::max(1.0, n)) {
    std::ostringstream msg;
    msg << "time " << t << " is not a multiple of dt = " << dt;
    throw ConfigError(field, msg.str());
  }
  return static_cast<long>(r);
}

HartreePropagator::HartreePropagator(const PhaseSpaceGrid& grid, const HartreeConfig& cfg,
                                     std::optional<ExternalField> field)
    : grid_(grid), cfg_(cfg), external_(std::move(field)) {
  validate(cfg_);
  if (grid_.d != 1) throw ConfigError("d", "Hartree dynamics is implemented for d = 1");
  if (!external_) mean_field_.emplace(grid_, cfg_.potential);
  const auto k = fft_wavenumbers(grid_.M, grid_.L);
  k2_.resize(k.size());
  for (std::size_t p = 0; p < k.size(); ++p) k2_[p] = k[p] * k[p];
}

void HartreePropagator::drift(Eigen::MatrixXcd& kernel, double tau) const {
  const int M = grid_.M;
  spectral::dft_columns(kernel, spectral::kForward);
  spectral::dft_rows(kernel, spectral::kBackward);
  const double a = tau * grid_.eps;
  for (int q = 0; q < M; ++q) {
    for (int p = 0; p < M; ++p) kernel(p, q) *= std::polar(1.0 / (static_cast<double>(M) * M), -a * (k2_[p] - k2_[q]));
  }
  spectral::dft_columns(kernel, spectral::kBackward);
  spectral::dft_rows(kernel, spectral::kForward);
}

void HartreePropagator::kick(Eigen::MatrixXcd& kernel, const Eigen::VectorXd& U, double tau) const {
  const int M = grid_.M;
  Eigen::VectorXcd phase(M);
  for (int a = 0; a < M; ++a) phase[a] = std::polar(1.0, -tau * U[a] / grid_.eps);
  kernel = phase.asDiagonal() * kernel * phase.conjugate().asDiagonal();
}

Eigen::VectorXd HartreePropagator::potential(const DensityMatrix& omega, double t) const {
  if (external_) {
    Eigen::VectorXd U(grid_.M);
    for (int i = 0; i < grid_.M; ++i) U[i] = external_->U(grid_.x_nodes[i], t);
    return U;
  }
  return mean_field_->potential(density(omega));
}

DensityMatrix HartreePropagator::step(const DensityMatrix& omega, double t) const {
  require_same_grid(omega.grid, grid_, "hartree_step");
  const double dt = cfg_.dt;
  DensityMatrix out = omega;
  if (cfg_.scheme == HartreeScheme::drift_kick_drift) {
    drift(out.kernel, 0.5 * dt);
    kick(out.kernel, potential(out, t + 0.5 * dt), dt);
    drift(out.kernel, 0.5 * dt);
    return out;
  }
  if (cfg_.midpoint_predictor) {
    const Eigen::VectorXd u0 = potential(omega, t);
    DensityMatrix pred = omega;
    kick(pred.kernel, u0, 0.5 * dt);
    drift(pred.kernel, 0.5 * dt);
    const Eigen::VectorXd um = potential(pred, t + 0.5 * dt);
    kick(out.kernel, um, 0.5 * dt);
    drift(out.kernel, dt);
    kick(out.kernel, um, 0.5 * dt);
  } else {
    kick(out.kernel, potential(out, t), 0.5 * dt);
    drift(out.kernel, dt);
    kick(out.kernel, potential(out, t + dt), 0.5 * dt);
  }
  return out;
}

DensityMatrix hartree_step(const DensityMatrix& omega, const HartreeConfig& cfg) {
  return HartreePropagator(omega.grid, cfg).step(omega, 0.0);
}

namespace {

std::set<long> sample_steps(std::vector<double>& sample_times, const HartreeConfig& cfg, long n) {
  if (sample_times.empty()) sample_times.push_back(cfg.t_final);
  std::set<long> steps;
  for (double ts : sample_times) {
    const long s = step_count(ts, cfg.dt, "sample_times");
    if (s < 0 || s > n) throw ConfigError("sample_times", "sample time outside [0, t_final]");
    if (s > 0) steps.insert(s);
  }
  return steps;
}

}  // namespace

HartreeTrajectory evolve_hartree(const DensityMatrix& omega0, const HartreeConfig& cfg,
                                 std::vector<double> sample_times, const std::vector<HartreeObserver>& observers,
                                 std::optional<ExternalField> field) {
  validate(cfg);
  const long n = cfg.t_final > 0.0 ? step_count(cfg.t_final, cfg.dt, "t_final") : 0;
  const auto samples = n > 0 ? sample_steps(sample_times, cfg, n) : std::set<long>{};
  HartreePropagator prop(omega0.grid, cfg, std::move(field));
  const double trace0 = omega0.trace();
  const double dt = cfg.dt;

  HartreeTrajectory traj;
  auto record = [&](double t, const DensityMatrix& omega, bool check_spectrum) {
    if (check_spectrum) {
      const auto diag = inspect(omega);
      if (diag.min_eig < -cfg.stability_tol || diag.max_eig > 1.0 + cfg.stability_tol) {
        std::ostringstream msg;
        msg << "hartree: occupations left [0,1] at t = " << t << " (min " << diag.min_eig << ", max "
            << diag.max_eig << "); reduce dt";
        throw StabilityError(msg.str());
      }
    }
    traj.times.push_back(t);
    traj.states.push_back(omega);
    if (!observers.empty()) {
      const SpatialDensity rho = density(omega);
      const Eigen::VectorXd U = prop.potential(omega, t);
      const HartreeSample sample{t, omega, rho, U};
      for (const auto& obs : observers) obs(sample);
    }
  };
  record(0.0, omega0, false);

  DensityMatrix omega = omega0;
  bool owed_half_drift = false;
  for (long s = 0; s < n; ++s) {
    const double t = s * dt;
    if (cfg.scheme == HartreeScheme::drift_kick_drift) {
      prop.drift(omega.kernel, owed_half_drift ? dt : 0.5 * dt);
      prop.kick(omega.kernel, prop.potential(omega, t + 0.5 * dt), dt);
      owed_half_drift = true;
      if (samples.count(s + 1) || s + 1 == n) {
        prop.drift(omega.kernel, 0.5 * dt);
        owed_half_drift = false;
      }
    } else {
      omega = prop.step(omega, t);
    }
    if (!owed_half_drift) {
      const double tr = omega.trace();
      if (std::abs(tr - trace0) > cfg.stability_tol * std::max(1.0, std::abs(trace0))) {
        std::ostringstream msg;
        msg << "hartree: trace drifted from " << trace0 << " to " << tr << " at t = " << t + dt << "; reduce dt";
        throw StabilityError(msg.str());
      }
    }
    if (samples.count(s + 1)) record((s + 1) * dt, omega, true);
  }
  return traj;
}

}  // namespace hvlab

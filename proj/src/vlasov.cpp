#include "hvlab/vlasov.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "hvlab/error.hpp"
#include "hvlab/hartree.hpp"
#include "hvlab/norms.hpp"

namespace hvlab {

VInterpolation parse_v_interpolation(const std::string& name) {
  if (name == "fourier") return VInterpolation::fourier;
  if (name == "cubic_spline" || name == "cubic-spline") return VInterpolation::cubic_spline;
  throw ConfigError("v_interpolation", "unknown interpolation '" + name + "'");
}

std::string to_string(VInterpolation v) { return v == VInterpolation::fourier ? "fourier" : "cubic_spline"; }

void validate(const VlasovConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (cfg.t_final < 0.0) throw ConfigError("t_final", "must be non-negative");
  if (cfg.force_sign != 1 && cfg.force_sign != -1) throw ConfigError("force_sign", "must be +1 or -1");
  validate(cfg.potential);
}

VlasovPropagator::VlasovPropagator(const PhaseSpaceGrid& grid, const VlasovConfig& cfg,
                                   std::optional<ExternalField> field)
    : grid_(grid), cfg_(cfg), external_(std::move(field)) {
  validate(cfg_);
  if (grid_.d != 1) throw ConfigError("d", "Vlasov dynamics is implemented for d = 1");
  if (!external_) mean_field_.emplace(grid_, cfg_.potential);
}

void VlasovPropagator::advect_x(Eigen::MatrixXd& values, double tau) const {
  const int M = grid_.M;
  Eigen::MatrixXcd hat = values.cast<cplx>();
  spectral::dft_columns(hat, spectral::kForward);
  const auto k = fft_wavenumbers(M, grid_.L);
  for (int j = 0; j < M; ++j) {
    const double shift = 2.0 * grid_.v_nodes[j] * tau;
    for (int p = 0; p < M; ++p) {
      hat(p, j) *= (2 * p == M) ? cplx{std::cos(k[p] * shift), 0.0} : std::polar(1.0, -k[p] * shift);
    }
  }
  spectral::dft_columns(hat, spectral::kBackward);
  values = hat.real() / static_cast<double>(M);
}

void VlasovPropagator::advect_v(Eigen::MatrixXd& values, const Eigen::VectorXd& E, double tau) const {
  const int M = grid_.M;
  const double s = cfg_.force_sign;
  const double reach = E.cwiseAbs().maxCoeff() * std::abs(tau);
  if (reach > grid_.v_max()) {
    std::ostringstream msg;
    msg << "vlasov: velocity kick " << reach << " exceeds half the velocity span " << grid_.v_max()
        << "; reduce dt";
    throw StabilityError(msg.str());
  }
  if (cfg_.v_interpolation == VInterpolation::fourier) {
    Eigen::MatrixXcd hat = values.cast<cplx>();
    spectral::dft_rows(hat, spectral::kForward);
    const auto k = fft_wavenumbers(M, M * grid_.dv());
    for (int q = 0; q < M; ++q) {
      for (int i = 0; i < M; ++i) {
        const double shift = -s * E[i] * tau;
        hat(i, q) *= (2 * q == M) ? cplx{std::cos(k[q] * shift), 0.0} : std::polar(1.0, -k[q] * shift);
      }
    }
    spectral::dft_rows(hat, spectral::kBackward);
    values = hat.real() / static_cast<double>(M);
    return;
  }
  const double v0 = grid_.v_nodes.front();
  const double v1 = grid_.v_nodes.back();
  std::vector<double> row(M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) row[j] = values(i, j);
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline(row.data(), row.size(), v0, grid_.dv(),
                                                                        0.0, 0.0);
    for (int j = 0; j < M; ++j) {
      const double v = grid_.v_nodes[j] + s * E[i] * tau;
      // inflow through the velocity edges carries the edge value (zero slope there)
      values(i, j) = v < v0 ? row.front() : (v > v1 ? row.back() : spline(v));
    }
  }
}

Eigen::VectorXd VlasovPropagator::force(const WignerFunction& w, double t) const {
  if (external_) {
    Eigen::VectorXd E(grid_.M);
    for (int i = 0; i < grid_.M; ++i) E[i] = external_->dU(grid_.x_nodes[i], t);
    return E;
  }
  return mean_field_->force(density(w));
}

double VlasovPropagator::energy(const WignerFunction& w, double t) const {
  if (!external_) return total_energy(w, *mean_field_);
  const SpatialDensity rho = density(w);
  double pot = 0.0;
  for (int i = 0; i < grid_.M; ++i) pot += external_->U(grid_.x_nodes[i], t) * rho.values[i];
  return phase_space_kinetic(w) + grid_.h * pot;
}

WignerFunction VlasovPropagator::step(const WignerFunction& w, double t) const {
  require_same_grid(w.grid, grid_, "vlasov_step");
  WignerFunction out = w;
  advect_x(out.values, 0.5 * cfg_.dt);
  advect_v(out.values, force(out, t + 0.5 * cfg_.dt), cfg_.dt);
  advect_x(out.values, 0.5 * cfg_.dt);
  return out;
}

WignerFunction vlasov_step(const WignerFunction& w, const VlasovConfig& cfg) {
  return VlasovPropagator(w.grid, cfg).step(w, 0.0);
}

VlasovTrajectory evolve_vlasov(const WignerFunction& w0, const VlasovConfig& cfg, std::vector<double> sample_times,
                               const std::vector<VlasovObserver>& observers, std::optional<ExternalField> field) {
  validate(cfg);
  const long n = cfg.t_final > 0.0 ? step_count(cfg.t_final, cfg.dt, "t_final") : 0;
  if (sample_times.empty()) sample_times.push_back(cfg.t_final);
  std::set<long> samples;
  for (double ts : sample_times) {
    const long s = step_count(ts, cfg.dt, "sample_times");
    if (s < 0 || s > n) throw ConfigError("sample_times", "sample time outside [0, t_final]");
    if (s > 0) samples.insert(s);
  }
  VlasovPropagator prop(w0.grid, cfg, std::move(field));
  const double dt = cfg.dt;

  VlasovTrajectory traj;
  auto record = [&](double t, const WignerFunction& w) {
    traj.times.push_back(t);
    traj.states.push_back(w);
    if (!observers.empty()) {
      const SpatialDensity rho = density(w);
      const Eigen::VectorXd E = prop.force(w, t);
      const VlasovSample sample{t, w, rho, E, prop.energy(w, t)};
      for (const auto& obs : observers) obs(sample);
    }
  };
  record(0.0, w0);

  WignerFunction w = w0;
  bool owed_half = false;
  for (long s = 0; s < n; ++s) {
    const double t = s * dt;
    prop.advect_x(w.values, owed_half ? dt : 0.5 * dt);
    prop.advect_v(w.values, prop.force(w, t + 0.5 * dt), dt);
    owed_half = true;
    if (samples.count(s + 1) || s + 1 == n) {
      prop.advect_x(w.values, 0.5 * dt);
      owed_half = false;
    }
    if (samples.count(s + 1)) record((s + 1) * dt, w);
  }
  return traj;
}

}  // namespace hvlab

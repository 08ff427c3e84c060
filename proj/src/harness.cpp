#include "hvlab/harness.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "hvlab/error.hpp"
#include "hvlab/estimates.hpp"
#include "hvlab/io.hpp"
#include "hvlab/norms.hpp"
#include "hvlab/thermal.hpp"
#include "hvlab/wigner.hpp"

namespace hvlab {

void validate(const ExperimentConfig& cfg) {
  validate(make_potential(cfg.alpha, cfg.gamma, 1));
  if (cfg.N_ladder.empty()) throw ConfigError("N_ladder", "must not be empty");
  for (std::size_t i = 0; i < cfg.N_ladder.size(); ++i) {
    if (cfg.N_ladder[i] < 1) throw ConfigError("N_ladder", "particle numbers must be positive");
    if (i > 0 && cfg.N_ladder[i] <= cfg.N_ladder[i - 1]) throw ConfigError("N_ladder", "must be strictly increasing");
  }
  if (!(cfg.L > 0.0)) throw ConfigError("L", "must be positive");
  if (cfg.M != 0 && (cfg.M < 8 || cfg.M % 4 != 0)) throw ConfigError("M", "must be 0 (auto) or a multiple of 4 >= 8");
  if (cfg.M_min < 8) throw ConfigError("M_min", "must be at least 8");
  if (!(cfg.v_cover > 0.0)) throw ConfigError("v_cover", "must be positive");
  if (!(cfg.T > 0.0)) throw ConfigError("T", "must be positive");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(cfg.t_final >= 0.0)) throw ConfigError("t_final", "must be non-negative");
  for (double t : cfg.sample_times) {
    if (t < 0.0 || t > cfg.t_final * (1 + 1e-12)) throw ConfigError("sample_times", "must lie in [0, t_final]");
  }
  for (double t : cfg.remainder_times) {
    if (t < 0.0 || t > cfg.t_final * (1 + 1e-12)) throw ConfigError("remainder_times", "must lie in [0, t_final]");
  }
  if (cfg.force_sign != 1 && cfg.force_sign != -1) throw ConfigError("force_sign", "must be +1 or -1");
  if (!(cfg.m0 > 0.0)) throw ConfigError("m0", "must be positive");
  if (cfg.sobolev_order < 0 || cfg.sobolev_order > 6) throw ConfigError("sobolev_order", "must lie in 0..6");
  if (cfg.sobolev_weight < 0.0) throw ConfigError("sobolev_weight", "must be non-negative");
  if (cfg.threads < 1) throw ConfigError("threads", "must be at least 1");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  static const std::set<std::string> known{
      "alpha", "gamma", "N_ladder", "L", "M", "M_min", "v_cover", "T", "trap", "dt", "t_final", "sample_times",
      "remainder_times", "output_dir", "force_sign", "seed", "hartree_scheme", "midpoint_predictor",
      "v_interpolation", "m0", "sobolev_order", "sobolev_weight", "kinetic_bound", "dump_states", "threads"};
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(key, "unknown configuration key");
  }
  auto get = [&](const char* key, auto& target) {
    if (!j.contains(key)) return;
    try {
      target = j.at(key).get<std::decay_t<decltype(target)>>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(key, std::string("wrong type: ") + e.what());
    }
  };
  get("alpha", c.alpha);
  get("gamma", c.gamma);
  get("N_ladder", c.N_ladder);
  get("L", c.L);
  get("M", c.M);
  get("M_min", c.M_min);
  get("v_cover", c.v_cover);
  get("T", c.T);
  get("trap", c.trap);
  get("dt", c.dt);
  get("t_final", c.t_final);
  get("sample_times", c.sample_times);
  get("remainder_times", c.remainder_times);
  get("output_dir", c.output_dir);
  get("force_sign", c.force_sign);
  get("seed", c.seed);
  get("midpoint_predictor", c.midpoint_predictor);
  get("m0", c.m0);
  get("sobolev_order", c.sobolev_order);
  get("sobolev_weight", c.sobolev_weight);
  get("kinetic_bound", c.kinetic_bound);
  get("dump_states", c.dump_states);
  get("threads", c.threads);
  std::string name;
  if (j.contains("hartree_scheme")) {
    get("hartree_scheme", name);
    c.hartree_scheme = parse_hartree_scheme(name);
  }
  if (j.contains("v_interpolation")) {
    get("v_interpolation", name);
    c.v_interpolation = parse_v_interpolation(name);
  }
  validate(c);
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"alpha", c.alpha},
          {"gamma", c.gamma},
          {"N_ladder", c.N_ladder},
          {"L", c.L},
          {"M", c.M},
          {"M_min", c.M_min},
          {"v_cover", c.v_cover},
          {"T", c.T},
          {"trap", c.trap},
          {"dt", c.dt},
          {"t_final", c.t_final},
          {"sample_times", c.sample_times},
          {"remainder_times", c.remainder_times},
          {"output_dir", c.output_dir},
          {"force_sign", c.force_sign},
          {"seed", c.seed},
          {"hartree_scheme", to_string(c.hartree_scheme)},
          {"midpoint_predictor", c.midpoint_predictor},
          {"v_interpolation", to_string(c.v_interpolation)},
          {"m0", c.m0},
          {"sobolev_order", c.sobolev_order},
          {"sobolev_weight", c.sobolev_weight},
          {"kinetic_bound", c.kinetic_bound},
          {"dump_states", c.dump_states},
          {"threads", c.threads}};
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("parse error: ") + e.what());
  }
  return experiment_config_from_json(j);
}

int auto_grid_points(int N, double L, int M_min, double v_cover) {
  const double need = std::max<double>(M_min, v_cover * N * L / std::numbers::pi);
  for (long m = 4;; m += 4) {
    if (m < need) continue;
    long r = m;
    while (r % 2 == 0) r /= 2;
    while (r % 3 == 0) r /= 3;
    while (r % 5 == 0) r /= 5;
    if (r == 1) return static_cast<int>(m);
  }
}

double moment_threshold(double alpha) { return 3.0 * alpha / (2.0 - alpha); }

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw DomainError("fit_loglog_slope: need at least 3 points");
  std::set<double> seen;
  for (const auto& [e, d] : points) {
    if (!(e > 0.0) || !(d > 0.0)) throw DomainError("fit_loglog_slope: values must be positive");
    if (!seen.insert(e).second) throw DomainError("fit_loglog_slope: repeated eps makes the fit degenerate");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [e, d] : points) {
    mx += std::log(e);
    my += std::log(d);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [e, d] : points) {
    const double x = std::log(e) - mx;
    const double y = std::log(d) - my;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  SlopeFit f;
  f.points = static_cast<int>(points.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.stderr_slope = std::sqrt(sse / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
  f.ci_low = f.slope - tq * f.stderr_slope;
  f.ci_high = f.slope + tq * f.stderr_slope;
  return f;
}

AuditReport audit_assumptions(const DensityMatrix& omega, const MeanField& field, const ExperimentConfig& cfg) {
  AuditReport a;
  const auto diag = inspect(omega);
  a.trace = diag.trace;
  a.min_eig = diag.min_eig;
  a.max_eig = diag.max_eig;
  a.hermiticity = diag.hermiticity;
  a.kinetic_per_N = kinetic_energy(omega) / omega.N;
  a.energy = hartree_energy(omega, field);

  const WignerFunction w = wigner_transform(omega);
  const auto& g = w.grid;
  a.W_L1 = g.cell() * w.values.cwiseAbs().sum();
  a.W_Linf = w.values.cwiseAbs().maxCoeff();
  a.m0_threshold = moment_threshold(cfg.alpha);
  for (double m = 0.5; m <= cfg.m0 + 1e-12; m += 0.5) a.moments.emplace_back(m, velocity_moment(w, m, true));
  const auto sob = weighted_sobolev_norms(w, cfg.sobolev_order, cfg.sobolev_weight);
  for (int k = 0; k <= cfg.sobolev_order; ++k) a.sobolev.emplace_back(k, sob[k]);
  a.sobolev_weight = cfg.sobolev_weight;

  const SpatialDensity rho = density(omega);
  for (int i = 0; i < g.M; ++i) {
    if (std::abs(g.x_nodes[i]) > 0.25 * g.L) a.boundary_mass_x += g.h * std::abs(rho.values[i]);
  }
  for (int j = 0; j < g.M; ++j) {
    if (std::abs(g.v_nodes[j]) > 0.5 * g.v_max()) a.boundary_mass_v += g.cell() * w.values.col(j).cwiseAbs().sum();
  }

  std::ostringstream cause;
  if (std::abs(a.trace - omega.N) > 1e-8 * omega.N) cause << "trace " << a.trace << " != N; ";
  if (a.min_eig < -1e-8 || a.max_eig > 1.0 + 1e-8) cause << "occupations outside [0,1]; ";
  if (a.hermiticity > 1e-12) cause << "kernel not Hermitian; ";
  if (!(a.kinetic_per_N <= cfg.kinetic_bound)) cause << "kinetic energy per particle " << a.kinetic_per_N << " above bound; ";
  if (cfg.m0 <= a.m0_threshold) cause << "m0 does not exceed the moment threshold; ";
  bool finite = std::isfinite(a.energy) && std::isfinite(a.W_L1) && std::isfinite(a.W_Linf);
  for (const auto& [m, v] : a.moments) finite = finite && std::isfinite(v);
  for (const auto& [k, v] : a.sobolev) finite = finite && std::isfinite(v);
  if (!finite) cause << "non-finite audited quantity; ";
  a.cause = cause.str();
  a.hypotheses_ok = a.cause.empty();
  return a;
}

RungResult run_rung(const ExperimentConfig& cfg, int N) {
  const auto start = std::chrono::steady_clock::now();
  RungResult r;
  r.N = N;
  r.eps = 1.0 / N;
  r.M = cfg.M > 0 ? cfg.M : auto_grid_points(N, cfg.L, cfg.M_min, cfg.v_cover);
  try {
    const PhaseSpaceGrid grid = make_grid(1, cfg.L, r.M, r.eps);
    const RadialPotential pot = make_potential(cfg.alpha, cfg.gamma, 1);
    const MeanField field(grid, pot);
    const DensityMatrix omega0 = build_thermal_state(grid, N, cfg.trap, cfg.T);
    r.audit = audit_assumptions(omega0, field, cfg);
    if (!r.audit.hypotheses_ok) {
      r.cause = "hypotheses: " + r.audit.cause;
      return r;
    }
    const WignerFunction w0 = wigner_transform(omega0);

    std::set<double> times(cfg.sample_times.begin(), cfg.sample_times.end());
    times.insert(cfg.remainder_times.begin(), cfg.remainder_times.end());
    times.insert(cfg.t_final);
    times.erase(0.0);
    const std::vector<double> samples(times.begin(), times.end());

    HartreeConfig hc;
    hc.dt = cfg.dt;
    hc.t_final = cfg.t_final;
    hc.potential = pot;
    hc.scheme = cfg.hartree_scheme;
    hc.midpoint_predictor = cfg.midpoint_predictor;
    VlasovConfig vc;
    vc.dt = cfg.dt;
    vc.t_final = cfg.t_final;
    vc.potential = pot;
    vc.v_interpolation = cfg.v_interpolation;
    vc.force_sign = cfg.force_sign;

    const auto ht = evolve_hartree(omega0, hc, samples);
    const auto vt = evolve_vlasov(w0, vc, samples);

    const double trace0 = omega0.trace();
    const double purity0 = hs_norm(omega0) * hs_norm(omega0);
    const double mass0 = w0.mass();
    double eh0 = 0.0, ev0 = 0.0;
    for (std::size_t k = 0; k < ht.times.size(); ++k) {
      const double t = ht.times[k];
      const DensityMatrix& omega = ht.states[k];
      const WignerFunction& wt = vt.states[k];
      const DensityMatrix omega_t = weyl_quantize(wt, N);
      DistanceRow row;
      row.t = t;
      row.trace_over_N = trace_distance(omega, omega_t) / N;
      row.hs_over_sqrtN = hs_distance(omega, omega_t) / std::sqrt(static_cast<double>(N));
      row.l2 = l2_distance(wigner_transform(omega), wt);
      row.hartree_energy = hartree_energy(omega, field);
      row.vlasov_energy = total_energy(wt, field);
      row.hartree_trace = omega.trace();
      row.hartree_purity = hs_norm(omega) * hs_norm(omega);
      row.vlasov_mass = wt.mass();
      const SpatialDensity rho = density(omega);
      const SpatialDensity rho_t = density(wt);
      row.commutator = t > 0.0 ? duhamel_commutator_norm(rho, rho_t, omega_t, field) : 0.0;
      row.l1_density = grid.h * (rho.values - rho_t.values).cwiseAbs().sum();
      const bool want_remainder = std::any_of(cfg.remainder_times.begin(), cfg.remainder_times.end(),
                                              [t](double s) { return std::abs(s - t) < 1e-12; });
      if (want_remainder) {
        const auto rem = remainder_trace_norm(wt, field, N);
        row.remainder_trace = rem.trace_norm;
        row.remainder_ratio = rem.ratio;
      }
      if (k == 0) {
        eh0 = row.hartree_energy;
        ev0 = row.vlasov_energy;
      }
      r.hartree_energy_drift = std::max(r.hartree_energy_drift, std::abs(row.hartree_energy - eh0));
      r.vlasov_energy_drift = std::max(r.vlasov_energy_drift, std::abs(row.vlasov_energy - ev0));
      r.hartree_trace_drift = std::max(r.hartree_trace_drift, std::abs(row.hartree_trace - trace0) / trace0);
      r.hartree_purity_drift = std::max(r.hartree_purity_drift, std::abs(row.hartree_purity - purity0) / purity0);
      r.vlasov_mass_drift = std::max(r.vlasov_mass_drift, std::abs(row.vlasov_mass - mass0));
      if (cfg.dump_states) {
        const auto dir = std::filesystem::path(cfg.output_dir) / "states";
        std::filesystem::create_directories(dir);
        std::ostringstream stem;
        stem << "N" << N << "_t" << t;
        write_density_matrix((dir / (stem.str() + "_hartree")).string(), omega, t);
        write_wigner((dir / (stem.str() + "_vlasov")).string(), wt, t, N);
      }
      r.rows.push_back(row);
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.cause = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

bool hard_invariants_hold(const RungResult& r, const InvariantBudget& b) {
  if (!r.ok) return true;  // failed rungs are reported, not counted as invariant violations
  return r.hartree_trace_drift <= b.trace && r.hartree_purity_drift <= b.purity && r.vlasov_mass_drift <= b.mass &&
         r.hartree_energy_drift <= b.energy && r.vlasov_energy_drift <= b.energy;
}

namespace {

MetricTrend trend(const std::vector<RungResult>& rungs, const std::string& metric, double t,
                  double (*pick)(const DistanceRow&)) {
  MetricTrend tr;
  tr.metric = metric;
  tr.t = t;
  for (const auto& r : rungs) {
    if (!r.ok) continue;
    for (const auto& row : r.rows) {
      if (std::abs(row.t - t) < 1e-12) tr.points.emplace_back(r.eps, pick(row));
    }
  }
  tr.strictly_decreasing = tr.points.size() >= 2;
  for (std::size_t i = 1; i < tr.points.size(); ++i) {
    tr.strictly_decreasing = tr.strictly_decreasing && tr.points[i].second < tr.points[i - 1].second;
  }
  try {
    tr.fit = fit_loglog_slope(tr.points);
  } catch (const std::exception& e) {
    tr.cause = e.what();
  }
  return tr;
}

}  // namespace

ConvergenceReport run_convergence_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ConvergenceReport rep;
  rep.config = cfg;
  rep.m0_threshold = moment_threshold(cfg.alpha);
  rep.rungs.resize(cfg.N_ladder.size());
  if (cfg.threads > 1) {
    std::vector<std::future<RungResult>> pending;
    std::size_t next = 0;
    std::vector<std::size_t> slot;
    while (next < cfg.N_ladder.size() || !pending.empty()) {
      while (next < cfg.N_ladder.size() && static_cast<int>(pending.size()) < cfg.threads) {
        pending.push_back(std::async(std::launch::async, run_rung, std::cref(cfg), cfg.N_ladder[next]));
        slot.push_back(next++);
      }
      rep.rungs[slot.front()] = pending.front().get();
      pending.erase(pending.begin());
      slot.erase(slot.begin());
    }
  } else {
    for (std::size_t i = 0; i < cfg.N_ladder.size(); ++i) rep.rungs[i] = run_rung(cfg, cfg.N_ladder[i]);
  }

  std::set<double> times(cfg.sample_times.begin(), cfg.sample_times.end());
  times.insert(cfg.t_final);
  times.erase(0.0);
  for (double t : times) {
    rep.trends.push_back(trend(rep.rungs, "trace_dist_over_N", t, [](const DistanceRow& r) { return r.trace_over_N; }));
    rep.trends.push_back(trend(rep.rungs, "hs_dist_over_sqrtN", t, [](const DistanceRow& r) { return r.hs_over_sqrtN; }));
    rep.trends.push_back(trend(rep.rungs, "l2_dist", t, [](const DistanceRow& r) { return r.l2; }));
  }
  for (double t : cfg.remainder_times) {
    if (t == 0.0) continue;
    rep.trends.push_back(trend(rep.rungs, "remainder_ratio", t,
                               [](const DistanceRow& r) { return r.remainder_ratio.value_or(0.0); }));
  }
  rep.hard_invariants_ok = std::all_of(rep.rungs.begin(), rep.rungs.end(),
                                       [](const RungResult& r) { return hard_invariants_hold(r); });
  return rep;
}

}  // namespace hvlab

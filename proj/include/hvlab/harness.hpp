#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hvlab/hartree.hpp"
#include "hvlab/vlasov.hpp"

namespace hvlab {

struct ExperimentConfig {
  double alpha = 0.25;
  int gamma = 1;
  std::vector<int> N_ladder{8, 16, 32, 64, 128};
  double L = 12.0;
  int M = 0;             ///< fixed points per axis; 0 selects auto_grid_points per rung
  int M_min = 128;
  double v_cover = 3.0;  ///< auto M keeps v_max >= v_cover * (Fermi velocity ~ 1)
  double T = 0.2;
  double trap = 1.0;
  double dt = 0.01;
  double t_final = 1.0;
  std::vector<double> sample_times{0.25, 0.5, 1.0};
  std::vector<double> remainder_times{0.25, 0.5};
  std::string output_dir = "out";
  int force_sign = 1;
  std::uint64_t seed = 0;
  HartreeScheme hartree_scheme = HartreeScheme::drift_kick_drift;
  bool midpoint_predictor = true;
  VInterpolation v_interpolation = VInterpolation::fourier;
  double m0 = 2.0;       ///< highest audited velocity moment
  int sobolev_order = 6;
  double sobolev_weight = 4.0;
  double kinetic_bound = 10.0;  ///< hypothesis: tr(-eps^2 Lap omega) <= kinetic_bound * N
  bool dump_states = false;
  int threads = 1;
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig load_experiment_config(const std::string& path);

/// Smallest 2^a 3^b 5^c with a >= 2 that is >= max(M_min, v_cover N L / pi).
int auto_grid_points(int N, double L, int M_min, double v_cover);

/// 3 alpha / (2 - alpha): the moment order the hypotheses require to exceed.
double moment_threshold(double alpha);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double stderr_slope = 0.0;
  double ci_low = 0.0;   ///< 95% interval on the slope (Student t)
  double ci_high = 0.0;
  int points = 0;
};

/// Least squares on (log eps, log dist). Needs >= 3 points, all positive, distinct eps.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

struct AuditReport {
  double trace = 0.0;
  double min_eig = 0.0;
  double max_eig = 0.0;
  double hermiticity = 0.0;
  double kinetic_per_N = 0.0;
  double energy = 0.0;
  double W_L1 = 0.0;
  double W_Linf = 0.0;
  double m0_threshold = 0.0;
  std::vector<std::pair<double, double>> moments;   ///< (m, iint |v|^m |W|)
  std::vector<std::pair<int, double>> sobolev;       ///< (k, ||W||_{H^k_a})
  double sobolev_weight = 0.0;
  double boundary_mass_x = 0.0;  ///< rho mass with |x| > L/4
  double boundary_mass_v = 0.0;  ///< |W| mass with |v| > v_max / 2
  bool hypotheses_ok = true;
  std::string cause;
};

/// Records the hypotheses behind the convergence bound for one initial state.
AuditReport audit_assumptions(const DensityMatrix& omega, const MeanField& field, const ExperimentConfig& cfg);

struct DistanceRow {
  double t = 0.0;
  double trace_over_N = 0.0;
  double hs_over_sqrtN = 0.0;
  double l2 = 0.0;
  double hartree_energy = 0.0;
  double vlasov_energy = 0.0;
  double hartree_trace = 0.0;
  double hartree_purity = 0.0;
  double vlasov_mass = 0.0;
  double commutator = 0.0;       ///< tr |[V*(rho - rho~), omega~]|
  double l1_density = 0.0;       ///< h sum |rho - rho~|
  std::optional<double> remainder_trace;
  std::optional<double> remainder_ratio;
};

struct RungResult {
  int N = 0;
  double eps = 0.0;
  int M = 0;
  bool ok = false;
  std::string cause;
  AuditReport audit;
  std::vector<DistanceRow> rows;
  double hartree_energy_drift = 0.0;
  double vlasov_energy_drift = 0.0;
  double hartree_trace_drift = 0.0;
  double hartree_purity_drift = 0.0;
  double vlasov_mass_drift = 0.0;
  double seconds = 0.0;
};

struct MetricTrend {
  std::string metric;
  double t = 0.0;
  std::vector<std::pair<double, double>> points;  ///< (eps, value) over healthy rungs
  bool strictly_decreasing = false;               ///< in N
  std::optional<SlopeFit> fit;
  std::string cause;
};

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<RungResult> rungs;
  std::vector<MetricTrend> trends;
  double m0_threshold = 0.0;
  double reference_exponent = 0.4;  ///< 3D rate prefactor exponent, context only
  bool hard_invariants_ok = true;
};

/// Runs one rung: thermal state, audit, paired evolution, distances.
RungResult run_rung(const ExperimentConfig& cfg, int N);

ConvergenceReport run_convergence_experiment(const ExperimentConfig& cfg);

/// Conservation budgets that count as hard invariants of a run.
struct InvariantBudget {
  double trace = 1e-8;          ///< relative, Hartree
  double purity = 1e-8;         ///< relative, Hartree
  double mass = 1e-8;           ///< Vlasov
  double energy = 1e-4;         ///< both solvers over the run
};

bool hard_invariants_hold(const RungResult& r, const InvariantBudget& budget = {});

}  // namespace hvlab

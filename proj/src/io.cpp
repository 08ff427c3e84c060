#include "hvlab/io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hvlab/error.hpp"

namespace hvlab {
namespace {

static_assert(std::endian::native == std::endian::little, "dumps assume a little-endian host");

void write_doubles(const std::string& path, const std::vector<double>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
}

std::vector<double> read_doubles(const std::string& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot read " + path);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != expected * sizeof(double)) {
    throw GridMismatchError(path + ": size " + std::to_string(bytes) + " bytes does not match the sidecar grid");
  }
  in.seekg(0);
  std::vector<double> data(expected);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  return data;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json grid_json(const PhaseSpaceGrid& g) { return {{"d", g.d}, {"L", g.L}, {"M", g.M}, {"eps", g.eps}}; }

PhaseSpaceGrid grid_from_json(const nlohmann::json& j) {
  try {
    return make_grid(j.at("d").get<int>(), j.at("L").get<double>(), j.at("M").get<int>(), j.at("eps").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("grid", std::string("malformed sidecar: ") + e.what());
  }
}

void write_wigner(const std::string& stem, const WignerFunction& w, std::optional<double> t, std::optional<int> N) {
  const int M = w.grid.M;
  std::vector<double> data(static_cast<std::size_t>(M) * M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) data[static_cast<std::size_t>(i) * M + j] = w.values(i, j);
  }
  write_doubles(stem + ".bin", data);
  nlohmann::json side = grid_json(w.grid);
  side["axis_order"] = {"x", "v"};
  side["kind"] = "wigner";
  if (t) side["t"] = *t;
  if (N) side["N"] = *N;
  write_json(stem + ".json", side);
}

WignerFunction read_wigner(const std::string& stem, nlohmann::json* sidecar) {
  const auto side = read_json(stem + ".json");
  if (side.value("axis_order", nlohmann::json::array()) != nlohmann::json({"x", "v"})) {
    throw ConfigError("axis_order", stem + ": expected [\"x\", \"v\"]");
  }
  WignerFunction w{grid_from_json(side), {}};
  const int M = w.grid.M;
  const auto data = read_doubles(stem + ".bin", static_cast<std::size_t>(M) * M);
  w.values.resize(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) w.values(i, j) = data[static_cast<std::size_t>(i) * M + j];
  }
  if (sidecar) *sidecar = side;
  return w;
}

void write_density_matrix(const std::string& stem, const DensityMatrix& omega, std::optional<double> t) {
  const int M = omega.grid.M;
  std::vector<double> data(2 * static_cast<std::size_t>(M) * M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const std::size_t at = 2 * (static_cast<std::size_t>(i) * M + j);
      data[at] = omega.kernel(i, j).real();
      data[at + 1] = omega.kernel(i, j).imag();
    }
  }
  write_doubles(stem + ".bin", data);
  nlohmann::json side{{"N", omega.N}, {"grid", grid_json(omega.grid)}, {"kind", "density_matrix"},
                      {"layout", "row-major interleaved re/im"}};
  if (t) side["t"] = *t;
  write_json(stem + ".json", side);
}

DensityMatrix read_density_matrix(const std::string& stem, nlohmann::json* sidecar) {
  const auto side = read_json(stem + ".json");
  DensityMatrix omega{grid_from_json(side.at("grid")), {}, side.at("N").get<int>()};
  const int M = omega.grid.M;
  const auto data = read_doubles(stem + ".bin", 2 * static_cast<std::size_t>(M) * M);
  omega.kernel.resize(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const std::size_t at = 2 * (static_cast<std::size_t>(i) * M + j);
      omega.kernel(i, j) = cplx{data[at], data[at + 1]};
    }
  }
  if (sidecar) *sidecar = side;
  return omega;
}

void write_grid_function(const std::string& stem, const PhaseSpaceGrid& grid, const Eigen::VectorXd& f) {
  if (f.size() != grid.M) throw GridMismatchError("write_grid_function: length does not match grid");
  write_doubles(stem + ".bin", std::vector<double>(f.data(), f.data() + f.size()));
  nlohmann::json side = grid_json(grid);
  side["axis_order"] = {"x"};
  write_json(stem + ".json", side);
}

nlohmann::json to_json(const EstimateReport& r) {
  nlohmann::json j{{"name", r.name}, {"lhs", r.lhs}, {"rhs_bound", r.rhs_bound}, {"pass", r.pass}};
  j["ratio"] = std::isfinite(r.ratio) ? nlohmann::json(r.ratio) : nlohmann::json(nullptr);
  j["params"] = r.params;
  return j;
}

nlohmann::json to_json(const SlopeFit& f) {
  return {{"slope", f.slope},   {"intercept", f.intercept}, {"r2", f.r2},          {"stderr", f.stderr_slope},
          {"ci_low", f.ci_low}, {"ci_high", f.ci_high},     {"points", f.points}};
}

const std::vector<std::string>& distance_columns() {
  static const std::vector<std::string> cols{
      "N",           "eps",           "M",           "t",
      "trace_dist_over_N", "hs_dist_over_sqrtN", "l2_dist", "hartree_energy",
      "vlasov_energy", "hartree_trace", "hartree_purity", "vlasov_mass",
      "commutator_trace_norm", "l1_density_dist", "remainder_trace_norm", "remainder_ratio"};
  return cols;
}

const std::vector<std::string>& audit_columns() {
  static const std::vector<std::string> cols{"N", "eps", "M", "quantity", "order", "value"};
  return cols;
}

nlohmann::json to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["schema"] = "hvlab.convergence/1";
  j["config"] = to_json(r.config);
  j["m0_threshold"] = r.m0_threshold;
  j["reference_exponent_3d"] = r.reference_exponent;
  j["hard_invariants_ok"] = r.hard_invariants_ok;
  j["rungs"] = nlohmann::json::array();
  for (const auto& g : r.rungs) {
    nlohmann::json rj{{"N", g.N}, {"eps", g.eps}, {"M", g.M}, {"ok", g.ok}, {"seconds", g.seconds}};
    rj["cause"] = g.ok ? nlohmann::json(nullptr) : nlohmann::json(g.cause);
    const auto& a = g.audit;
    nlohmann::json aj{{"trace", a.trace},
                      {"min_eig", a.min_eig},
                      {"max_eig", a.max_eig},
                      {"hermiticity", a.hermiticity},
                      {"kinetic_per_N", a.kinetic_per_N},
                      {"energy", a.energy},
                      {"W_L1", a.W_L1},
                      {"W_Linf", a.W_Linf},
                      {"m0_threshold", a.m0_threshold},
                      {"sobolev_weight", a.sobolev_weight},
                      {"boundary_mass_x", a.boundary_mass_x},
                      {"boundary_mass_v", a.boundary_mass_v},
                      {"hypotheses_ok", a.hypotheses_ok}};
    aj["moments"] = nlohmann::json::array();
    for (const auto& [m, v] : a.moments) aj["moments"].push_back({{"m", m}, {"value", v}});
    aj["sobolev"] = nlohmann::json::array();
    for (const auto& [k, v] : a.sobolev) aj["sobolev"].push_back({{"k", k}, {"value", v}});
    rj["audit"] = aj;
    rj["drifts"] = {{"hartree_energy", g.hartree_energy_drift}, {"vlasov_energy", g.vlasov_energy_drift},
                    {"hartree_trace", g.hartree_trace_drift},   {"hartree_purity", g.hartree_purity_drift},
                    {"vlasov_mass", g.vlasov_mass_drift}};
    rj["rows"] = nlohmann::json::array();
    for (const auto& row : g.rows) {
      rj["rows"].push_back({{"t", row.t},
                            {"trace_dist_over_N", row.trace_over_N},
                            {"hs_dist_over_sqrtN", row.hs_over_sqrtN},
                            {"l2_dist", row.l2},
                            {"hartree_energy", row.hartree_energy},
                            {"vlasov_energy", row.vlasov_energy},
                            {"commutator_trace_norm", row.commutator},
                            {"l1_density_dist", row.l1_density},
                            {"remainder_trace_norm", opt_json(row.remainder_trace)},
                            {"remainder_ratio", opt_json(row.remainder_ratio)}});
    }
    j["rungs"].push_back(rj);
  }
  j["trends"] = nlohmann::json::array();
  for (const auto& t : r.trends) {
    nlohmann::json tj{{"metric", t.metric}, {"t", t.t}, {"strictly_decreasing", t.strictly_decreasing}};
    tj["points"] = nlohmann::json::array();
    for (const auto& [e, v] : t.points) tj["points"].push_back({{"eps", e}, {"value", v}});
    tj["fit"] = t.fit ? to_json(*t.fit) : nlohmann::json(nullptr);
    tj["cause"] = t.fit ? nlohmann::json(nullptr) : nlohmann::json(t.cause);
    j["trends"].push_back(tj);
  }
  return j;
}

void write_report(const std::string& dir, const ConvergenceReport& r) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  write_json((base / "report.json").string(), to_json(r));

  std::ofstream d(base / "distances.csv");
  const auto& cols = distance_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) d << (i ? "," : "") << cols[i];
  d << '\n';
  for (const auto& g : r.rungs) {
    for (const auto& row : g.rows) {
      d << g.N << ',' << num(g.eps) << ',' << g.M << ',' << num(row.t) << ',' << num(row.trace_over_N) << ','
        << num(row.hs_over_sqrtN) << ',' << num(row.l2) << ',' << num(row.hartree_energy) << ','
        << num(row.vlasov_energy) << ',' << num(row.hartree_trace) << ',' << num(row.hartree_purity) << ','
        << num(row.vlasov_mass) << ',' << num(row.commutator) << ',' << num(row.l1_density) << ','
        << opt(row.remainder_trace) << ',' << opt(row.remainder_ratio) << '\n';
    }
  }

  std::ofstream a(base / "audits.csv");
  const auto& acols = audit_columns();
  for (std::size_t i = 0; i < acols.size(); ++i) a << (i ? "," : "") << acols[i];
  a << '\n';
  for (const auto& g : r.rungs) {
    const auto& au = g.audit;
    auto line = [&](const char* q, const std::string& order, double v) {
      a << g.N << ',' << num(g.eps) << ',' << g.M << ',' << q << ',' << order << ',' << num(v) << '\n';
    };
    line("trace", "", au.trace);
    line("min_eig", "", au.min_eig);
    line("max_eig", "", au.max_eig);
    line("kinetic_per_N", "", au.kinetic_per_N);
    line("energy", "", au.energy);
    line("W_L1", "", au.W_L1);
    line("W_Linf", "", au.W_Linf);
    line("boundary_mass_x", "", au.boundary_mass_x);
    line("boundary_mass_v", "", au.boundary_mass_v);
    for (const auto& [m, v] : au.moments) line("velocity_moment_abs", num(m), v);
    for (const auto& [k, v] : au.sobolev) line("sobolev_weighted", std::to_string(k), v);
  }
}

}  // namespace hvlab

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hvlab/error.hpp"
#include "hvlab/estimates.hpp"
#include "hvlab/harness.hpp"
#include "hvlab/io.hpp"
#include "hvlab/norms.hpp"
#include "hvlab/potential.hpp"
#include "hvlab/thermal.hpp"
#include "hvlab/wigner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hvlab;

namespace {

std::string sidecar_kind(const std::string& stem) {
  std::ifstream in(stem + ".json");
  if (!in) throw std::runtime_error("cannot read " + stem + ".json");
  json j;
  in >> j;
  return j.value("kind", j.contains("grid") ? "density_matrix" : "wigner");
}

ExperimentConfig load_or_default(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : load_experiment_config(path);
}

int pick_N(const ExperimentConfig& cfg, int N) { return N > 0 ? N : cfg.N_ladder.front(); }

PhaseSpaceGrid rung_grid(const ExperimentConfig& cfg, int N) {
  const int M = cfg.M > 0 ? cfg.M : auto_grid_points(N, cfg.L, cfg.M_min, cfg.v_cover);
  return make_grid(1, cfg.L, M, 1.0 / N);
}

std::vector<double> every_k(double dt, double t_final, int k) {
  std::vector<double> out;
  if (k <= 0) return out;
  const long n = step_count(t_final, dt, "t_final");
  for (long s = k; s <= n; s += k) out.push_back(s * dt);
  return out;
}

std::string stem_at(const fs::path& dir, const char* prefix, double t) {
  std::ostringstream s;
  s << prefix << "_t" << std::fixed << std::setprecision(6) << t;
  return (dir / s.str()).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hvlab: Hartree / Vlasov semiclassical lab"};
  app.require_subcommand(1);

  // state
  auto* state = app.add_subcommand("state", "build, transform and inspect states");
  state->require_subcommand(1);
  int mt_N = 16, mt_M = 0;
  double mt_T = 0.2, mt_trap = 1.0, mt_L = 12.0;
  std::string mt_out;
  auto* make_thermal = state->add_subcommand("make-thermal", "Fermi-Dirac state of -eps^2 Lap + trap x^2");
  make_thermal->add_option("--N", mt_N, "particle number (eps = 1/N)")->check(CLI::PositiveNumber);
  make_thermal->add_option("--T", mt_T, "temperature")->check(CLI::NonNegativeNumber);
  make_thermal->add_option("--trap", mt_trap, "trap strength");
  make_thermal->add_option("--L", mt_L, "box length");
  make_thermal->add_option("--M", mt_M, "points per axis (0: auto)");
  make_thermal->add_option("--out", mt_out, "output stem")->required();

  std::string in_stem, out_stem;
  int weyl_N = 0;
  auto* wigner_cmd = state->add_subcommand("wigner", "density matrix dump -> Wigner dump");
  wigner_cmd->add_option("--in", in_stem)->required();
  wigner_cmd->add_option("--out", out_stem)->required();
  auto* weyl_cmd = state->add_subcommand("weyl", "Wigner dump -> density matrix dump");
  weyl_cmd->add_option("--in", in_stem)->required();
  weyl_cmd->add_option("--out", out_stem)->required();
  weyl_cmd->add_option("--N", weyl_N, "particle number (default: sidecar N)");
  auto* norms_cmd = state->add_subcommand("norms", "norms and diagnostics of a dump");
  norms_cmd->add_option("--in", in_stem)->required();

  // potential
  auto* potential = app.add_subcommand("potential", "FdLL decomposition of |x|^-alpha");
  potential->require_subcommand(1);
  double p_alpha = 0.25;
  int p_d = 1;
  std::vector<double> p_x;
  auto* reconstruct = potential->add_subcommand("reconstruct", "CSV x, V, reconstructed, ratio - 1");
  reconstruct->add_option("--alpha", p_alpha);
  reconstruct->add_option("--d", p_d);
  reconstruct->add_option("--x", p_x, "evaluation points")->required();
  double r_min = 1e-3, r_max = 1e3;
  int r_count = 61;
  std::string table_out;
  auto* calibrate = potential->add_subcommand("calibrate", "normalisation c(alpha, d) and kernel table");
  calibrate->add_option("--alpha", p_alpha);
  calibrate->add_option("--d", p_d);
  calibrate->add_option("--table", table_out, "write CSV r, g(r)");
  calibrate->add_option("--r-min", r_min);
  calibrate->add_option("--r-max", r_max);
  calibrate->add_option("--count", r_count);

  // solvers
  std::string config_path, run_out = "out";
  int run_N = 0, dump_every = 0;
  auto* hartree = app.add_subcommand("hartree", "Hartree evolution");
  hartree->require_subcommand(1);
  auto* hartree_run = hartree->add_subcommand("run", "evolve the thermal state, write hartree.csv");
  hartree_run->add_option("--config", config_path, "experiment JSON");
  hartree_run->add_option("--N", run_N, "rung (default: first in N_ladder)");
  hartree_run->add_option("--dump-every", dump_every, "dump every k steps (0: none)");
  hartree_run->add_option("--out", run_out);
  auto* vlasov = app.add_subcommand("vlasov", "Vlasov evolution");
  vlasov->require_subcommand(1);
  auto* vlasov_run = vlasov->add_subcommand("run", "evolve the Wigner function of the thermal state, write vlasov.csv");
  vlasov_run->add_option("--config", config_path, "experiment JSON");
  vlasov_run->add_option("--N", run_N);
  vlasov_run->add_option("--dump-every", dump_every);
  vlasov_run->add_option("--out", run_out);

  // checks
  auto* check = app.add_subcommand("check", "estimate checkers (JSON lines)");
  check->require_subcommand(1);
  std::vector<double> gz{0, 0, 0}, gw{1, 0, 0};
  double gs = 0.5, gr = 1.0, im = 2.0;
  int gj = 0, gk = 0;
  auto* gauss = check->add_subcommand("gaussian-integral", "Gaussian product integral vs bound");
  gauss->add_option("--z", gz)->expected(3);
  gauss->add_option("--w", gw)->expected(3);
  gauss->add_option("--s", gs);
  gauss->add_option("--r", gr);
  gauss->add_option("--j", gj);
  gauss->add_option("--k", gk);
  auto* interp = check->add_subcommand("interpolation", "density L^p bound for a Wigner or kernel dump");
  interp->add_option("--in", in_stem)->required();
  interp->add_option("--m", im);
  std::string traj_dir;
  double c_alpha = 0.25;
  int c_gamma = 1;
  auto* remainder = check->add_subcommand("remainder", "tr|B| for every Wigner dump in a directory");
  remainder->add_option("--trajectory", traj_dir)->required();
  remainder->add_option("--alpha", c_alpha);
  remainder->add_option("--gamma", c_gamma);

  // lab
  auto* lab = app.add_subcommand("lab", "convergence experiment");
  lab->require_subcommand(1);
  auto* lab_run = lab->add_subcommand("run", "run the N ladder and write report.json, distances.csv, audits.csv");
  lab_run->add_option("--config", config_path, "experiment JSON");
  std::string report_dir = "out";
  auto* lab_report = lab->add_subcommand("report", "summarise an existing report directory");
  lab_report->add_option("--dir", report_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (make_thermal->parsed()) {
      const int M = mt_M > 0 ? mt_M : auto_grid_points(mt_N, mt_L, 128, 3.0);
      const auto grid = make_grid(1, mt_L, M, 1.0 / mt_N);
      const auto omega = build_thermal_state(grid, mt_N, mt_trap, mt_T);
      write_density_matrix(mt_out, omega);
      const auto d = inspect(omega);
      std::cout << json{{"N", mt_N}, {"M", M}, {"trace", d.trace}, {"min_eig", d.min_eig}, {"max_eig", d.max_eig},
                        {"purity", d.purity}}.dump()
                << '\n';
    } else if (wigner_cmd->parsed()) {
      const auto omega = read_density_matrix(in_stem);
      write_wigner(out_stem, wigner_transform(omega), std::nullopt, omega.N);
    } else if (weyl_cmd->parsed()) {
      json side;
      const auto w = read_wigner(in_stem, &side);
      const int N = weyl_N > 0 ? weyl_N : side.value("N", 0);
      if (N <= 0) throw ConfigError("N", "not in the sidecar; pass --N");
      write_density_matrix(out_stem, weyl_quantize(w, N));
    } else if (norms_cmd->parsed()) {
      json out;
      if (sidecar_kind(in_stem) == "density_matrix") {
        const auto omega = read_density_matrix(in_stem);
        const auto d = inspect(omega);
        out = {{"kind", "density_matrix"}, {"trace", d.trace},   {"hermiticity", d.hermiticity},
               {"min_eig", d.min_eig},     {"max_eig", d.max_eig}, {"purity", d.purity},
               {"hs_norm", hs_norm(omega)}, {"trace_norm", trace_norm(omega.grid.h * omega.kernel)},
               {"kinetic", kinetic_energy(omega)}};
      } else {
        const auto w = read_wigner(in_stem);
        out = {{"kind", "wigner"}, {"mass", w.mass()}, {"l2_norm", l2_norm(w)},
               {"L1", w.grid.cell() * w.values.cwiseAbs().sum()}, {"Linf", w.values.cwiseAbs().maxCoeff()},
               {"kinetic", phase_space_kinetic(w)}};
      }
      std::cout << out.dump() << '\n';
    } else if (reconstruct->parsed()) {
      const auto dec = make_fdll(make_potential(p_alpha, 1, p_d));
      std::cout << "x,V,reconstructed,rel_error\n" << std::setprecision(17);
      for (double x : p_x) {
        const double v = std::pow(std::abs(x), -p_alpha);
        const double rec = fdll_reconstruct(dec, x);
        std::cout << x << ',' << v << ',' << rec << ',' << rec / v - 1.0 << '\n';
      }
    } else if (calibrate->parsed()) {
      const auto pot = make_potential(p_alpha, 1, p_d);
      const double c = fdll_normalization(p_alpha, p_d);
      std::cout << json{{"alpha", p_alpha}, {"d", p_d}, {"c", c}}.dump() << '\n';
      if (!table_out.empty()) {
        std::ofstream t(table_out);
        t << "r,g\n" << std::setprecision(17);
        for (int i = 0; i < r_count; ++i) {
          const double r = r_min * std::pow(r_max / r_min, r_count > 1 ? double(i) / (r_count - 1) : 0.0);
          t << r << ',' << fdll_weight(pot, r) << '\n';
        }
      }
    } else if (hartree_run->parsed()) {
      const auto cfg = load_or_default(config_path);
      const int N = pick_N(cfg, run_N);
      const auto grid = rung_grid(cfg, N);
      const auto pot = make_potential(cfg.alpha, cfg.gamma, 1);
      const MeanField field(grid, pot);
      HartreeConfig hc;
      hc.dt = cfg.dt;
      hc.t_final = cfg.t_final;
      hc.potential = pot;
      hc.scheme = cfg.hartree_scheme;
      hc.midpoint_predictor = cfg.midpoint_predictor;
      fs::create_directories(run_out);
      std::ofstream csv(fs::path(run_out) / "hartree.csv");
      csv << "t,trace,purity,energy,min_eig,max_eig\n" << std::setprecision(17);
      const fs::path dumps = fs::path(run_out) / "states";
      if (dump_every > 0) fs::create_directories(dumps);
      HartreeObserver obs = [&](const HartreeSample& s) {
        const auto d = inspect(s.omega);
        csv << s.t << ',' << d.trace << ',' << d.purity << ',' << hartree_energy(s.omega, field) << ','
            << d.min_eig << ',' << d.max_eig << '\n';
        if (dump_every > 0) write_density_matrix(stem_at(dumps, "hartree", s.t), s.omega, s.t);
      };
      evolve_hartree(build_thermal_state(grid, N, cfg.trap, cfg.T), hc, every_k(cfg.dt, cfg.t_final, dump_every),
                     {obs});
    } else if (vlasov_run->parsed()) {
      const auto cfg = load_or_default(config_path);
      const int N = pick_N(cfg, run_N);
      const auto grid = rung_grid(cfg, N);
      VlasovConfig vc;
      vc.dt = cfg.dt;
      vc.t_final = cfg.t_final;
      vc.potential = make_potential(cfg.alpha, cfg.gamma, 1);
      vc.v_interpolation = cfg.v_interpolation;
      vc.force_sign = cfg.force_sign;
      fs::create_directories(run_out);
      std::ofstream csv(fs::path(run_out) / "vlasov.csv");
      csv << "t,mass,l2,energy,max_E\n" << std::setprecision(17);
      const fs::path dumps = fs::path(run_out) / "states";
      if (dump_every > 0) fs::create_directories(dumps);
      VlasovObserver obs = [&](const VlasovSample& s) {
        csv << s.t << ',' << s.W.mass() << ',' << l2_norm(s.W) << ',' << s.energy << ','
            << s.E.cwiseAbs().maxCoeff() << '\n';
        if (dump_every > 0) write_wigner(stem_at(dumps, "vlasov", s.t), s.W, s.t, N);
      };
      const auto w0 = wigner_transform(build_thermal_state(grid, N, cfg.trap, cfg.T));
      evolve_vlasov(w0, vc, every_k(cfg.dt, cfg.t_final, dump_every), {obs});
    } else if (gauss->parsed()) {
      const auto rep = gaussian_integral_check({gz[0], gz[1], gz[2]}, {gw[0], gw[1], gw[2]}, gs, gr, gj, gk);
      std::cout << to_json(rep).dump() << '\n';
    } else if (interp->parsed()) {
      const auto w = sidecar_kind(in_stem) == "density_matrix" ? wigner_transform(read_density_matrix(in_stem))
                                                               : read_wigner(in_stem);
      std::cout << to_json(interpolation_check(w, im)).dump() << '\n';
    } else if (remainder->parsed()) {
      const auto pot = make_potential(c_alpha, c_gamma, 1);
      std::vector<fs::path> stems;
      for (const auto& e : fs::directory_iterator(traj_dir)) {
        if (e.path().extension() == ".json" && sidecar_kind(fs::path(e.path()).replace_extension().string()) == "wigner") {
          stems.push_back(e.path());
        }
      }
      std::sort(stems.begin(), stems.end());
      for (auto p : stems) {
        json side;
        const auto stem = p.replace_extension().string();
        const auto w = read_wigner(stem, &side);
        const int N = side.value("N", static_cast<int>(std::lround(1.0 / w.grid.eps)));
        const auto r = remainder_trace_norm(w, pot, N);
        json line{{"file", stem}, {"N", N}, {"trace_norm", r.trace_norm}, {"ratio", r.ratio}};
        line["t"] = side.contains("t") ? side["t"] : json(nullptr);
        std::cout << line.dump() << '\n';
      }
    } else if (lab_run->parsed()) {
      const auto cfg = load_or_default(config_path);
      const auto rep = run_convergence_experiment(cfg);
      write_report(cfg.output_dir, rep);
      for (const auto& r : rep.rungs) {
        std::cerr << "N=" << r.N << " M=" << r.M << (r.ok ? " ok" : " FAILED: " + r.cause) << " (" << r.seconds
                  << " s)\n";
      }
      return rep.hard_invariants_ok ? 0 : 2;
    } else if (lab_report->parsed()) {
      std::ifstream in(fs::path(report_dir) / "report.json");
      if (!in) throw std::runtime_error("no report.json in " + report_dir);
      json rep;
      in >> rep;
      std::cout << std::setprecision(4);
      for (const auto& r : rep.at("rungs")) {
        std::cout << "N=" << r.at("N") << " M=" << r.at("M") << " ok=" << r.at("ok") << '\n';
      }
      for (const auto& t : rep.at("trends")) {
        std::cout << t.at("metric").get<std::string>() << " t=" << t.at("t").get<double>()
                  << " decreasing=" << t.at("strictly_decreasing");
        if (!t.at("fit").is_null()) {
          std::cout << " slope=" << t["fit"].at("slope").get<double>() << " r2=" << t["fit"].at("r2").get<double>();
        } else {
          std::cout << " fit=null (" << t.at("cause").get<std::string>() << ")";
        }
        std::cout << '\n';
      }
      std::cout << "reference 3D exponent " << rep.at("reference_exponent_3d").get<double>() << " (context only)\n";
      return rep.at("hard_invariants_ok").get<bool>() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "hvlab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

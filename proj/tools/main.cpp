// Batch CLI for the two-mode beam-splitter library: ground-state sweeps,
// scaling fits, splitting dynamics, expansion fringe profiles, and a
// self-verification suite.  Every flag mirrors a config-file key; flags win.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 partial results written.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "twomode/dense_check.hpp"
#include "twomode/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace twomode;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPartial = 3;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
}

json section(const json& cfg, const char* name) {
  return cfg.contains(name) ? cfg.at(name) : json::object();
}

template <class T>
T pick(const CLI::App* cmd, const std::string& flag, T flag_value,
       const json& sec, const char* key, T fallback) {
  if (cmd->count(flag) > 0) return flag_value;
  if (sec.contains(key)) return sec.at(key).get<T>();
  return fallback;
}

void write_sidecar(const fs::path& csv_path, const std::string& command,
                   const json& effective) {
  json side{{"version", library_version},
            {"command", command},
            {"config", effective}};
  fs::path p = csv_path;
  p.replace_extension(".config.json");
  std::ofstream out(p);
  if (!out) throw config_error("cannot write sidecar: " + p.string());
  out << side.dump(2) << "\n";
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> n_entries;
  std::vector<double> g_params;
  unsigned threads = 1;
  std::uint64_t seed = 12345;
};

std::vector<int> resolve_n_list(const CLI::App*, const CommonOptions& opt,
                                const json& sec, const std::string& fallback) {
  std::vector<std::string> entries;
  if (!opt.n_entries.empty()) {
    entries = opt.n_entries;
  } else if (sec.contains("n")) {
    for (const auto& item : sec.at("n"))
      entries.push_back(item.is_string() ? item.get<std::string>()
                                         : std::to_string(item.get<int>()));
  } else {
    entries.push_back(fallback);
  }
  std::vector<int> ns;
  for (const auto& e : entries)
    for (int n : SweepSpec::expand_n_entry(e)) ns.push_back(n);
  if (ns.empty()) throw config_error("empty N list");
  return ns;
}

int run_ground_sweep(const CLI::App* cmd, const CommonOptions& opt,
                     const json& cfg, double delta_e_flag) {
  const json sec = section(cfg, "ground_sweep");
  SweepSpec spec;
  spec.n_list = resolve_n_list(cmd, opt, sec, "pair:100");
  if (!opt.g_params.empty())
    spec.g_param_grid = opt.g_params;
  else if (sec.contains("g_param"))
    spec.g_param_grid = sec.at("g_param").get<std::vector<double>>();
  else
    spec.g_param_grid = SweepSpec::default_g_grid();
  spec.delta_e = pick(cmd, "--delta-e", delta_e_flag, sec, "delta_e", 1.0);

  const Table table = ground_sweep(spec, opt.threads);
  const fs::path csv = fs::path(opt.out_dir) / "ground_sweep.csv";
  write_csv(csv, table);
  write_sidecar(csv, "ground-sweep",
                json{{"n", spec.n_list},
                     {"g_param", spec.g_param_grid},
                     {"delta_e", spec.delta_e},
                     {"threads", opt.threads}});
  const std::size_t bad = count_error_rows(table);
  std::cout << "wrote " << table.rows.size() << " rows to " << csv.string();
  if (bad > 0) std::cout << " (" << bad << " rows carry error markers)";
  std::cout << "\n";
  return bad == 0 ? kExitOk : kExitPartial;
}

int run_scaling(const CLI::App* cmd, const CommonOptions& opt, const json& cfg,
                const std::string& branch_flag, int fit_min_flag,
                int fit_max_flag) {
  const json sec = section(cfg, "scaling");
  ScalingSpec spec;
  const std::string branch =
      pick(cmd, "--branch", branch_flag, sec, "branch", std::string("attractive"));
  if (branch == "attractive")
    spec.branch = ScalingBranch::attractive;
  else if (branch == "repulsive")
    spec.branch = ScalingBranch::repulsive;
  else
    throw config_error("branch must be 'attractive' or 'repulsive'");

  if (!opt.n_entries.empty() || sec.contains("n"))
    spec.n_range = resolve_n_list(cmd, opt, sec, "");
  else
    spec.n_range = ScalingSpec::default_n_range();
  std::sort(spec.n_range.begin(), spec.n_range.end());

  spec.fit_window.first =
      pick(cmd, "--fit-min", fit_min_flag, sec, "fit_min", spec.n_range.front());
  spec.fit_window.second =
      pick(cmd, "--fit-max", fit_max_flag, sec, "fit_max", spec.n_range.back());

  const ScalingResult result = scaling_study(spec, opt.threads);
  const fs::path csv = fs::path(opt.out_dir) / ("scaling_" + branch + ".csv");
  write_csv(csv, result.table);
  write_sidecar(csv, "scaling",
                json{{"branch", branch},
                     {"n", spec.n_range},
                     {"fit_min", spec.fit_window.first},
                     {"fit_max", spec.fit_window.second},
                     {"exponent", result.exponent},
                     {"fit_residual", result.fit_residual},
                     {"threads", opt.threads}});
  std::cout << "wrote " << result.table.rows.size() << " rows to "
            << csv.string() << "\nexponent = " << format_value(result.exponent)
            << "  (rms log residual " << format_value(result.fit_residual)
            << ")\n";
  return kExitOk;
}

int run_dynamics(const CLI::App* cmd, const CommonOptions& opt, const json& cfg,
                 const std::string& branch_flag, double d_min_flag,
                 double g0_param_flag, double tau_flag, double gamma_flag,
                 double target_flag, bool freeze_flag, double pulse_area_flag,
                 double pulse_start_flag, double pulse_duration_flag,
                 double t_final_flag, double dt_flag, std::size_t stride_flag) {
  const json sec = section(cfg, "dynamics");
  DynamicsConfig config;
  const auto ns = resolve_n_list(cmd, opt, sec, "50");
  config.n_particles = ns.front();

  const std::string branch =
      pick(cmd, "--branch", branch_flag, sec, "branch", std::string("attractive"));
  if (branch != "attractive" && branch != "repulsive")
    throw config_error("branch must be 'attractive' or 'repulsive'");
  config.attractive = branch == "attractive";

  SplitProtocol& p = config.protocol;
  p.d_min = pick(cmd, "--d-min", d_min_flag, sec, "d_min", 1.0);
  p.tau = pick(cmd, "--tau", tau_flag, sec, "tau", 80.0);
  p.gamma = pick(cmd, "--gamma", gamma_flag, sec, "gamma", -1.0);
  p.freeze_delta_e = cmd->count("--freeze") > 0
                         ? freeze_flag
                         : sec.value("freeze_delta_e", false);
  p.t_final = pick(cmd, "--t-final", t_final_flag, sec, "t_final", -1.0);
  p.target_g_param =
      pick(cmd, "--target", target_flag, sec, "target_g_param",
           config.attractive ? -1.0
                             : 0.5 * config.n_particles * config.n_particles);

  // g0 from the initial G unless given directly in the config
  const double g0_param = pick(cmd, "--g0-param", g0_param_flag, sec, "g0_param",
                               config.attractive ? -0.1 : 0.1);
  p.g0 = sec.contains("g0") && cmd->count("--g0-param") == 0
             ? sec.at("g0").get<double>()
             : g0_param * p.delta_e0() / (2.0 * config.n_particles);

  if (!config.attractive) {
    PulseSpec pulse;
    pulse.area =
        pick(cmd, "--pulse-area", pulse_area_flag, sec, "pulse_area",
             std::numbers::pi / 2.0);
    pulse.start =
        pick(cmd, "--pulse-start", pulse_start_flag, sec, "pulse_start", p.tau);
    pulse.duration = pick(cmd, "--pulse-duration", pulse_duration_flag, sec,
                          "pulse_duration", 1.0);
    p.pulse = pulse;
  }

  config.dt = pick(cmd, "--dt", dt_flag, sec, "dt", -1.0);
  config.stride = pick(cmd, "--stride", stride_flag, sec, "stride",
                       std::size_t{100});

  const Table table = dynamics_run(config);
  const fs::path csv = fs::path(opt.out_dir) / "dynamics.csv";
  write_csv(csv, table);
  json eff{{"n", config.n_particles},
           {"branch", branch},
           {"d_min", p.d_min},
           {"g0", p.g0},
           {"tau", p.tau},
           {"gamma", p.gamma},
           {"target_g_param", p.target_g_param},
           {"freeze_delta_e", p.freeze_delta_e},
           {"t_final", p.t_final},
           {"dt", config.dt},
           {"stride", config.stride}};
  if (p.pulse)
    eff["pulse"] = json{{"area", p.pulse->area},
                        {"start", p.pulse->start},
                        {"duration", p.pulse->duration}};
  write_sidecar(csv, "dynamics", eff);
  std::cout << "wrote " << table.rows.size() << " rows to " << csv.string()
            << "\n";
  return kExitOk;
}

int run_expansion(const CLI::App* cmd, const CommonOptions& opt,
                  const json& cfg, double d_flag, double time_flag,
                  double omega_flag, double delta_y_flag, double theta_flag,
                  std::size_t points_flag, double delta_e_flag) {
  const json sec = section(cfg, "expansion");
  ExpansionConfig config;
  config.n_particles = resolve_n_list(cmd, opt, sec, "100").front();
  if (!opt.g_params.empty())
    config.g_param = opt.g_params.front();
  else
    config.g_param = sec.value("g_param", 0.0);
  config.delta_e = pick(cmd, "--delta-e", delta_e_flag, sec, "delta_e", 1.0);
  config.geometry.d = pick(cmd, "--d", d_flag, sec, "d", 8.0);
  config.geometry.t = pick(cmd, "--time", time_flag, sec, "t", 10.0);
  config.geometry.omega = pick(cmd, "--omega", omega_flag, sec, "omega", 1.0);
  config.geometry.delta_y =
      pick(cmd, "--delta-y", delta_y_flag, sec, "delta_y", 1.0);
  config.geometry.theta = pick(cmd, "--theta", theta_flag, sec, "theta", 0.0);
  config.grid_points =
      pick(cmd, "--points", points_flag, sec, "points", std::size_t{2048});

  const Table table = expansion_render(config);
  const fs::path csv = fs::path(opt.out_dir) / "expansion.csv";
  write_csv(csv, table);
  write_sidecar(csv, "expansion",
                json{{"n", config.n_particles},
                     {"g_param", config.g_param},
                     {"delta_e", config.delta_e},
                     {"d", config.geometry.d},
                     {"t", config.geometry.t},
                     {"omega", config.geometry.omega},
                     {"delta_y", config.geometry.delta_y},
                     {"theta", config.geometry.theta},
                     {"points", config.grid_points}});
  std::cout << "wrote " << table.rows.size() << " rows to " << csv.string()
            << "\n";
  return kExitOk;
}

int run_selftest(const CommonOptions& opt, int draws) {
  std::cout << "tridiagonal vs dense eigensolver (all N <= 12, " << draws
            << " random draws each):\n";
  const int failures =
      oracle_equivalence_suite(opt.seed, draws, true, std::cout);
  if (failures != 0) {
    std::cout << failures << " draw(s) outside tolerance\n";
    return kExitNumerical;
  }

  // spot-check operator algebra on random states
  int bad = 0;
  for (int n : {3, 16, 41}) {
    const SpinState psi = random_spin_state(n, opt.seed + n);
    const auto jy = apply_operator(psi, CollectiveOperator::jy());
    const auto jz = apply_operator(psi, CollectiveOperator::jz());
    complexd c1 = 0.0;
    for (std::size_t k = 0; k < jy.size(); ++k) c1 += std::conj(jy[k]) * jz[k];
    const double jx = expectation(psi, CollectiveOperator::jx());
    // <[Jy,Jz]> = i<Jx>  =>  2 Im<psi|Jy Jz|psi> = <Jx>
    const bool comm_ok = std::abs(2.0 * c1.imag() - jx) < 1e-10;
    const double casimir = second_moment(psi, CollectiveOperator::jx()) +
                           second_moment(psi, CollectiveOperator::jy()) +
                           second_moment(psi, CollectiveOperator::jz());
    const double jj = 0.5 * n;
    const bool casimir_ok = std::abs(casimir - jj * (jj + 1.0)) < 1e-9 * n * n;
    const PhaseDistribution dist = phase_state_decomposition(psi);
    double w = 0.0;
    for (const auto& a : dist.amplitudes) w += std::norm(a);
    const bool parseval_ok = std::abs(w - 1.0) < 1e-12;
    std::cout << (comm_ok && casimir_ok && parseval_ok ? "[ok]   " : "[FAIL] ")
              << "N=" << n << ": commutator/Casimir/Parseval\n";
    if (!(comm_ok && casimir_ok && parseval_ok)) ++bad;
  }
  if (bad != 0) return kExitNumerical;
  std::cout << "selftest passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-mode condensate beam splitter: exact ground states, "
               "squeezing observables, expansion fringes, splitting dynamics"};
  app.require_subcommand(1);

  CommonOptions opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--n", opt.n_entries,
                 "particle numbers; 'pair:N' expands to {N, N+1}");
  app.add_option("--g-param", opt.g_params, "dimensionless G values");
  app.add_option("--threads", opt.threads, "worker threads");
  app.add_option("--seed", opt.seed, "RNG seed for randomized checks");

  auto* sweep_cmd = app.add_subcommand(
      "ground-sweep", "ground-state observables over an (N, G) grid");
  double sweep_delta_e = 1.0;
  sweep_cmd->add_option("--delta-e", sweep_delta_e, "tunnelling energy");

  auto* scaling_cmd = app.add_subcommand(
      "scaling", "phase-resolution power law over N at the optimal G");
  std::string scaling_branch = "attractive";
  int fit_min = 10, fit_max = 200;
  scaling_cmd->add_option("--branch", scaling_branch,
                          "attractive (G=-1) or repulsive (G=N^2/2)");
  scaling_cmd->add_option("--fit-min", fit_min, "fit window lower N");
  scaling_cmd->add_option("--fit-max", fit_max, "fit window upper N");

  auto* dyn_cmd =
      app.add_subcommand("dynamics", "time-dependent splitting protocol");
  std::string dyn_branch = "attractive";
  double d_min = 1.0, g0_param = -0.1, tau = 80.0, gamma = -1.0, target = -1.0;
  double pulse_area = std::numbers::pi / 2.0, pulse_start = 0.0,
         pulse_duration = 1.0, t_final = -1.0, dt = -1.0;
  bool freeze = false;
  std::size_t stride = 100;
  dyn_cmd->add_option("--branch", dyn_branch, "attractive or repulsive");
  dyn_cmd->add_option("--d-min", d_min, "half-separation at t=0");
  dyn_cmd->add_option("--g0-param", g0_param, "initial G");
  dyn_cmd->add_option("--tau", tau, "splitting duration");
  dyn_cmd->add_option("--gamma", gamma, "separation rate (<=0: solve from tau)");
  dyn_cmd->add_option("--target", target, "G at which the quench fires");
  dyn_cmd->add_flag("--freeze", freeze, "cut dE to zero at tau (attractive)");
  dyn_cmd->add_option("--pulse-area", pulse_area, "pulse area (repulsive)");
  dyn_cmd->add_option("--pulse-start", pulse_start, "pulse start (>= tau)");
  dyn_cmd->add_option("--pulse-duration", pulse_duration, "pulse duration");
  dyn_cmd->add_option("--t-final", t_final, "simulation horizon");
  dyn_cmd->add_option("--dt", dt, "time step (<=0: automatic)");
  dyn_cmd->add_option("--stride", stride, "record every this many steps");

  auto* exp_cmd =
      app.add_subcommand("expansion", "ballistic-expansion fringe profile");
  double exp_d = 8.0, exp_time = 10.0, exp_omega = 1.0, exp_delta_y = 1.0,
         exp_theta = 0.0, exp_delta_e = 1.0;
  std::size_t exp_points = 2048;
  exp_cmd->add_option("--d", exp_d, "half-separation at release");
  exp_cmd->add_option("--time", exp_time, "expansion time");
  exp_cmd->add_option("--omega", exp_omega, "trap frequency");
  exp_cmd->add_option("--delta-y", exp_delta_y, "in-trap width");
  exp_cmd->add_option("--theta", exp_theta, "imprinted relative phase");
  exp_cmd->add_option("--points", exp_points, "grid points");
  exp_cmd->add_option("--delta-e", exp_delta_e, "tunnelling energy");

  auto* self_cmd = app.add_subcommand(
      "selftest", "eigensolver cross-check and operator-algebra spot checks");
  int draws = 20;
  self_cmd->add_option("--draws", draws, "random draws per N");

  // global flags remain valid after the subcommand name
  for (CLI::App* cmd : {sweep_cmd, scaling_cmd, dyn_cmd, exp_cmd, self_cmd})
    cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const json cfg = load_config(opt.config_path);
    if (opt.config_path.size() > 0) {
      if (app.count("--threads") == 0 && cfg.contains("threads"))
        opt.threads = cfg.at("threads").get<unsigned>();
      if (app.count("--seed") == 0 && cfg.contains("seed"))
        opt.seed = cfg.at("seed").get<std::uint64_t>();
      if (app.count("--out") == 0 && cfg.contains("out"))
        opt.out_dir = cfg.at("out").get<std::string>();
    }
    fs::create_directories(opt.out_dir);

    if (sweep_cmd->parsed())
      return run_ground_sweep(sweep_cmd, opt, cfg, sweep_delta_e);
    if (scaling_cmd->parsed())
      return run_scaling(scaling_cmd, opt, cfg, scaling_branch, fit_min, fit_max);
    if (dyn_cmd->parsed())
      return run_dynamics(dyn_cmd, opt, cfg, dyn_branch, d_min, g0_param, tau,
                          gamma, target, freeze, pulse_area, pulse_start,
                          pulse_duration, t_final, dt, stride);
    if (exp_cmd->parsed())
      return run_expansion(exp_cmd, opt, cfg, exp_d, exp_time, exp_omega,
                           exp_delta_y, exp_theta, exp_points, exp_delta_e);
    if (self_cmd->parsed()) return run_selftest(opt, draws);
    return kExitConfig;
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

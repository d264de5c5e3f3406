#include "twomode/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "twomode/observables.hpp"

namespace twomode {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> SweepSpec::default_g_grid() {
  constexpr int points_per_branch = 61;
  constexpr double lo_exp = -2.0, hi_exp = 6.0;
  std::vector<double> grid;
  grid.reserve(2 * points_per_branch + 1);
  for (int i = points_per_branch - 1; i >= 0; --i) {
    const double e = lo_exp + (hi_exp - lo_exp) * i / (points_per_branch - 1);
    grid.push_back(-std::pow(10.0, e));
  }
  grid.push_back(0.0);
  for (int i = 0; i < points_per_branch; ++i) {
    const double e = lo_exp + (hi_exp - lo_exp) * i / (points_per_branch - 1);
    grid.push_back(std::pow(10.0, e));
  }
  return grid;
}

std::vector<int> SweepSpec::expand_n_entry(const std::string& entry) {
  try {
    if (entry.rfind("pair:", 0) == 0) {
      const int n = std::stoi(entry.substr(5));
      if (n < 1) throw config_error("pair N must be >= 1");
      return {n, n + 1};
    }
    const int n = std::stoi(entry);
    if (n < 1) throw config_error("N must be >= 1");
    return {n};
  } catch (const config_error&) {
    throw;
  } catch (const std::exception&) {
    throw config_error("bad N entry: '" + entry + "'");
  }
}

void parallel_for_index(std::size_t n, unsigned threads,
                        const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

// circular sharpness |sum |c_theta|^2 e^{i theta}|: 1 = locked phase, 0 = flat
double phase_sharpness(const SpinState& state) {
  const PhaseDistribution dist = phase_state_decomposition(state);
  complexd acc = 0.0;
  for (std::size_t k = 0; k < dist.amplitudes.size(); ++k)
    acc += std::norm(dist.amplitudes[k]) *
           std::polar(1.0, dist.theta_values[k]);
  return std::abs(acc);
}

double peak_amplitude(const SpinState& state) {
  double peak = 0.0;
  for (const auto& a : state.amplitudes) peak = std::max(peak, std::abs(a));
  return peak;
}

}  // namespace

Table ground_sweep(const SweepSpec& spec, unsigned threads) {
  if (spec.n_list.empty() || spec.g_param_grid.empty())
    throw config_error("ground_sweep: empty N list or G grid");
  if (!(spec.delta_e > 0.0))
    throw config_error("ground_sweep: delta_e must be > 0");

  Table table;
  table.columns = {"n",       "g_param",  "g",
                   "delta_e", "energy",   "gap",
                   "degenerate", "visibility", "jx_mean",
                   "jz2",     "var_jy",   "var_jz",
                   "uncertainty_product", "uncertainty_bound",
                   "dtheta2", "predicted_dtheta2", "xi_y",
                   "cm_peak", "phase_sharpness", "error"};

  struct Point {
    int n;
    double g_param;
  };
  std::vector<Point> points;
  for (int n : spec.n_list)
    for (double gp : spec.g_param_grid) points.push_back({n, gp});

  table.rows.resize(points.size());
  parallel_for_index(points.size(), threads, [&](std::size_t i) {
    const auto [n, gp] = points[i];
    std::vector<std::string> row(table.columns.size(), "nan");
    std::string error;
    row[0] = std::to_string(n);
    row[1] = format_value(gp);
    row[3] = format_value(spec.delta_e);
    try {
      const TwoModeParams params =
          gp == 0.0 ? TwoModeParams{n, 0.0, spec.delta_e}
                    : TwoModeParams::from_g_param(n, gp, spec.delta_e);
      row[2] = format_value(params.g);
      const GroundStateResult gs = ground_state(params);
      const SpinState& psi = gs.state;
      row[4] = format_value(gs.energy);
      row[5] = format_value(gs.gap);
      row[6] = gs.degenerate ? "1" : "0";
      row[7] = format_value(visibility(psi));
      row[8] = format_value(expectation(psi, CollectiveOperator::jx()));
      row[9] = format_value(second_moment(psi, CollectiveOperator::jz()));
      row[10] = format_value(variance(psi, CollectiveOperator::jy()));
      row[11] = format_value(variance(psi, CollectiveOperator::jz()));
      const UncertaintyReport unc = uncertainty_report(psi);
      row[12] = format_value(unc.product);
      row[13] = format_value(unc.bound);
      try {
        row[14] = format_value(phase_resolution(psi));
        row[15] = format_value(predicted_rotated_resolution(psi));
        row[16] = format_value(squeezing_xi(psi));
      } catch (const undefined_resolution_error& e) {
        error = e.what();  // deep cat/Mott rows: visibility gone
      }
      row[17] = format_value(peak_amplitude(psi));
      row[18] = format_value(phase_sharpness(psi));
    } catch (const std::exception& e) {
      error = e.what();
    }
    row.back() = error;
    table.rows[i] = std::move(row);
  });
  return table;
}

std::vector<int> ScalingSpec::default_n_range() {
  std::vector<int> ns;
  for (int n = 10; n <= 200; ++n) ns.push_back(n);
  return ns;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw config_error("loglog_fit: need >= 2 points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(y[i]) - (intercept + slope * std::log(x[i]));
    ss += r * r;
  }
  return {slope, std::sqrt(ss / n)};
}

ScalingResult scaling_study(const ScalingSpec& spec, unsigned threads) {
  if (spec.n_range.size() < 2)
    throw config_error("scaling_study: need at least 2 N values");

  ScalingResult result;
  result.table.columns = {"n", "g_param", "dtheta2", "sql", "hl", "excluded"};
  result.table.rows.resize(spec.n_range.size());

  std::vector<double> dtheta2(spec.n_range.size(), kNaN);
  parallel_for_index(spec.n_range.size(), threads, [&](std::size_t i) {
    const int n = spec.n_range[i];
    const bool attractive = spec.branch == ScalingBranch::attractive;
    const double gp = attractive ? -1.0 : 0.5 * n * n;
    std::vector<std::string> row(result.table.columns.size());
    row[0] = std::to_string(n);
    row[1] = format_value(gp);
    row[3] = format_value(1.0 / n);
    row[4] = format_value(1.0 / (static_cast<double>(n) * n));
    row[5] = "";
    try {
      const auto gs = ground_state(TwoModeParams::from_g_param(n, gp));
      const double v = attractive ? phase_resolution(gs.state)
                                  : predicted_rotated_resolution(gs.state);
      row[2] = format_value(v);
      if (v > 0.0)
        dtheta2[i] = v;
      else
        row[5] = "non-positive resolution";
    } catch (const std::exception& e) {
      row[2] = "nan";
      row[5] = e.what();
    }
    result.table.rows[i] = std::move(row);
  });

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < spec.n_range.size(); ++i) {
    const int n = spec.n_range[i];
    if (n < spec.fit_window.first || n > spec.fit_window.second) continue;
    if (std::isnan(dtheta2[i])) continue;
    xs.push_back(n);
    ys.push_back(dtheta2[i]);
  }
  std::tie(result.exponent, result.fit_residual) = loglog_fit(xs, ys);
  return result;
}

Table dynamics_run(const DynamicsConfig& config) {
  const Trajectory traj =
      config.attractive
          ? run_attractive_protocol(config.n_particles, config.protocol,
                                    config.dt, config.stride)
          : run_repulsive_protocol(config.n_particles, config.protocol,
                                   config.dt, config.stride);

  Table table;
  table.columns = {"t",    "g",    "delta_e",        "g_param",
                   "dtheta2", "xi_y", "ground_dtheta2", "fidelity"};
  table.rows.reserve(traj.records.size());
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const TrajectorySample& s = traj.records[i];
    double ground_dtheta2 = kNaN, fidelity = kNaN;
    if (s.g != 0.0 || s.delta_e > 0.0) {
      const auto gs =
          ground_state({config.n_particles, s.g, s.delta_e});
      fidelity = std::abs(overlap(gs.state, traj.states[i]));
      try {
        ground_dtheta2 = phase_resolution(gs.state);
      } catch (const undefined_resolution_error&) {
      }
    }
    table.rows.push_back({format_value(s.t), format_value(s.g),
                          format_value(s.delta_e), format_value(s.g_param),
                          format_value(s.report.phase_variance),
                          format_value(s.report.xi_y),
                          format_value(ground_dtheta2), format_value(fidelity)});
  }
  return table;
}

Table expansion_render(const ExpansionConfig& config) {
  const TwoModeParams params =
      config.g_param == 0.0
          ? TwoModeParams{config.n_particles, 0.0, config.delta_e}
          : TwoModeParams::from_g_param(config.n_particles, config.g_param,
                                        config.delta_e);
  const SpinState psi = ground_state(params).state;
  const auto grid = default_grid(config.geometry, config.grid_points);
  const DensityProfile profile = fringe_profile(psi, grid, config.geometry);

  Table table;
  table.columns = {"y", "g1", "g1_minus", "g1_plus", "mode_density"};
  table.rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const G1Coefficients c = g1_coefficients(grid[i], config.geometry);
    table.rows.push_back(
        {format_value(grid[i]), format_value(profile.mean_density[i]),
         format_value(profile.mean_density[i] - profile.noise[i]),
         format_value(profile.mean_density[i] + profile.noise[i]),
         format_value(c.c_n * config.n_particles)});
  }
  return table;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);  // binary: keep CRLF exact
  if (!out) throw config_error("cannot open for writing: " + path.string());
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << csv_escape(table.columns[c]);
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << csv_escape(row[c]);
    out << "\r\n";
  }
  if (!out) throw config_error("write failed: " + path.string());
}

std::size_t count_error_rows(const Table& table) {
  if (table.columns.empty() || table.columns.back() != "error") return 0;
  std::size_t count = 0;
  for (const auto& row : table.rows)
    if (!row.empty() && !row.back().empty()) ++count;
  return count;
}

}  // namespace twomode

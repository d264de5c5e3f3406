#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twomode/dynamics.hpp"
#include "twomode/expansion.hpp"

namespace twomode {

inline constexpr const char* library_version = "0.1.0";

// Column-labeled table of preformatted cells; numeric cells are written with
// 17 significant digits so identical configs give bit-identical CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string format_value(double v);

struct SweepSpec {
  std::vector<int> n_list;
  std::vector<double> g_param_grid;
  double delta_e = 1.0;

  // 61 log-spaced |G| per signed branch over [1e-2, 1e6], plus G = 0,
  // ascending; resolves the attractive crossover near -1.
  static std::vector<double> default_g_grid();
  // "50" -> {50}; "pair:50" -> {50, 51} (even/odd contrast)
  static std::vector<int> expand_n_entry(const std::string& entry);
};

// One row per (N, G): energy, gap, visibility, variances, uncertainty
// product, dTheta^2, predicted rotated dTheta^2, xi_y, phase-distribution
// dispersion, |c_m| peak.  Per-point failures land in the `error` column;
// the sweep never aborts.
Table ground_sweep(const SweepSpec& spec, unsigned threads = 1);

enum class ScalingBranch { attractive, repulsive };

struct ScalingSpec {
  std::vector<int> n_range;
  ScalingBranch branch = ScalingBranch::attractive;
  std::pair<int, int> fit_window = {10, 200};  // inclusive N subrange

  static std::vector<int> default_n_range();  // 10..200
};

struct ScalingResult {
  Table table;  // per-N dTheta^2 with SQL and HL reference columns
  double exponent = 0.0;
  double fit_residual = 0.0;  // rms of log-log fit residuals
};

// Attractive branch: phase_resolution of the G = -1 ground state.
// Repulsive branch: predicted_rotated_resolution at G = N^2/2.
// Exponent from least squares on log-log over fit_window.
ScalingResult scaling_study(const ScalingSpec& spec, unsigned threads = 1);

struct DynamicsConfig {
  int n_particles = 50;
  bool attractive = true;
  SplitProtocol protocol;
  std::size_t stride = 100;
  double dt = -1.0;  // < 0: default_dt
};

// Columns: t, g, delta_e, g_param, dtheta2, xi_y, ground_dtheta2, fidelity.
// The reference columns compare against the instantaneous ground state of
// the current (g, dE); NaN once H = 0 (frozen attractive runs).
Table dynamics_run(const DynamicsConfig& config);

struct ExpansionConfig {
  int n_particles = 100;
  double g_param = 0.0;
  double delta_e = 1.0;
  ExpansionGeometry geometry;
  std::size_t grid_points = 2048;
};

// Columns: y, g1, g1_minus, g1_plus, mode_density (the incoherent
// N(|phi_L|^2+|phi_R|^2)/2 reference).
Table expansion_render(const ExpansionConfig& config);

// RFC-4180: CRLF records, quoted fields where needed, '.' decimal separator.
void write_csv(const std::filesystem::path& path, const Table& table);

std::size_t count_error_rows(const Table& table);

// slope and rms residual of least-squares log(y) = a + slope*log(x)
std::pair<double, double> loglog_fit(const std::vector<double>& x,
                                     const std::vector<double>& y);

// Runs n jobs on a worker pool; results land at their own index, so output
// order never depends on thread scheduling.
void parallel_for_index(std::size_t n, unsigned threads,
                        const std::function<void(std::size_t)>& body);

}  // namespace twomode

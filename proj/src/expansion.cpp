#include "twomode/expansion.hpp"

#include <cmath>
#include <numbers>

#include "twomode/errors.hpp"

namespace twomode {

namespace {

void validate(const ExpansionGeometry& geom) {
  if (!(geom.d > 0.0)) throw config_error("expansion geometry: d must be > 0");
  if (!(geom.t >= 0.0)) throw config_error("expansion geometry: t must be >= 0");
  if (!(geom.delta_y > 0.0))
    throw config_error("expansion geometry: delta_y must be > 0");
}

double spread2(const ExpansionGeometry& geom) {
  const double wt = geom.omega * geom.t;
  return geom.delta_y * geom.delta_y * (1.0 + wt * wt);
}

}  // namespace

complexd mode_function(double y, const ExpansionGeometry& geom, Side side) {
  validate(geom);
  const double dy2 = geom.delta_y * geom.delta_y;
  const complexd u(1.0, geom.omega * geom.t);
  // left releases from +d, right from -d (see header: this labeling gives
  // the -sin(a+theta) coupling to <Jy> in the density)
  const double shift = (side == Side::left) ? -geom.d : +geom.d;
  const complexd norm =
      std::pow(2.0 * std::numbers::pi * dy2, -0.25) / std::sqrt(u);
  return norm * std::exp(-(y + shift) * (y + shift) / (4.0 * dy2 * u));
}

G1Coefficients g1_coefficients(double y, const ExpansionGeometry& geom) {
  validate(geom);
  const complexd phi_l = mode_function(y, geom, Side::left);
  const complexd phi_r = mode_function(y, geom, Side::right);
  const double al2 = std::norm(phi_l);
  const double ar2 = std::norm(phi_r);
  const complexd cross =
      2.0 * std::conj(phi_l) * phi_r * std::polar(1.0, geom.theta);
  return {0.5 * (al2 + ar2), al2 - ar2, cross.real(), -cross.imag()};
}

double density(const SpinState& state, double y, const ExpansionGeometry& geom) {
  return expectation(state, g1_coefficients(y, geom).as_operator());
}

double closed_form_density(const SpinState& state, double y,
                           const ExpansionGeometry& geom) {
  validate(geom);
  const double s2 = spread2(geom);
  const double wt = geom.omega * geom.t;
  const double envelope = std::exp(-(y * y + geom.d * geom.d) / (2.0 * s2)) /
                          std::sqrt(2.0 * std::numbers::pi * s2);
  const double b = y * geom.d / s2;
  const double arg = b * wt + geom.theta;
  const double jx = expectation(state, CollectiveOperator::jx());
  const double jy = expectation(state, CollectiveOperator::jy());
  return envelope * (state.n_particles * std::cosh(b) + 2.0 * jx * std::cos(arg) -
                     2.0 * jy * std::sin(arg));
}

double density_noise(const SpinState& state, double y,
                     const ExpansionGeometry& geom) {
  const CollectiveOperator op = g1_coefficients(y, geom).as_operator();
  return std::sqrt(variance(state, op));
}

std::vector<double> default_grid(const ExpansionGeometry& geom,
                                 std::size_t points) {
  validate(geom);
  if (points < 2) throw config_error("default_grid: need at least 2 points");
  const double w = std::sqrt(geom.d * geom.d + spread2(geom));
  const double lo = -4.0 * w, hi = 4.0 * w;
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + step * static_cast<double>(i);
  return grid;
}

DensityProfile fringe_profile(const SpinState& state,
                              const std::vector<double>& y_grid,
                              const ExpansionGeometry& geom) {
  if (y_grid.empty()) throw config_error("fringe_profile: empty grid");
  for (std::size_t i = 1; i < y_grid.size(); ++i)
    if (!(y_grid[i] > y_grid[i - 1]))
      throw config_error("fringe_profile: grid must be strictly increasing");

  // the four operator coefficients vary along y, the state moments do not
  const double jx = expectation(state, CollectiveOperator::jx());
  const double jy = expectation(state, CollectiveOperator::jy());
  const double jz = expectation(state, CollectiveOperator::jz());

  DensityProfile profile;
  profile.y_grid = y_grid;
  profile.mean_density.resize(y_grid.size());
  profile.noise.resize(y_grid.size());
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    const G1Coefficients c = g1_coefficients(y_grid[i], geom);
    profile.mean_density[i] = c.c_n * state.n_particles + c.c_z * jz +
                              c.c_x * jx + c.c_y * jy;
    profile.noise[i] = std::sqrt(variance(state, c.as_operator()));
  }
  return profile;
}

double integrated_density(const DensityProfile& profile) {
  double acc = 0.0;
  for (std::size_t i = 1; i < profile.y_grid.size(); ++i)
    acc += 0.5 * (profile.mean_density[i] + profile.mean_density[i - 1]) *
           (profile.y_grid[i] - profile.y_grid[i - 1]);
  return acc;
}

}  // namespace twomode

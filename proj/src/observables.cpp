#include "twomode/observables.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace twomode {

namespace {

// |<Jx>| below this is numerical noise, not small visibility
double jx_threshold(const SpinState& state) {
  return 1e-12 * state.n_particles;
}

double jx_checked(const SpinState& state) {
  const double jx = expectation(state, CollectiveOperator::jx());
  if (std::abs(jx) < jx_threshold(state))
    throw undefined_resolution_error(
        "visibility vanished: |<Jx>| below 1e-12 * N, phase resolution undefined");
  return jx;
}

}  // namespace

double visibility(const SpinState& state) {
  const double jx = expectation(state, CollectiveOperator::jx());
  return std::abs(jx) / (0.5 * state.n_particles);
}

double phase_resolution(const SpinState& state) {
  const double jx = jx_checked(state);
  const double jy2 = second_moment(state, CollectiveOperator::jy());
  return jy2 / (jx * jx);
}

double phase_resolution_with_number_noise(
    const std::vector<std::pair<SpinState, double>>& mixture) {
  if (mixture.empty())
    throw config_error("phase_resolution_with_number_noise: empty mixture");
  double wsum = 0.0, jx = 0.0, jy2 = 0.0, nbar = 0.0, n2bar = 0.0;
  for (const auto& [state, weight] : mixture) {
    wsum += weight;
    jx += weight * expectation(state, CollectiveOperator::jx());
    jy2 += weight * second_moment(state, CollectiveOperator::jy());
    nbar += weight * state.n_particles;
    n2bar += weight * static_cast<double>(state.n_particles) * state.n_particles;
  }
  jx /= wsum;
  jy2 /= wsum;
  nbar /= wsum;
  n2bar /= wsum;
  if (std::abs(jx) < 1e-12 * std::max(nbar, 1.0))
    throw undefined_resolution_error(
        "visibility vanished over the mixture, phase resolution undefined");
  const double number_variance = std::max(n2bar - nbar * nbar, 0.0);
  return jy2 / (jx * jx) + number_variance / (4.0 * jx * jx);
}

double squeezing_xi(const SpinState& state) {
  return std::sqrt(state.n_particles * phase_resolution(state));
}

double predicted_rotated_resolution(const SpinState& state) {
  const double jx = jx_checked(state);
  const double jz2 = second_moment(state, CollectiveOperator::jz());
  return jz2 / (jx * jx);
}

UncertaintyReport uncertainty_report(const SpinState& state) {
  UncertaintyReport r;
  r.delta_jy = std::sqrt(variance(state, CollectiveOperator::jy()));
  r.delta_jz = std::sqrt(variance(state, CollectiveOperator::jz()));
  r.product = r.delta_jy * r.delta_jz;
  r.bound = 0.5 * std::abs(expectation(state, CollectiveOperator::jx()));
  return r;
}

SqueezingReport squeezing_report(const SpinState& state) {
  SqueezingReport r;
  const double jx = expectation(state, CollectiveOperator::jx());
  const double jy2 = second_moment(state, CollectiveOperator::jy());
  r.jx_mean = jx;
  r.visibility = std::abs(jx) / (0.5 * state.n_particles);
  r.var_jy = variance(state, CollectiveOperator::jy());
  r.var_jz = variance(state, CollectiveOperator::jz());
  if (std::abs(jx) >= jx_threshold(state)) {
    r.phase_variance = jy2 / (jx * jx);
    r.xi_y = std::sqrt(state.n_particles * r.phase_variance);
  } else {
    r.phase_variance = std::numeric_limits<double>::quiet_NaN();
    r.xi_y = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

PhaseDistribution phase_state_decomposition(const SpinState& state,
                                            double theta0) {
  const std::size_t dim = state.dim();
  const double jj = state.j();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(dim);

  PhaseDistribution dist;
  dist.theta_values.resize(dim);
  dist.amplitudes.assign(dim, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const double theta = theta0 + step * (static_cast<double>(k) - jj);
    dist.theta_values[k] = theta;
    complexd acc = 0.0;
    for (std::size_t kp = 0; kp < dim; ++kp) {
      const double mp = static_cast<double>(kp) - jj;
      acc += std::polar(1.0, -mp * theta) * state.amplitudes[kp];
    }
    dist.amplitudes[k] = scale * acc;
  }
  return dist;
}

SpinState phase_state_inverse(const PhaseDistribution& dist) {
  const std::size_t dim = dist.amplitudes.size();
  if (dim == 0 || dist.theta_values.size() != dim)
    throw dimension_error("phase distribution is empty or inconsistent");
  const int n = static_cast<int>(dim) - 1;
  const double jj = 0.5 * n;

  SpinState state{n, cvector(dim, 0.0)};
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t kp = 0; kp < dim; ++kp) {
    const double mp = static_cast<double>(kp) - jj;
    complexd acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k)
      acc += std::polar(1.0, mp * dist.theta_values[k]) * dist.amplitudes[k];
    state.amplitudes[kp] = scale * acc;
  }
  return state;
}

}  // namespace twomode

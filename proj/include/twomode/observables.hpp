#pragma once

#include <utility>
#include <vector>

#include "twomode/hilbert.hpp"

namespace twomode {

// Decomposition over relative phase states |theta_m>,
// theta_m = theta0 + 2*pi*m/(2J+1), m = -J..J.
struct PhaseDistribution {
  std::vector<double> theta_values;  // length 2J+1
  cvector amplitudes;                // c_{theta_m}, unit total weight
};

struct SqueezingReport {
  double visibility = 0.0;      // |<Jx>| / (N/2)
  double phase_variance = 0.0;  // dTheta^2 = <Jy^2>/<Jx>^2
  double xi_y = 0.0;            // sqrt(N <Jy^2>)/|<Jx>| = dTheta/dTheta_SQL
  double var_jy = 0.0;
  double var_jz = 0.0;
  double jx_mean = 0.0;
};

struct UncertaintyReport {
  double delta_jy = 0.0;  // sqrt(var Jy)
  double delta_jz = 0.0;
  double product = 0.0;   // delta_jy * delta_jz
  double bound = 0.0;     // |<Jx>| / 2  (Robertson lower bound)
};

// |<Jx>| / (N/2), in [0, 1]
double visibility(const SpinState& state);

// dTheta^2 = <Jy^2> / <Jx>^2 for a single fixed-N run (the number-noise term
// vanishes event by event).  Throws undefined_resolution_error when
// |<Jx>| < 1e-12 * N.
double phase_resolution(const SpinState& state);

// Adds the classical number-noise term (<Nhat^2> - <Nhat>^2)/(4 <Jx>^2) for a
// mixture of fixed-N sectors with the given weights.
double phase_resolution_with_number_noise(
    const std::vector<std::pair<SpinState, double>>& mixture);

// xi_y = sqrt(N <Jy^2>) / |<Jx>|; 1 at the standard quantum limit.
double squeezing_xi(const SpinState& state);

// <Jz^2>/<Jx>^2: the resolution reachable after an ideal pi/2 rotation about
// x (number squeezing converted to phase squeezing).
double predicted_rotated_resolution(const SpinState& state);

UncertaintyReport uncertainty_report(const SpinState& state);

SqueezingReport squeezing_report(const SpinState& state);

// c_{theta_m} = (2J+1)^{-1/2} sum_{m'} exp(-i m' theta_m) c_{m'};
// a unitary DFT for any theta0 (half-integer m' included).
PhaseDistribution phase_state_decomposition(const SpinState& state,
                                            double theta0 = 0.0);

// Inverse transform; recovers the Dicke amplitudes exactly.
SpinState phase_state_inverse(const PhaseDistribution& dist);

}  // namespace twomode

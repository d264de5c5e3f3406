#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "twomode/hamiltonian.hpp"
#include "twomode/observables.hpp"

namespace twomode {

// Square tunnelling pulse of given area applied after the splitting is over;
// only the area matters once g = 0.
struct PulseSpec {
  double area = 1.5707963267948966;  // pi/2
  double start = 0.0;                // must be >= tau
  double duration = 1.0;
  double amplitude() const { return area / duration; }
};

// Splitting schedule dE(t) = exp(-d_min^2 - gamma t) with an instantaneous
// interaction quench g -> 0 once G(t) reaches target_g_param (at t = tau).
// Units: hbar*omega = dy = 1.
struct SplitProtocol {
  double d_min = 1.0;           // half-separation at t = 0
  double gamma = 0.0;           // separation rate; <= 0 means "solve from tau"
  double tau = 0.0;             // splitting duration, > 0
  double g0 = 0.0;              // interaction before the quench
  double target_g_param = 0.0;  // -1 attractive, N^2/2 repulsive
  std::optional<PulseSpec> pulse;
  // Attractive freeze: cut dE to zero at tau instead of letting the
  // exponential tail keep rotating the distribution.
  bool freeze_delta_e = false;
  double t_final = -1.0;  // < 0: protocol-dependent default horizon

  double delta_e0() const { return std::exp(-d_min * d_min); }
  // gamma such that G(tau) = target:  ln(dE(0) |target| / |2 g0 N|) / tau
  static double solve_gamma(double d_min, double g0, int n_particles,
                            double target_g_param, double tau);
};

// dE(t) = exp(-d_min^2 - gamma t); the implied separation is
// d(t)^2 = d_min^2 + gamma t.
double delta_e_schedule(const SplitProtocol& protocol, double t);

// Piecewise-exponential schedule: amp * exp(-rate (t - t0)) on [t0, t1);
// zero outside every segment.  Segment integrals are analytic, so pulse
// areas and residual tails carry no quadrature error.
class Schedule {
 public:
  struct Segment {
    double t0, t1, amp, rate;
  };

  void add(double t0, double t1, double amp, double rate = 0.0);
  // value() is right-continuous at segment edges (a quench shows its
  // post-jump value); value_left() resolves the final-horizon sample, where
  // only the left limit is meaningful.
  double value(double t) const;
  double value_left(double t) const;
  double integral(double t_from, double t_to) const;
  // segment edges inside (t0, t1), sorted, deduplicated
  std::vector<double> breakpoints(double t0, double t1) const;
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Segment> segments_;
};

// Integral of dE(t) over [t_from, t_to]: the rotation area about x.
double pulse_area(const Schedule& delta_e_of_t, double t_from, double t_to);

struct TrajectorySample {
  double t = 0.0;
  double g = 0.0;
  double delta_e = 0.0;
  double g_param = 0.0;  // NaN where delta_e = 0
  double norm = 0.0;
  SqueezingReport report;  // phase quantities NaN where visibility vanished
};

struct Trajectory {
  std::vector<double> times;  // sample times, strictly increasing
  std::vector<SpinState> states;
  std::vector<TrajectorySample> records;
  std::vector<std::string> warnings;
  double residual_area = 0.0;  // integral of dE past the quench
  const SpinState& final_state() const { return states.back(); }
  const TrajectorySample& final_record() const { return records.back(); }
};

// dt = 1e-3 / max(dE(0), 2|g|N): keeps eigenphase steps ~1e-3 rad.
double default_dt(double delta_e0, double g0, int n_particles);

// Crank-Nicolson midpoint propagation of the tridiagonal H(t) =
// 2g(t)Jz^2 + dE(t)Jx: (1 + i dt H(t_mid)/2) psi' = (1 - i dt H(t_mid)/2) psi.
// Unconditionally unitary for Hermitian H; 2nd order in dt.  Schedule
// breakpoints are honored exactly (dt is shortened per smooth span, never
// stepped across a discontinuity).  Samples every `stride` steps plus span
// edges.  Throws integration_error if the norm drifts beyond 1e-6.
Trajectory propagate(const SpinState& initial, const Schedule& g_of_t,
                     const Schedule& delta_e_of_t, double t0, double t1,
                     double dt, std::size_t stride = 100);

// Ground-state start at (g0, dE(0)); exponential splitting to tau; quench
// g -> 0; dE then either keeps decaying (default; residual area reported,
// warning above pi/10) or is cut to zero (freeze_delta_e).
// dt <= 0 selects default_dt.
Trajectory run_attractive_protocol(int n_particles, const SplitProtocol& protocol,
                                   double dt = -1.0, std::size_t stride = 100);

// Ground-state start; splitting to tau; quench; dE = 0 until the square
// pi/2 pulse fires (free precession outside the pulse).  The post-pulse
// phase resolution approaches predicted_rotated_resolution of the pre-pulse
// state for an ideal pulse.
Trajectory run_repulsive_protocol(int n_particles, const SplitProtocol& protocol,
                                  double dt = -1.0, std::size_t stride = 100);

}  // namespace twomode

#include "twomode/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace twomode {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double SplitProtocol::solve_gamma(double d_min, double g0, int n_particles,
                                  double target_g_param, double tau) {
  if (!(tau > 0.0)) throw config_error("solve_gamma: tau must be > 0");
  if (g0 == 0.0 || target_g_param == 0.0)
    throw config_error("solve_gamma: g0 and target G must be nonzero");
  const double de0 = std::exp(-d_min * d_min);
  const double gamma =
      std::log(de0 * std::abs(target_g_param) /
               std::abs(2.0 * g0 * n_particles)) /
      tau;
  if (!(gamma > 0.0))
    throw config_error("solve_gamma: initial G is already at or past target");
  return gamma;
}

double delta_e_schedule(const SplitProtocol& protocol, double t) {
  if (!(t >= 0.0)) throw config_error("delta_e_schedule: t must be >= 0");
  return std::exp(-protocol.d_min * protocol.d_min - protocol.gamma * t);
}

void Schedule::add(double t0, double t1, double amp, double rate) {
  if (!(t1 > t0)) throw config_error("schedule segment must have t1 > t0");
  segments_.push_back({t0, t1, amp, rate});
}

double Schedule::value(double t) const {
  for (const auto& s : segments_)
    if (t >= s.t0 && t < s.t1) return s.amp * std::exp(-s.rate * (t - s.t0));
  return 0.0;
}

double Schedule::value_left(double t) const {
  for (const auto& s : segments_)
    if (t > s.t0 && t <= s.t1) return s.amp * std::exp(-s.rate * (t - s.t0));
  return value(t);
}

double Schedule::integral(double t_from, double t_to) const {
  double acc = 0.0;
  for (const auto& s : segments_) {
    const double a = std::max(t_from, s.t0);
    const double b = std::min(t_to, s.t1);
    if (b <= a) continue;
    if (s.rate == 0.0) {
      acc += s.amp * (b - a);
    } else {
      acc += s.amp / s.rate *
             (std::exp(-s.rate * (a - s.t0)) - std::exp(-s.rate * (b - s.t0)));
    }
  }
  return acc;
}

std::vector<double> Schedule::breakpoints(double t0, double t1) const {
  std::vector<double> pts;
  for (const auto& s : segments_) {
    if (s.t0 > t0 && s.t0 < t1) pts.push_back(s.t0);
    if (s.t1 > t0 && s.t1 < t1) pts.push_back(s.t1);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double pulse_area(const Schedule& delta_e_of_t, double t_from, double t_to) {
  if (!(t_to >= t_from)) throw config_error("pulse_area: t_to < t_from");
  return delta_e_of_t.integral(t_from, t_to);
}

double default_dt(double delta_e0, double g0, int n_particles) {
  const double scale =
      std::max({delta_e0, 2.0 * std::abs(g0) * n_particles, 1.0e-30});
  return 1e-3 / scale;
}

namespace {

// One Crank-Nicolson midpoint step: (1 + z H) psi' = (1 - z H) psi, z = i dt/2.
// H = 2g Jz^2 + dE Jx is real tridiagonal; the solve is a complex Thomas
// sweep (diagonally dominant for dt * ||H|| < 2, which default_dt guarantees
// by three orders of magnitude).
struct CnWorkspace {
  std::vector<double> diag, off;
  cvector rhs, cprime;

  explicit CnWorkspace(std::size_t dim)
      : diag(dim), off(dim > 0 ? dim - 1 : 0), rhs(dim), cprime(dim) {}

  void build(double g, double de, const SpinState& ref) {
    const double jj = ref.j();
    for (std::size_t k = 0; k < diag.size(); ++k) {
      const double m = ref.m_at(k);
      diag[k] = 2.0 * g * m * m;
    }
    for (std::size_t k = 0; k < off.size(); ++k)
      off[k] = 0.5 * de * ladder_coefficient(jj, ref.m_at(k));
  }

  void step(cvector& psi, double dt) {
    const std::size_t n = psi.size();
    const complexd z(0.0, 0.5 * dt);
    for (std::size_t k = 0; k < n; ++k) {
      complexd r = (1.0 - z * diag[k]) * psi[k];
      if (k > 0) r -= z * off[k - 1] * psi[k - 1];
      if (k + 1 < n) r -= z * off[k] * psi[k + 1];
      rhs[k] = r;
    }
    complexd denom = 1.0 + z * diag[0];
    cprime[0] = (n > 1) ? z * off[0] / denom : complexd(0.0);
    rhs[0] /= denom;
    for (std::size_t k = 1; k < n; ++k) {
      denom = 1.0 + z * diag[k] - z * off[k - 1] * cprime[k - 1];
      cprime[k] = (k + 1 < n) ? z * off[k] / denom : complexd(0.0);
      rhs[k] = (rhs[k] - z * off[k - 1] * rhs[k - 1]) / denom;
    }
    psi[n - 1] = rhs[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) psi[k] = rhs[k] - cprime[k] * psi[k + 1];
  }
};

}  // namespace

Trajectory propagate(const SpinState& initial, const Schedule& g_of_t,
                     const Schedule& delta_e_of_t, double t0, double t1,
                     double dt, std::size_t stride) {
  if (!(dt > 0.0)) throw config_error("propagate: dt must be > 0");
  if (!(t1 > t0)) throw config_error("propagate: t1 must be > t0");
  if (stride == 0) stride = 1;

  const int n = initial.n_particles;
  SpinState psi = initial;

  Trajectory traj;
  auto record = [&](double t) {
    TrajectorySample s;
    s.t = t;
    s.g = t == t1 ? g_of_t.value_left(t) : g_of_t.value(t);
    s.delta_e = t == t1 ? delta_e_of_t.value_left(t) : delta_e_of_t.value(t);
    s.g_param = s.delta_e > 0.0 ? 2.0 * s.g * n / s.delta_e : kNaN;
    s.norm = psi.norm();
    // negated comparison so a non-finite norm (overflowed drive) also throws
    if (!(std::abs(s.norm - 1.0) <= 1e-6))
      throw integration_error("norm drift beyond 1e-6; reduce dt");
    s.report = squeezing_report(psi);
    traj.times.push_back(t);
    traj.states.push_back(psi);
    traj.records.push_back(s);
  };
  record(t0);

  // merge breakpoints of both schedules into smooth spans
  std::vector<double> edges{t0};
  for (double b : g_of_t.breakpoints(t0, t1)) edges.push_back(b);
  for (double b : delta_e_of_t.breakpoints(t0, t1)) edges.push_back(b);
  edges.push_back(t1);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  CnWorkspace ws(psi.dim());
  for (std::size_t span = 0; span + 1 < edges.size(); ++span) {
    const double a = edges[span], b = edges[span + 1];
    const auto steps = static_cast<std::size_t>(std::ceil((b - a) / dt));
    const double h = (b - a) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double tmid = a + (static_cast<double>(i) + 0.5) * h;
      ws.build(g_of_t.value(tmid), delta_e_of_t.value(tmid), psi);
      ws.step(psi.amplitudes, h);
      const bool at_end = (i + 1 == steps);
      if (at_end)
        record(b);
      else if ((i + 1) % stride == 0)
        record(a + (static_cast<double>(i) + 1.0) * h);
    }
  }
  return traj;
}

namespace {

SplitProtocol resolve_gamma(int n_particles, SplitProtocol p) {
  if (p.gamma <= 0.0)
    p.gamma = SplitProtocol::solve_gamma(p.d_min, p.g0, n_particles,
                                         p.target_g_param, p.tau);
  return p;
}

SpinState protocol_initial_state(int n_particles, const SplitProtocol& p) {
  return ground_state({n_particles, p.g0, p.delta_e0()}).state;
}

}  // namespace

Trajectory run_attractive_protocol(int n_particles, const SplitProtocol& protocol,
                                   double dt, std::size_t stride) {
  if (!(protocol.g0 < 0.0))
    throw config_error("attractive protocol: g0 must be < 0");
  if (!(protocol.target_g_param < 0.0))
    throw config_error("attractive protocol: target G must be < 0");
  if (protocol.pulse)
    throw config_error("attractive protocol: no pulse (freeze instead)");
  const SplitProtocol p = resolve_gamma(n_particles, protocol);

  const double de0 = p.delta_e0();
  const double de_tau = de0 * std::exp(-p.gamma * p.tau);
  const double t_final =
      p.t_final > 0.0 ? p.t_final
                      : p.tau + (p.freeze_delta_e ? 1.0 : 3.0 / p.gamma);
  if (!(t_final > p.tau))
    throw config_error("attractive protocol: t_final must exceed tau");

  Schedule g_sched;
  g_sched.add(0.0, p.tau, p.g0);  // quench to zero at tau
  Schedule de_sched;
  de_sched.add(0.0, p.tau, de0, p.gamma);
  if (!p.freeze_delta_e) de_sched.add(p.tau, t_final, de_tau, p.gamma);

  if (dt <= 0.0) dt = default_dt(de0, p.g0, n_particles);
  Trajectory traj = propagate(protocol_initial_state(n_particles, p), g_sched,
                              de_sched, 0.0, t_final, dt, stride);
  // exponential tail integrated to infinity, not just to t_final
  traj.residual_area = p.freeze_delta_e ? 0.0 : de_tau / p.gamma;
  if (traj.residual_area > std::numbers::pi / 10.0)
    traj.warnings.push_back(
        "residual tunnelling area exceeds pi/10: the frozen squeezing will "
        "rotate away");
  return traj;
}

Trajectory run_repulsive_protocol(int n_particles, const SplitProtocol& protocol,
                                  double dt, std::size_t stride) {
  if (!(protocol.g0 > 0.0))
    throw config_error("repulsive protocol: g0 must be > 0");
  if (!(protocol.target_g_param > 0.0))
    throw config_error("repulsive protocol: target G must be > 0");
  if (!protocol.pulse)
    throw config_error("repulsive protocol: pi/2 pulse required");
  const SplitProtocol p = resolve_gamma(n_particles, protocol);
  const PulseSpec& pulse = *p.pulse;
  if (!(pulse.area > 0.0 && pulse.area <= std::numbers::pi))
    throw config_error("pulse area must lie in (0, pi]");
  if (!(pulse.duration > 0.0))
    throw config_error("pulse duration must be > 0");
  if (pulse.start < p.tau)
    throw config_error("pulse overlaps nonzero g: start must be >= tau");

  const double de0 = p.delta_e0();
  const double pulse_end = pulse.start + pulse.duration;
  const double t_final = p.t_final > 0.0 ? p.t_final : pulse_end;
  if (!(t_final >= pulse_end))
    throw config_error("repulsive protocol: t_final must cover the pulse");

  Schedule g_sched;
  g_sched.add(0.0, p.tau, p.g0);
  Schedule de_sched;  // dE = 0 between quench and pulse: free precession only
  de_sched.add(0.0, p.tau, de0, p.gamma);
  de_sched.add(pulse.start, pulse_end, pulse.amplitude());

  if (dt <= 0.0)  // the pulse amplitude may dominate the energy scale
    dt = 1e-3 / std::max({de0, 2.0 * std::abs(p.g0) * n_particles,
                          pulse.amplitude(), 1.0e-30});
  Trajectory traj = propagate(protocol_initial_state(n_particles, p), g_sched,
                              de_sched, 0.0, t_final, dt, stride);
  traj.residual_area = de_sched.integral(p.tau, t_final);
  return traj;
}

}  // namespace twomode

#include "twomode/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twomode/errors.hpp"
#include "twomode/tridiag_eigen.hpp"

namespace twomode {

namespace {
constexpr double kDegeneracyFactor = 1e-13;
}

TwoModeParams TwoModeParams::from_g_param(int n_particles, double g_param,
                                          double delta_e) {
  TwoModeParams p{n_particles, g_param * delta_e / (2.0 * n_particles), delta_e};
  p.validate();
  return p;
}

void TwoModeParams::validate() const {
  if (n_particles < 1) throw config_error("n_particles must be >= 1");
  if (!(delta_e >= 0.0)) throw config_error("delta_e must be >= 0");
  if (!std::isfinite(g) || !std::isfinite(delta_e))
    throw config_error("parameters must be finite");
}

TridiagonalMatrix build_hamiltonian(const TwoModeParams& params) {
  params.validate();
  const int n = params.n_particles;
  const double jj = 0.5 * n;
  TridiagonalMatrix h;
  h.diag.resize(n + 1);
  h.offdiag.resize(n);
  for (int k = 0; k <= n; ++k) {
    const double m = k - jj;
    h.diag[k] = 2.0 * params.g * m * m;
  }
  for (int k = 0; k < n; ++k) {
    const double m = k - jj;
    h.offdiag[k] = 0.5 * params.delta_e * ladder_coefficient(jj, m);
  }
  return h;
}

double spectral_width(const TridiagonalMatrix& h) {
  const auto [lo, hi] = gershgorin_bounds(h.diag, h.offdiag);
  return hi - lo;
}

namespace {

// dE = 0: H is diagonal; return the lowest level exactly, as the symmetric
// equal-weight combination when it is degenerate (the m = +-J cat doublet
// for g < 0), rather than an arbitrary member of the subspace.
GroundStateResult diagonal_ground_state(const TwoModeParams& params,
                                        const TridiagonalMatrix& h) {
  const std::size_t dim = h.dim();
  const double width =
      std::max(spectral_width(h), std::numeric_limits<double>::epsilon());
  double e0 = h.diag[0], e1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < dim; ++k) {
    if (h.diag[k] < e0) {
      e1 = e0;
      e0 = h.diag[k];
    } else {
      e1 = std::min(e1, h.diag[k]);
    }
  }
  const double tie_tol = kDegeneracyFactor * width;
  std::vector<std::size_t> lowest;
  for (std::size_t k = 0; k < dim; ++k)
    if (h.diag[k] - e0 <= tie_tol) lowest.push_back(k);

  GroundStateResult r;
  r.energy = e0;
  r.gap = (lowest.size() > 1) ? 0.0 : e1 - e0;
  r.degenerate = lowest.size() > 1;
  r.state = SpinState{params.n_particles, cvector(dim, 0.0)};
  const double w = 1.0 / std::sqrt(static_cast<double>(lowest.size()));
  for (std::size_t k : lowest) r.state.amplitudes[k] = w;
  return r;
}

void fix_global_phase(SpinState& state) {
  std::size_t imax = 0;
  for (std::size_t k = 1; k < state.dim(); ++k)
    if (std::abs(state.amplitudes[k]) > std::abs(state.amplitudes[imax]))
      imax = k;
  const complexd a = state.amplitudes[imax];
  const double mag = std::abs(a);
  if (mag == 0.0) return;
  const complexd phase = std::conj(a) / mag;
  for (auto& c : state.amplitudes) c *= phase;
  state.amplitudes[imax] = mag;  // expunge the roundoff imaginary part
}

}  // namespace

GroundStateResult ground_state(const TwoModeParams& params) {
  const TridiagonalMatrix h = build_hamiltonian(params);
  if (params.delta_e == 0.0) return diagonal_ground_state(params, h);

  const std::size_t k = std::min<std::size_t>(2, h.dim());
  const auto pairs = lowest_eigenpairs(h.diag, h.offdiag, k);

  GroundStateResult r;
  r.energy = pairs.values[0];
  r.gap = (k > 1) ? std::max(pairs.values[1] - pairs.values[0], 0.0) : 0.0;
  const double width =
      std::max(spectral_width(h), std::numeric_limits<double>::epsilon());
  r.degenerate = (k > 1) && r.gap < kDegeneracyFactor * width;
  r.state.n_particles = params.n_particles;
  r.state.amplitudes.assign(pairs.vectors[0].begin(), pairs.vectors[0].end());
  r.state.normalize();
  fix_global_phase(r.state);
  return r;
}

std::vector<double> low_spectrum(const TwoModeParams& params, std::size_t k) {
  const TridiagonalMatrix h = build_hamiltonian(params);
  if (k < 1 || k > h.dim())
    throw config_error("low_spectrum: k out of range");
  if (params.delta_e == 0.0) {
    std::vector<double> all(h.diag);
    std::sort(all.begin(), all.end());
    all.resize(k);
    return all;
  }
  if (h.dim() <= 128) {
    auto all = eigenvalues_ql(h.diag, h.offdiag);
    all.resize(k);
    return all;
  }
  return eigenvalues_bisection(h.diag, h.offdiag, k);
}

double spectral_gap(const TwoModeParams& params) {
  if (params.n_particles < 1) throw config_error("n_particles must be >= 1");
  const auto two = low_spectrum(params, 2);
  return std::max(two[1] - two[0], 0.0);
}

}  // namespace twomode

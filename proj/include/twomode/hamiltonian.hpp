#pragma once

#include <cstddef>
#include <vector>

#include "twomode/hilbert.hpp"

namespace twomode {

// Two-mode parameters in oscillator units (hbar*omega = 1).  The constant
// f(J) term and the total-number energy are dropped as global phases.
struct TwoModeParams {
  int n_particles = 1;   // N >= 1
  double g = 0.0;        // two-body coupling
  double delta_e = 0.0;  // tunnelling energy, >= 0

  // dimensionless ratio of mean-field to tunnelling energy, G = 2 g N / dE
  double g_param() const { return 2.0 * g * n_particles / delta_e; }
  static TwoModeParams from_g_param(int n_particles, double g_param,
                                    double delta_e = 1.0);
  void validate() const;  // throws config_error
};

struct TridiagonalMatrix {
  std::vector<double> diag;     // length N+1
  std::vector<double> offdiag;  // length N
  std::size_t dim() const { return diag.size(); }
};

// H = 2g*Jz^2 + dE*Jx in the Dicke basis:
//   diag[k]    = 2g*m^2,                  m = k - J
//   offdiag[k] = (dE/2)*sqrt(J(J+1) - m(m+1))
TridiagonalMatrix build_hamiltonian(const TwoModeParams& params);

// Gershgorin width max-min; the scale for all gap/residual thresholds.
double spectral_width(const TridiagonalMatrix& h);

struct GroundStateResult {
  double energy = 0.0;
  SpinState state;
  double gap = 0.0;  // E1 - E0
  // gap < 1e-13 * spectral width: doublet regime (dE=0, g<0 cat states);
  // the returned state is then the symmetric combination of the doublet.
  bool degenerate = false;
};

// Lowest eigenpair; global phase fixed so the largest-magnitude amplitude is
// real positive.  For dE > 0 the ground state is nondegenerate and
// exchange-symmetric (c_m = c_{-m}).
GroundStateResult ground_state(const TwoModeParams& params);

// k lowest eigenvalues, ascending; 1 <= k <= N+1.
std::vector<double> low_spectrum(const TwoModeParams& params, std::size_t k);

// E1 - E0 >= 0
double spectral_gap(const TwoModeParams& params);

}  // namespace twomode

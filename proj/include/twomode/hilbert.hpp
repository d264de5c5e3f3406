#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "twomode/errors.hpp"

namespace twomode {

using complexd = std::complex<double>;
using cvector = std::vector<complexd>;

// Real linear combination  c_n*N + c_x*Jx + c_y*Jy + c_z*Jz + c_zz*Jz^2.
// Hermitian and tridiagonal in the Dicke basis.
struct CollectiveOperator {
  double coef_n = 0.0;
  double coef_x = 0.0;
  double coef_y = 0.0;
  double coef_z = 0.0;
  double coef_zz = 0.0;

  static CollectiveOperator jx() { return {0.0, 1.0, 0.0, 0.0, 0.0}; }
  static CollectiveOperator jy() { return {0.0, 0.0, 1.0, 0.0, 0.0}; }
  static CollectiveOperator jz() { return {0.0, 0.0, 0.0, 1.0, 0.0}; }
  static CollectiveOperator jz_squared() { return {0.0, 0.0, 0.0, 0.0, 1.0}; }
  static CollectiveOperator number() { return {1.0, 0.0, 0.0, 0.0, 0.0}; }
  // Identity on the fixed-N sector is N_hat / N.
  static CollectiveOperator identity(int n_particles) {
    return {1.0 / static_cast<double>(n_particles), 0.0, 0.0, 0.0, 0.0};
  }

  // max |matrix element| scale, used to set tolerance floors
  double scale(int n_particles) const;
};

// State over the Dicke basis |J,m>, J = N/2; amplitudes[k] holds c_m with
// m = k - J (so odd N never needs fractional indices).
struct SpinState {
  int n_particles = 0;
  cvector amplitudes;

  double j() const { return 0.5 * n_particles; }
  double m_at(std::size_t k) const { return static_cast<double>(k) - j(); }
  std::size_t dim() const { return amplitudes.size(); }

  double norm() const;
  SpinState& normalize();

  // |J, m = k - J>
  static SpinState basis_state(int n_particles, std::size_t k);
  // (|J,J> + |J,-J>)/sqrt(2)
  static SpinState cat_state(int n_particles);
};

// Ladder factor sqrt(J(J+1) - m(m+1)) for the transition m -> m+1.
double ladder_coefficient(double j, double m);

// (c_n*N + c_x*Jx + c_y*Jy + c_z*Jz + c_zz*Jz^2)|psi>; input unmodified,
// output generally unnormalized.
cvector apply_operator(const SpinState& state, const CollectiveOperator& op);

// Re<psi|O|psi>; the imaginary residual must stay below 1e-10 at unit
// operator scale (Hermiticity check).
double expectation(const SpinState& state, const CollectiveOperator& op);

// <O^2> as ||O|psi>||^2 (valid for Hermitian O).
double second_moment(const SpinState& state, const CollectiveOperator& op);

// <O^2> - <O>^2, clamped to >= 0 at 1e-14 relative tolerance.
double variance(const SpinState& state, const CollectiveOperator& op);

// <a|b>
complexd overlap(const SpinState& a, const SpinState& b);

}  // namespace twomode

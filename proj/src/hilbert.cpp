#include "twomode/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace twomode {

double CollectiveOperator::scale(int n_particles) const {
  const double jj = 0.5 * n_particles;
  return std::abs(coef_n) * n_particles + (std::abs(coef_x) + std::abs(coef_y) + std::abs(coef_z)) * jj +
         std::abs(coef_zz) * jj * jj;
}

double SpinState::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

SpinState& SpinState::normalize() {
  const double n = norm();
  if (n == 0.0) throw dimension_error("cannot normalize a zero state");
  for (auto& a : amplitudes) a /= n;
  return *this;
}

SpinState SpinState::basis_state(int n_particles, std::size_t k) {
  if (k > static_cast<std::size_t>(n_particles))
    throw dimension_error("basis index out of range");
  SpinState s{n_particles, cvector(n_particles + 1, 0.0)};
  s.amplitudes[k] = 1.0;
  return s;
}

SpinState SpinState::cat_state(int n_particles) {
  SpinState s{n_particles, cvector(n_particles + 1, 0.0)};
  const double w = 1.0 / std::sqrt(2.0);
  s.amplitudes.front() = w;
  s.amplitudes.back() = w;
  return s;
}

double ladder_coefficient(double j, double m) {
  return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

cvector apply_operator(const SpinState& state, const CollectiveOperator& op) {
  const std::size_t dim = state.dim();
  if (dim != static_cast<std::size_t>(state.n_particles) + 1)
    throw dimension_error("state length does not match n_particles + 1");

  const double jj = state.j();
  cvector out(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    const double m = state.m_at(k);
    out[k] = (op.coef_n * state.n_particles + op.coef_z * m + op.coef_zz * m * m) *
             state.amplitudes[k];
  }
  if (op.coef_x != 0.0 || op.coef_y != 0.0) {
    // Jx = (J+ + J-)/2, Jy = (J+ - J-)/(2i) with J+|m> = lam(m)|m+1>:
    // the m -> m+1 element of (c_x Jx + c_y Jy) is (c_x - i c_y)/2 * lam(m).
    const complexd up(0.5 * op.coef_x, -0.5 * op.coef_y);
    const complexd down = std::conj(up);
    for (std::size_t k = 0; k + 1 < dim; ++k) {
      const double lam = ladder_coefficient(jj, state.m_at(k));
      out[k + 1] += up * lam * state.amplitudes[k];
      out[k] += down * lam * state.amplitudes[k + 1];
    }
  }
  return out;
}

double expectation(const SpinState& state, const CollectiveOperator& op) {
  const cvector applied = apply_operator(state, op);
  complexd e = 0.0;
  for (std::size_t k = 0; k < applied.size(); ++k)
    e += std::conj(state.amplitudes[k]) * applied[k];
  // Hermitian O on a normalized state: the imaginary part is pure roundoff.
  const double tol = 1e-10 * std::max(1.0, op.scale(state.n_particles));
  if (std::abs(e.imag()) > tol)
    throw std::logic_error("expectation value has non-negligible imaginary part");
  return e.real();
}

double second_moment(const SpinState& state, const CollectiveOperator& op) {
  const cvector applied = apply_operator(state, op);
  double s = 0.0;
  for (const auto& a : applied) s += std::norm(a);
  return s;
}

double variance(const SpinState& state, const CollectiveOperator& op) {
  const double m2 = second_moment(state, op);
  const double m1 = expectation(state, op);
  double v = m2 - m1 * m1;
  if (v < 0.0) {
    if (v < -1e-14 * std::max(1.0, m2))
      throw std::logic_error("variance negative beyond roundoff");
    v = 0.0;
  }
  return v;
}

complexd overlap(const SpinState& a, const SpinState& b) {
  if (a.dim() != b.dim()) throw dimension_error("overlap of mismatched states");
  complexd s = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k)
    s += std::conj(a.amplitudes[k]) * b.amplitudes[k];
  return s;
}

}  // namespace twomode

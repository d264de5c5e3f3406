#include "twomode/tridiag_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace twomode {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

void check_sizes(const std::vector<double>& diag,
                 const std::vector<double>& offdiag) {
  if (diag.empty()) throw std::invalid_argument("empty tridiagonal matrix");
  if (offdiag.size() + 1 != diag.size())
    throw std::invalid_argument("offdiag length must be diag length - 1");
}

// Smallest admissible pivot for Sturm sequences; chosen so e^2/pivot cannot
// overflow (LAPACK dstebz convention).
double pivot_floor(const std::vector<double>& offdiag) {
  double max_e2 = 1.0;
  for (double e : offdiag) max_e2 = std::max(max_e2, e * e);
  return kSafeMin * max_e2;
}

}  // namespace

std::pair<double, double> gershgorin_bounds(const std::vector<double>& diag,
                                            const std::vector<double>& offdiag) {
  check_sizes(diag, offdiag);
  const std::size_t n = diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(offdiag[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(offdiag[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

std::vector<double> eigenvalues_ql(std::vector<double> d,
                                   std::vector<double> e) {
  check_sizes(d, e);
  const std::size_t n = d.size();
  e.push_back(0.0);  // sentinel so e[m] is addressable at m = n-1

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      // locate the first negligible off-diagonal at or above l
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (++iter > 50)
        throw std::runtime_error("tridiagonal QL did not converge");

      // Wilkinson shift from the leading 2x2, then one implicit QL sweep
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {  // rotation annihilated early: deflate and restart
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::size_t count_below(const std::vector<double>& diag,
                        const std::vector<double>& offdiag, double x) {
  check_sizes(diag, offdiag);
  const std::size_t n = diag.size();
  const double pivmin = pivot_floor(offdiag);
  std::size_t cnt = 0;
  double q = diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++cnt;
  for (std::size_t i = 1; i < n; ++i) {
    q = diag[i] - x - offdiag[i - 1] * offdiag[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

std::vector<double> eigenvalues_bisection(const std::vector<double>& diag,
                                          const std::vector<double>& offdiag,
                                          std::size_t k) {
  check_sizes(diag, offdiag);
  if (k == 0 || k > diag.size())
    throw std::invalid_argument("eigenvalue count out of range");
  auto [glo, ghi] = gershgorin_bounds(diag, offdiag);
  // widen so the count is provably 0 at lo and n at hi
  const double pad = kEps * std::max({std::abs(glo), std::abs(ghi), 1.0});
  glo -= pad;
  ghi += pad;

  std::vector<double> out(k);
  double lo_j = glo;
  for (std::size_t j = 0; j < k; ++j) {
    double lo = lo_j, hi = ghi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;  // interval at roundoff resolution
      if (count_below(diag, offdiag, mid) <= j)
        lo = mid;
      else
        hi = mid;
    }
    out[j] = 0.5 * (lo + hi);
    lo_j = lo;  // eigenvalue j+1 cannot lie below this
  }
  return out;
}

namespace {

// Partial-pivot LU of (T - lambda I) plus solver; fill-in is one extra
// superdiagonal.  Zero pivots are replaced by +-floor (Wilkinson).
struct ShiftedLU {
  std::vector<double> u, v, w, mult;
  std::vector<char> swapped;

  ShiftedLU(const std::vector<double>& d, const std::vector<double>& e,
            double lambda, double floor_value) {
    const std::size_t n = d.size();
    u.assign(n, 0.0);
    v.assign(n, 0.0);
    w.assign(n, 0.0);
    mult.assign(n, 0.0);
    swapped.assign(n, 0);

    double alpha = d[0] - lambda, beta = (n > 1 ? e[0] : 0.0), gamma = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double sub = e[i];
      const double diag_next = d[i + 1] - lambda;
      const double super_next = (i + 2 < n) ? e[i + 1] : 0.0;
      if (std::abs(alpha) >= std::abs(sub)) {
        double piv = alpha;
        if (std::abs(piv) < floor_value)
          piv = std::copysign(floor_value, piv == 0.0 ? 1.0 : piv);
        mult[i] = sub / piv;
        u[i] = piv;
        v[i] = beta;
        w[i] = gamma;
        alpha = diag_next - mult[i] * beta;
        beta = super_next - mult[i] * gamma;
      } else {
        swapped[i] = 1;
        mult[i] = alpha / sub;
        u[i] = sub;
        v[i] = diag_next;
        w[i] = super_next;
        alpha = beta - mult[i] * diag_next;
        beta = gamma - mult[i] * super_next;
      }
      gamma = 0.0;
    }
    if (std::abs(alpha) < floor_value)
      alpha = std::copysign(floor_value, alpha == 0.0 ? 1.0 : alpha);
    u.back() = alpha;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = u.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= mult[i] * b[i];
    }
    b[n - 1] /= u[n - 1];
    if (n == 1) return;
    for (std::size_t i = n - 1; i-- > 0;) {
      double s = b[i] - v[i] * b[i + 1];
      if (i + 2 < n) s -= w[i] * b[i + 2];
      b[i] = s / u[i];
    }
  }
};

double vec_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

// deterministic start vector (64-bit LCG)
std::vector<double> start_vector(std::size_t n, std::uint64_t seed) {
  std::vector<double> b(n);
  std::uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
  for (auto& bi : b) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    bi = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  }
  return b;
}

double residual_norm(const std::vector<double>& d, const std::vector<double>& e,
                     double lambda, const std::vector<double>& x) {
  const std::size_t n = d.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (d[i] - lambda) * x[i];
    if (i > 0) r += e[i - 1] * x[i - 1];
    if (i + 1 < n) r += e[i] * x[i + 1];
    s += r * r;
  }
  return std::sqrt(s);
}

void fix_sign(std::vector<double>& x) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
  if (x[imax] < 0.0)
    for (auto& xi : x) xi = -xi;
}

std::vector<double> inverse_iteration_impl(
    const std::vector<double>& d, const std::vector<double>& e, double lambda,
    double width, const std::vector<const std::vector<double>*>& orthogonal_to) {
  const std::size_t n = d.size();
  const double floor_value = std::max(kEps * width, kSafeMin * 1e4);
  const ShiftedLU lu(d, e, lambda, floor_value);

  std::vector<double> x = start_vector(n, 0x9e3779b97f4a7c15ull + n);
  const double tol = 1e-11 * std::max(width, std::abs(lambda));
  for (int it = 0; it < 8; ++it) {
    lu.solve(x);
    for (const auto* prev : orthogonal_to) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += (*prev)[i] * x[i];
      for (std::size_t i = 0; i < n; ++i) x[i] -= dot * (*prev)[i];
    }
    const double nrm = vec_norm(x);
    if (nrm == 0.0) {  // orthogonalization wiped the iterate; reseed
      x = start_vector(n, 0xda942042e4dd58b5ull * (it + 2));
      continue;
    }
    for (auto& xi : x) xi /= nrm;
    if (it >= 1 && residual_norm(d, e, lambda, x) <= tol) break;
  }
  fix_sign(x);
  return x;
}

}  // namespace

TridiagonalEigenpairs lowest_eigenpairs(const std::vector<double>& diag,
                                        const std::vector<double>& offdiag,
                                        std::size_t k) {
  check_sizes(diag, offdiag);
  const std::size_t n = diag.size();
  if (k == 0 || k > n)
    throw std::invalid_argument("eigenpair count out of range");

  TridiagonalEigenpairs result;
  if (n <= 128) {
    auto all = eigenvalues_ql(diag, offdiag);
    result.values.assign(all.begin(), all.begin() + k);
  } else {
    result.values = eigenvalues_bisection(diag, offdiag, k);
  }

  const auto [glo, ghi] = gershgorin_bounds(diag, offdiag);
  const double width = std::max(ghi - glo, kEps * std::max(std::abs(ghi), 1.0));
  const double cluster_tol = 1e-8 * width;

  result.vectors.resize(k);
  std::size_t cluster_start = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j > 0 && result.values[j] - result.values[j - 1] > cluster_tol)
      cluster_start = j;
    std::vector<const std::vector<double>*> prev;
    for (std::size_t i = cluster_start; i < j; ++i)
      prev.push_back(&result.vectors[i]);
    // separate numerically coincident eigenvalues before iterating
    const double lambda =
        result.values[j] + static_cast<double>(j - cluster_start) * kEps * width;
    result.vectors[j] = inverse_iteration_impl(diag, offdiag, lambda, width, prev);
  }
  return result;
}

}  // namespace twomode

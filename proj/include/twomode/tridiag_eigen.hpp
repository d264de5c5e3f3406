#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace twomode {

// Symmetric tridiagonal eigenproblems: diag has n entries, offdiag n-1.
// Everything here is deterministic (fixed iteration order, fixed start
// vectors) so repeated runs are bit-identical.

// Gershgorin enclosure [lo, hi] of the full spectrum.
std::pair<double, double> gershgorin_bounds(const std::vector<double>& diag,
                                            const std::vector<double>& offdiag);

// Full spectrum, ascending.  Implicit-shift QL with Wilkinson shift,
// eigenvalues only; O(n) per sweep, ~2-3 sweeps per eigenvalue.
std::vector<double> eigenvalues_ql(std::vector<double> diag,
                                   std::vector<double> offdiag);

// Sturm count: number of eigenvalues strictly below x.
std::size_t count_below(const std::vector<double>& diag,
                        const std::vector<double>& offdiag, double x);

// k smallest eigenvalues via bisection on the Sturm count, ascending,
// to machine precision relative to the Gershgorin width.
std::vector<double> eigenvalues_bisection(const std::vector<double>& diag,
                                          const std::vector<double>& offdiag,
                                          std::size_t k);

struct TridiagonalEigenpairs {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // unit norm, vectors[i] <-> values[i]
};

// k lowest eigenpairs: bisection for values (QL when the matrix is small),
// inverse iteration for vectors, Gram-Schmidt within clusters whose relative
// gap is below 1e-8 of the spectral width.
TridiagonalEigenpairs lowest_eigenpairs(const std::vector<double>& diag,
                                        const std::vector<double>& offdiag,
                                        std::size_t k);

}  // namespace twomode

#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "twomode/hamiltonian.hpp"

namespace twomode {

// Brute-force verification path: cyclic Jacobi on the full dense matrix.
// O(n^3) and deliberately independent of the tridiagonal solver — no shared
// shifts, counts, or iteration code — so the two can cross-check each other.

struct DenseEigen {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[i] <-> values[i]
};

DenseEigen dense_jacobi(std::vector<std::vector<double>> a);

// Full spectrum / ground pair of the two-mode Hamiltonian via the dense route.
DenseEigen dense_spectrum(const TwoModeParams& params);
std::pair<double, std::vector<double>> dense_ground_state(
    const TwoModeParams& params);

// Random normalized state (deterministic in the seed).
SpinState random_spin_state(int n_particles, std::uint64_t seed);

// Tridiagonal-vs-dense equivalence: every N <= 12, `draws` random (g, dE)
// each; ground energy and |c_m| must agree to 1e-10.  Returns the number of
// failing draws; prints one line per N when verbose.
int oracle_equivalence_suite(std::uint64_t seed, int draws, bool verbose,
                             std::ostream& out);

}  // namespace twomode

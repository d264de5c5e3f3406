#pragma once

#include <stdexcept>
#include <string>

namespace twomode {

// State/operator/vector length does not match the N implied by context.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// |<Jx>| < 1e-12 * N: the fringe visibility has vanished and the phase
// resolution is physically divergent, not numerically noisy.
struct undefined_resolution_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Invalid protocol / sweep / CLI configuration.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Norm drift beyond 1e-6 during propagation; retry with smaller dt.
struct integration_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twomode

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "twomode/dense_check.hpp"
#include "twomode/expansion.hpp"
#include "twomode/hamiltonian.hpp"
#include "twomode/observables.hpp"

using namespace twomode;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("mode functions are unit-normalized gaussians centered at +-d") {
  ExpansionGeometry geom;
  geom.d = 3.0;
  geom.delta_y = 0.8;

  for (double t : {0.0, 2.5, 40.0}) {
    geom.t = t;
    // trapezoid over a wide grid
    for (Side side : {Side::left, Side::right}) {
      const double w = geom.delta_y * std::sqrt(1.0 + t * t);
      double acc = 0.0;
      const int steps = 4000;
      const double lo = -geom.d - 10.0 * w, hi = geom.d + 10.0 * w;
      const double h = (hi - lo) / steps;
      for (int i = 0; i <= steps; ++i) {
        const double y = lo + i * h;
        const double v = std::norm(mode_function(y, geom, side));
        acc += (i == 0 || i == steps) ? 0.5 * v : v;
      }
      CHECK(acc * h == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  // left mode peaks at +d with the t=0 peak amplitude (2 pi dy^2)^{-1/4}
  geom.t = 0.0;
  const double peak = std::pow(2.0 * kPi * geom.delta_y * geom.delta_y, -0.25);
  CHECK(std::abs(mode_function(geom.d, geom, Side::left)) ==
        doctest::Approx(peak).epsilon(1e-13));
  CHECK(std::abs(mode_function(-geom.d, geom, Side::right)) ==
        doctest::Approx(peak).epsilon(1e-13));
  // far-side leakage exp(-d^2/dy^2) = e^-14 ~ 8e-7 at this separation
  CHECK(std::abs(mode_function(-geom.d, geom, Side::left)) < 1e-5 * peak);
}

TEST_CASE("g1 coefficients reproduce the cosh/cos closed form") {
  ExpansionGeometry geom;
  geom.d = 5.0;
  geom.delta_y = 1.0;
  geom.t = 7.0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> y_draw(-30.0, 30.0);
  std::uniform_real_distribution<double> th_draw(-kPi, kPi);
  std::uniform_real_distribution<double> t_draw(0.0, 20.0);

  for (int trial = 0; trial < 100; ++trial) {
    geom.t = t_draw(rng);
    geom.theta = th_draw(rng);
    const double y = y_draw(rng);
    const double s2 = geom.delta_y * geom.delta_y * (1.0 + geom.t * geom.t);
    const double env = std::exp(-(y * y + geom.d * geom.d) / (2.0 * s2)) /
                       std::sqrt(2.0 * kPi * s2);
    const double b = y * geom.d / s2;
    const double arg = b * geom.t + geom.theta;  // omega = 1

    const G1Coefficients c = g1_coefficients(y, geom);
    CHECK(c.c_n == doctest::Approx(env * std::cosh(b)).epsilon(1e-11));
    CHECK(c.c_z == doctest::Approx(2.0 * env * std::sinh(b)).epsilon(1e-11));
    CHECK(c.c_x == doctest::Approx(2.0 * env * std::cos(arg)).epsilon(1e-11));
    CHECK(c.c_y == doctest::Approx(-2.0 * env * std::sin(arg)).epsilon(1e-11));
  }
}

TEST_CASE("operator-decomposition density equals the closed form on random states") {
  // the cosh/cos closed form assumes <Jz> = 0, so draw exchange-symmetric
  // states (complex amplitudes keep the <Jy> term alive)
  ExpansionGeometry geom;
  geom.d = 6.0;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> y_draw(-25.0, 25.0);
  std::uniform_real_distribution<double> th_draw(-kPi, kPi);
  std::uniform_real_distribution<double> t_draw(0.0, 15.0);

  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    SpinState psi = random_spin_state(n, rng());
    const std::size_t dim = psi.dim();
    for (std::size_t k = 0; 2 * k < dim; ++k) {
      const complexd s = psi.amplitudes[k] + psi.amplitudes[dim - 1 - k];
      psi.amplitudes[k] = psi.amplitudes[dim - 1 - k] = 0.5 * s;
    }
    psi.normalize();
    geom.t = t_draw(rng);
    geom.theta = th_draw(rng);
    const double y = y_draw(rng);
    const double a = density(psi, y, geom);
    const double b = closed_form_density(psi, y, geom);
    CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("fringe profile integrates to N and is symmetric at theta=0") {
  const int n = 100;
  ExpansionGeometry geom;
  geom.d = 8.0;
  // at 4W - d ~ 5.9 sigma the grid truncation sits near 1e-9 of the mass;
  // pushing t toward d/dy shrinks that margin to ~4.3 sigma (1e-5)
  geom.t = 5.0;
  const SpinState gs =
      ground_state(TwoModeParams::from_g_param(n, -0.5, 1.0)).state;
  const std::vector<double> grid = default_grid(geom);
  const DensityProfile profile = fringe_profile(gs, grid, geom);

  CHECK(integrated_density(profile) == doctest::Approx(n).epsilon(1e-7));
  for (double v : profile.mean_density) CHECK(v >= -1e-12);
  for (double v : profile.noise) CHECK(v >= 0.0);

  const std::size_t dim = grid.size();
  for (std::size_t i = 0; i < dim; ++i)
    CHECK(profile.mean_density[i] ==
          doctest::Approx(profile.mean_density[dim - 1 - i]).epsilon(1e-9));
}

TEST_CASE("fringe spacing follows the interference phase gradient") {
  const int n = 100;
  ExpansionGeometry geom;
  geom.d = 8.0;
  geom.t = 10.0;
  geom.theta = kPi;  // <Jx> < 0: phase pi puts the bright fringe at y = 0
  const SpinState gs = ground_state({n, 0.0, 1.0}).state;
  // odd point count puts a sample exactly at y = 0; an even count straddles
  // the central maximum with two equal values and strict peak-finding misses it
  const std::vector<double> grid = default_grid(geom, 8193);
  const DensityProfile profile = fringe_profile(gs, grid, geom);

  // central peak at y = 0, neighbors one cos period away
  const double s2 = 1.0 + geom.t * geom.t;
  const double expected_spacing = 2.0 * kPi * s2 / (geom.d * geom.t);

  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (profile.mean_density[i] > profile.mean_density[i - 1] &&
        profile.mean_density[i] > profile.mean_density[i + 1] &&
        std::abs(grid[i]) < 1.6 * expected_spacing)
      peaks.push_back(grid[i]);
  REQUIRE(peaks.size() == 3);  // -spacing, 0, +spacing
  CHECK(std::abs(peaks[1]) < 0.05 * expected_spacing);
  CHECK(peaks[2] - peaks[0] ==
        doctest::Approx(2.0 * expected_spacing).epsilon(0.08));
}

TEST_CASE("profile-extracted visibility matches |<Jx>|/(N/2)") {
  // at y where cosh b = 1 (y = 0) the fringe contrast against the phase
  // theta is exactly 2<Jx> cos(theta): extract it by scanning theta
  const int n = 60;
  ExpansionGeometry geom;
  geom.d = 8.0;
  geom.t = 12.0;
  const SpinState s =
      ground_state(TwoModeParams::from_g_param(n, 5.0, 1.0)).state;

  geom.theta = 0.0;
  const double rho_a = density(s, 0.0, geom);
  geom.theta = kPi;
  const double rho_b = density(s, 0.0, geom);
  // <Jx> < 0 in the ground state of +dE Jx, so theta=pi is the bright fringe
  const double v = std::abs(rho_a - rho_b) / (rho_a + rho_b);
  CHECK(v == doctest::Approx(visibility(s)).epsilon(1e-8));
}

TEST_CASE("density noise vanishes on |J,J> only for the incoherent part") {
  // all particles left: var G1 = (c_x^2 + c_y^2) J/2 (transverse coherent noise)
  const int n = 12;
  ExpansionGeometry geom;
  geom.d = 4.0;
  geom.t = 3.0;
  const SpinState left = SpinState::basis_state(n, n);
  for (double y : {-2.0, 0.0, 1.3, 6.0}) {
    const G1Coefficients c = g1_coefficients(y, geom);
    const double expected =
        std::sqrt((c.c_x * c.c_x + c.c_y * c.c_y) * (0.5 * n) * 0.5);
    CHECK(density_noise(left, y, geom) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("default grid covers +-4W") {
  ExpansionGeometry geom;
  geom.d = 8.0;
  geom.t = 10.0;
  const double w = std::sqrt(geom.d * geom.d + 1.0 + geom.t * geom.t);
  const std::vector<double> grid = default_grid(geom, 512);
  CHECK(grid.size() == 512);
  CHECK(grid.front() == doctest::Approx(-4.0 * w).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(4.0 * w).epsilon(1e-12));
  CHECK_THROWS_AS(([&] {
                    ExpansionGeometry bad = geom;
                    bad.t = -1.0;
                    default_grid(bad, 64);
                  }()),
                  config_error);
}

#pragma once

#include <vector>

#include "twomode/hilbert.hpp"

namespace twomode {

// Ballistic-expansion geometry.  Lengths in units of the in-trap width dy,
// times in 1/omega; d is the half-separation of the wells at release and
// theta the phase imprinted between the two halves.
struct ExpansionGeometry {
  double d = 8.0;
  double delta_y = 1.0;
  double omega = 1.0;
  double t = 0.0;
  double theta = 0.0;
};

enum class Side { left, right };

// Free Gaussian released from y = +d (left) or y = -d (right):
//   phi(y,t) = (2 pi dy^2)^{-1/4} (1 + i w t)^{-1/2}
//              * exp(-(y -+ d)^2 / (4 dy^2 (1 + i w t)))
// normalized to 1 for every t; width^2(t) = dy^2 (1 + w^2 t^2).
//
// Convention: the LEFT mode is centered at +d and the field operator carries
// a_L e^{-i theta/2} + a_R e^{+i theta/2}.  This is the unique labeling for
// which the density decomposes as
//   <G1> = E(y) [ N cosh b + 2<Jx> cos(a+theta) - 2<Jy> sin(a+theta) ],
// with b = y d / (dy^2 (1+w^2 t^2)) and a = b w t, for arbitrary states
// (the opposite labeling flips the sign of the <Jy> term).
complexd mode_function(double y, const ExpansionGeometry& geom, Side side);

// G1(y) as a collective operator: c_n*Nhat + c_z*Jz + c_x*Jx + c_y*Jy with
//   c_n = (|phi_L|^2 + |phi_R|^2)/2,  c_z = |phi_L|^2 - |phi_R|^2,
//   c_x = 2 Re[phi_L* phi_R e^{i theta}],  c_y = -2 Im[phi_L* phi_R e^{i theta}].
struct G1Coefficients {
  double c_n = 0.0;
  double c_z = 0.0;
  double c_x = 0.0;
  double c_y = 0.0;
  CollectiveOperator as_operator() const {
    return {c_n, c_x, c_y, c_z, 0.0};
  }
};
G1Coefficients g1_coefficients(double y, const ExpansionGeometry& geom);

// <G1(y,t,theta)> via the operator decomposition (>= 0 up to roundoff).
double density(const SpinState& state, double y, const ExpansionGeometry& geom);

// Same quantity from the cosh/cos closed form; used as a cross-check.
double closed_form_density(const SpinState& state, double y,
                           const ExpansionGeometry& geom);

// dG1 = sqrt(<G1^2> - <G1>^2), the quantum noise of the local density.
double density_noise(const SpinState& state, double y,
                     const ExpansionGeometry& geom);

struct DensityProfile {
  std::vector<double> y_grid;
  std::vector<double> mean_density;
  std::vector<double> noise;
};

// Uniform default grid: 2048 points over [-4W, 4W],
// W = sqrt(d^2 + dy^2 (1 + w^2 t^2)); envelope truncation < 1e-8.
std::vector<double> default_grid(const ExpansionGeometry& geom,
                                 std::size_t points = 2048);

// Vectorized density and noise; grid must be strictly increasing.
DensityProfile fringe_profile(const SpinState& state,
                              const std::vector<double>& y_grid,
                              const ExpansionGeometry& geom);

// Trapezoidal integral of the mean density; equals N within 1e-6*N on the
// default grid.
double integrated_density(const DensityProfile& profile);

}  // namespace twomode

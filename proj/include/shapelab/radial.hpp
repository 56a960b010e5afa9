#pragma once

#include <utility>
#include <vector>

#include "shapelab/beta.hpp"

namespace shapelab {

// Lebesgue measure of the unit ball, via the two-step recurrence
// w_d = w_{d-2} * 2*pi/d (no Gamma function needed).
double unit_ball_volume(int d);

// surface measure of the unit sphere S^{d-1}: d * w_d
double unit_sphere_area(int d);

// radius of the ball of unit measure in dimension d
double ball_radius_for_unit_volume(int d);

// Closed-form torsional rigidity of the ball:
//   finite beta: (w_d/d) (r^{d+1}/beta + r^{d+2}/(d+2))
//   Dirichlet:   w_d r^{d+2} / (d (d+2))
double torsion_ball(double r, const Beta& beta, int d);

// w(s) = (r^2 - s^2)/(2d) + r/(d beta); solves -Lap w = 1 with the Robin
// condition w'(r) + beta w(r) = 0
double torsion_ball_profile(double r, const Beta& beta, int d, double s);

// Principal eigenvalue of the ball by radial shooting: integrate
// u'' + (d-1)/s u' + lambda u = 0, u(0)=1, u'(0)=0 with fixed-step RK4 and
// bisect the boundary functional u'(r) + beta u(r) (Dirichlet: u(r)) in
// lambda. The step count is doubled until the eigenvalue is stable to tol.
double eig_ball(double r, const Beta& beta, int d, double tol = 1e-10);

// beta / (4 r (1 + beta r))
double eig_ball_lower_bound(double r, double beta);

// max over the grid of lambda_beta(B_r) * r (1 + beta r) / beta; empirical
// stand-in for the dimensional constant in the upper eigenvalue bound
double estimate_Cd(int d, const std::vector<std::pair<double, double>>& grid,
                   double tol = 1e-10);

}  // namespace shapelab

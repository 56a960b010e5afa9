#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shapelab/beta.hpp"

namespace shapelab {

struct QuantityReport {
  std::string domain;  // short identifier, e.g. "ball(r=1,d=2)"
  Beta beta = Beta(1.0);
  double q = 1.0;
  double lambda = 0.0;
  double torsion = 0.0;
  double F = 0.0;
  std::string solver;  // "radial" | "fem" | "union"
  double mesh_h = 0.0;  // 0 for radial solves
};

struct PerturbedBallReport {
  double c;
  double beta;
  double lambdaBc;      // lambda_beta(B) + c
  double torsionLower;  // 1 / (beta * perimeter + c)
  double m1Lower;       // product of the two
};

// F_q = lambda * torsion^q
double F_q(double lambda, double torsion, double q);

// disjoint union: eigenvalue is the min over parts, torsion the sum
std::pair<double, double> union_quantities(
    const std::vector<std::pair<double, double>>& parts);

// quantities of t*Omega at parameter beta from quantities of Omega at t*beta:
// lambda -> t^-2 lambda, torsion -> t^{d+2} torsion
std::pair<double, double> transport_by_scaling(double lambda_at_tbeta,
                                               double torsion_at_tbeta,
                                               double t, int d);

struct ComparisonDiagnostics {
  bool lambda_vs_dirichlet;  // lambda_beta <= lambda_inf
  bool lambda_vs_boundary;   // lambda_beta <= beta * perimeter / area
  bool torsion_vs_dirichlet; // T_beta >= T_inf
  bool torsion_vs_boundary;  // T_beta >= area^2 / (beta * perimeter)
  double slack_lambda_dirichlet;
  double slack_lambda_boundary;
  double slack_torsion_dirichlet;
  double slack_torsion_boundary;
  bool all() const {
    return lambda_vs_dirichlet && lambda_vs_boundary &&
           torsion_vs_dirichlet && torsion_vs_boundary;
  }
};

// diagnostic only, never throws; slack > 0 means the inequality holds with
// margin
ComparisonDiagnostics comparison_check(const QuantityReport& robin,
                                       const QuantityReport& dirichlet,
                                       double area, double perimeter);

// lower-bound curve c -> (lambda_beta(B) + c) / (beta P + c) for the ball of
// unit measure; increases to 1
std::vector<PerturbedBallReport> perturbed_ball_curve(
    double beta, const std::vector<double>& cs, int d);

// CSV row: domain-id, beta ("inf" allowed), q, lambda, torsion, F, solver,
// mesh-h (empty for radial)
std::string report_csv_row(const QuantityReport& r);

}  // namespace shapelab

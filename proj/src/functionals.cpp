#include "shapelab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "shapelab/csv.hpp"
#include "shapelab/error.hpp"
#include "shapelab/radial.hpp"

namespace shapelab {

double F_q(double lambda, double torsion, double q) {
  if (!(lambda > 0.0) || !(torsion > 0.0))
    throw ValidationError("F_q needs lambda > 0 and torsion > 0");
  return lambda * std::pow(torsion, q);
}

std::pair<double, double> union_quantities(
    const std::vector<std::pair<double, double>>& parts) {
  if (parts.empty()) throw ValidationError("union of no parts");
  double lam = parts[0].first;
  double tor = 0.0;
  for (const auto& [l, t] : parts) {
    if (!(l > 0.0) || !(t > 0.0))
      throw ValidationError("union parts need positive quantities");
    lam = std::min(lam, l);
    tor += t;
  }
  return {lam, tor};
}

std::pair<double, double> transport_by_scaling(double lambda_at_tbeta,
                                               double torsion_at_tbeta,
                                               double t, int d) {
  if (!(t > 0.0)) throw ValidationError("scale factor must be > 0");
  return {lambda_at_tbeta / (t * t),
          torsion_at_tbeta * std::pow(t, d + 2)};
}

ComparisonDiagnostics comparison_check(const QuantityReport& robin,
                                       const QuantityReport& dirichlet,
                                       double area, double perimeter) {
  ComparisonDiagnostics d{};
  const double beta = robin.beta.value();
  const double lam_cap_boundary = beta * perimeter / area;
  const double tor_floor_boundary = area * area / (beta * perimeter);
  d.slack_lambda_dirichlet = dirichlet.lambda - robin.lambda;
  d.slack_lambda_boundary = lam_cap_boundary - robin.lambda;
  d.slack_torsion_dirichlet = robin.torsion - dirichlet.torsion;
  d.slack_torsion_boundary = robin.torsion - tor_floor_boundary;
  d.lambda_vs_dirichlet = d.slack_lambda_dirichlet >= 0.0;
  d.lambda_vs_boundary = d.slack_lambda_boundary >= 0.0;
  d.torsion_vs_dirichlet = d.slack_torsion_dirichlet >= 0.0;
  d.torsion_vs_boundary = d.slack_torsion_boundary >= 0.0;
  return d;
}

std::vector<PerturbedBallReport> perturbed_ball_curve(
    double beta, const std::vector<double>& cs, int d) {
  if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
  const double r = ball_radius_for_unit_volume(d);
  const double P = unit_sphere_area(d) * std::pow(r, d - 1);
  const double lam = eig_ball(r, Beta(beta), d);
  std::vector<PerturbedBallReport> out;
  out.reserve(cs.size());
  for (double c : cs) {
    if (c < 0.0) throw ValidationError("perturbation c must be >= 0");
    PerturbedBallReport rep;
    rep.c = c;
    rep.beta = beta;
    rep.lambdaBc = lam + c;
    rep.torsionLower = 1.0 / (beta * P + c);
    rep.m1Lower = rep.lambdaBc * rep.torsionLower;
    out.push_back(rep);
  }
  return out;
}

std::string report_csv_row(const QuantityReport& r) {
  std::string row = csv_escape(r.domain) + "," + r.beta.str() + "," +
                    format_float(r.q) + "," + format_float(r.lambda) + "," +
                    format_float(r.torsion) + "," + format_float(r.F) + "," +
                    csv_escape(r.solver) + ",";
  if (r.mesh_h > 0.0) row += format_float(r.mesh_h);
  return row;
}

}  // namespace shapelab

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shapelab/beta.hpp"
#include "shapelab/functionals.hpp"
#include "shapelab/geometry.hpp"

namespace shapelab {

struct SlopeFit {
  double slope;
  double intercept;
  double r2;
  std::vector<std::pair<double, double>> points;  // (log x, log y)
};

// ordinary least squares on (log x, log y); needs >= 4 points
SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points);

struct FamilyResult {
  SlopeFit fit;
  double expected_slope;
  std::vector<QuantityReport> reports;  // one per family parameter
  std::vector<double> params;           // delta or epsilon per report
};

// One small ball B_delta plus N tiny balls B_eps, eps = delta^{d+2},
// N = floor((1/w_d - delta^d)/eps^d), rescaled exactly to unit measure.
// Expected slope of log F_q vs log delta: -1 + q(d+1) Robin,
// -2 + q(d+2) Dirichlet.
FamilyResult threshold_family(double q, int d, const Beta& beta,
                              const std::vector<double>& deltas);

// N copies of B_eps with N = round(1/(w_d eps^d)), rescaled exactly to unit
// measure; the fit is reported against the reference exponent -2 + 2q.
FamilyResult divergence_family(double q, int d, const Beta& beta,
                               const std::vector<double>& epsilons);

struct HomogenizationRow {
  int N;
  double k;
  double beta;
  double lambda;
  double torsion;
  double F1;
  double area;
  double perimeter;
  double target_lambda;  // beta * 2 pi k (d=2 surface density of the holes)
  double target_F1;      // 2 pi k / (4 + 2 pi k)
};

std::vector<HomogenizationRow> homogenization_sweep(double beta, double k,
                                                    const std::vector<int>& Ns,
                                                    int cell_resolution,
                                                    int jobs = 1);

// Empirical constant of the trace-interpolation inequality: max over meshes
// of ||u||_2^2 / (E(u)^{d/(d+1)} ||u||_1^{2/(d+1)}) with
// E(u) = u^T (A + Mb) u, u the Robin principal eigenfunction at `beta`.
double gn_probe(const std::vector<Mesh>& meshes, double beta);

struct KjProbeEntry {
  std::string domain;
  double F;
};

struct KjProbeReport {
  double q;
  double beta_value;  // 0 marks Dirichlet
  double F_ball;
  std::vector<KjProbeEntry> entries;
  double F_min;
  double F_max;
  double gap_to_ball;       // F_min - F_ball
  bool ball_is_min;         // within no slack; informational
  bool ball_is_max;
  std::string note;         // always flags the exploratory status
};

// Landscape scan of F_q over a unit-measure corpus vs the ball. Exploratory:
// reports only, never a pass/fail signal.
KjProbeReport kj_probe(double q, const Beta& beta,
                       const std::vector<DomainSpec>& corpus, int resolution);

}  // namespace shapelab

#include "shapelab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <sstream>

#include "shapelab/error.hpp"
#include "shapelab/fem.hpp"
#include "shapelab/radial.hpp"

namespace shapelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// run f(i) for i in [0, count) with up to `jobs` workers; results kept in
// index order so output is identical for any job count
template <typename F>
auto ordered_parallel(int count, int jobs, F f)
    -> std::vector<decltype(f(0))> {
  using R = decltype(f(0));
  std::vector<R> out(count);
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      out[i] = f(i);
    }
  };
  std::vector<std::future<void>> pool;
  for (int t = 0; t < std::min(jobs, count); ++t)
    pool.push_back(std::async(std::launch::async, worker));
  for (auto& fut : pool) fut.get();
  return out;
}

}  // namespace

SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4)
    throw ValidationError("slope_fit needs at least 4 points");
  SlopeFit fit;
  fit.points.reserve(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw ValidationError("slope_fit needs positive coordinates");
    fit.points.emplace_back(std::log(x), std::log(y));
    sx += fit.points.back().first;
    sy += fit.points.back().second;
  }
  const double n = double(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [lx, ly] : fit.points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
    syy += (ly - my) * (ly - my);
  }
  if (sxx == 0.0) throw ValidationError("slope_fit needs distinct x values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

FamilyResult threshold_family(double q, int d, const Beta& beta,
                              const std::vector<double>& deltas) {
  if (d < 2) throw ValidationError("dimension must be >= 2");
  const double wd = unit_ball_volume(d);
  FamilyResult res;
  res.expected_slope = beta.infinite() ? -2.0 + q * (d + 2)
                                       : -1.0 + q * (d + 1);
  std::vector<std::pair<double, double>> pts;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw ValidationError("delta must be > 0");
    const double eps = std::pow(delta, d + 2);
    const double n_exact = (1.0 / wd - std::pow(delta, d)) / std::pow(eps, d);
    if (n_exact < 1.0) {
      std::ostringstream os;
      os << "delta " << delta << " too large: no room for the small balls";
      throw ValidationError(os.str());
    }
    const double N = std::floor(n_exact);

    // rescale the union exactly to unit measure
    const double volume = wd * (std::pow(delta, d) + N * std::pow(eps, d));
    const double t = std::pow(volume, -1.0 / double(d));
    const Beta tbeta = beta.scaled(t);

    const double lam_big = eig_ball(delta, tbeta, d);
    const double lam_small = eig_ball(eps, tbeta, d);
    const double tor_big = torsion_ball(delta, tbeta, d);
    const double tor_small = torsion_ball(eps, tbeta, d);
    auto [lam_u, tor_u] = union_quantities(
        {{lam_big, tor_big}, {lam_small, N * tor_small}});
    auto [lam, tor] = transport_by_scaling(lam_u, tor_u, t, d);

    QuantityReport rep;
    std::ostringstream os;
    os << "ball(" << delta << ")+" << N << "xball(" << eps << ")";
    rep.domain = os.str();
    rep.beta = beta;
    rep.q = q;
    rep.lambda = lam;
    rep.torsion = tor;
    rep.F = F_q(lam, tor, q);
    rep.solver = "union";
    res.reports.push_back(rep);
    res.params.push_back(delta);
    pts.emplace_back(delta, rep.F);
  }
  res.fit = slope_fit(pts);
  return res;
}

FamilyResult divergence_family(double q, int d, const Beta& beta,
                               const std::vector<double>& epsilons) {
  if (d < 2) throw ValidationError("dimension must be >= 2");
  if (!(q < 1.0)) throw ValidationError("divergence family needs q < 1");
  const double wd = unit_ball_volume(d);
  FamilyResult res;
  res.expected_slope = -2.0 + 2.0 * q;
  std::vector<std::pair<double, double>> pts;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw ValidationError("epsilon must be > 0");
    const double N = std::max(1.0, std::round(1.0 / (wd * std::pow(eps, d))));
    const double volume = wd * N * std::pow(eps, d);
    const double t = std::pow(volume, -1.0 / double(d));
    const Beta tbeta = beta.scaled(t);

    const double lam_small = eig_ball(eps, tbeta, d);
    const double tor_small = torsion_ball(eps, tbeta, d);
    auto [lam, tor] = transport_by_scaling(lam_small, N * tor_small, t, d);

    QuantityReport rep;
    std::ostringstream os;
    os << N << "xball(" << eps << ")";
    rep.domain = os.str();
    rep.beta = beta;
    rep.q = q;
    rep.lambda = lam;
    rep.torsion = tor;
    rep.F = F_q(lam, tor, q);
    rep.solver = "union";
    res.reports.push_back(rep);
    res.params.push_back(eps);
    pts.emplace_back(eps, rep.F);
  }
  res.fit = slope_fit(pts);
  return res;
}

std::vector<HomogenizationRow> homogenization_sweep(double beta, double k,
                                                    const std::vector<int>& Ns,
                                                    int cell_resolution,
                                                    int jobs) {
  if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
  auto rows = ordered_parallel((int)Ns.size(), jobs, [&](int i) {
    const int N = Ns[i];
    Mesh mesh = make_perforated_square_mesh(N, k, cell_resolution);
    AssembledSystem sys = assemble(mesh);
    SpectralSolution eig = solve_eig(sys, Beta(beta));
    TorsionSolution tor = solve_torsion(sys, Beta(beta));
    HomogenizationRow row;
    row.N = N;
    row.k = k;
    row.beta = beta;
    row.lambda = eig.lambda;
    row.torsion = tor.T;
    row.F1 = eig.lambda * tor.T;
    row.area = sys.area;
    row.perimeter = sys.perimeter;
    row.target_lambda = beta * 2.0 * kPi * k;
    row.target_F1 = 2.0 * kPi * k / (4.0 + 2.0 * kPi * k);
    return row;
  });
  return rows;
}

double gn_probe(const std::vector<Mesh>& meshes, double beta) {
  if (meshes.empty()) throw ValidationError("gn_probe needs meshes");
  double best = 0.0;
  for (const auto& mesh : meshes) {
    AssembledSystem sys = assemble(mesh);
    SpectralSolution eig = solve_eig(sys, Beta(beta));
    const auto& u = eig.u;
    const double nu2 = sys.M.quadratic_form(u);
    SparseSymmetric E_form = sys.A.plus_scaled(sys.Mb, 1.0);
    const double energy = E_form.quadratic_form(u);
    std::vector<double> lumped = sys.M.multiply(
        std::vector<double>(u.size(), 1.0));
    double nu1 = 0.0;
    for (size_t i = 0; i < u.size(); ++i) nu1 += std::abs(u[i]) * lumped[i];
    const int d = 2;
    const double R = nu2 / (std::pow(energy, double(d) / (d + 1)) *
                            std::pow(nu1, 2.0 / (d + 1)));
    best = std::max(best, R);
  }
  return best;
}

KjProbeReport kj_probe(double q, const Beta& beta,
                       const std::vector<DomainSpec>& corpus, int resolution) {
  KjProbeReport rep;
  rep.q = q;
  rep.beta_value = beta.infinite() ? 0.0 : beta.value();
  rep.note = "EXPLORATORY: landscape scan, not a pass/fail check";

  const int d = 2;
  const double rb = ball_radius_for_unit_volume(d);
  const double lam_b = eig_ball(rb, beta, d);
  const double tor_b = torsion_ball(rb, beta, d);
  rep.F_ball = F_q(lam_b, tor_b, q);

  for (const auto& spec : corpus) {
    validate_domain(spec);
    double lam = 0.0, tor = 0.0;
    if (const auto* ball = std::get_if<BallSpec>(&spec.v)) {
      lam = eig_ball(ball->radius, beta, ball->dim);
      tor = torsion_ball(ball->radius, beta, ball->dim);
    } else {
      Mesh mesh;
      if (const auto* rect = std::get_if<RectangleSpec>(&spec.v)) {
        int nx = std::max(1, (int)std::lround(resolution * rect->width));
        int ny = std::max(1, (int)std::lround(resolution * rect->height));
        mesh = make_rect_mesh(rect->width, rect->height, nx, ny);
      } else if (const auto* perf = std::get_if<PerforatedSquareSpec>(&spec.v)) {
        mesh = make_perforated_square_mesh(perf->N, perf->k, resolution);
      } else {
        throw ValidationError("kj_probe: unsupported corpus domain " +
                              spec.label());
      }
      // normalize to unit measure before solving
      MeshStats st = mesh_stats(mesh);
      mesh = scale_mesh(mesh, 1.0 / std::sqrt(st.area));
      AssembledSystem sys = assemble(mesh);
      lam = solve_eig(sys, beta).lambda;
      tor = solve_torsion(sys, beta).T;
    }
    rep.entries.push_back({spec.label(), F_q(lam, tor, q)});
  }

  rep.F_min = rep.F_ball;
  rep.F_max = rep.F_ball;
  for (const auto& e : rep.entries) {
    rep.F_min = std::min(rep.F_min, e.F);
    rep.F_max = std::max(rep.F_max, e.F);
  }
  rep.gap_to_ball = rep.F_min - rep.F_ball;
  rep.ball_is_min = rep.F_min >= rep.F_ball;
  rep.ball_is_max = rep.F_max <= rep.F_ball;
  return rep;
}

}  // namespace shapelab

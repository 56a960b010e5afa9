#include "shapelab/fem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "shapelab/error.hpp"
#include "shapelab/rng.hpp"

namespace shapelab {

namespace {

std::vector<double> scatter(const std::vector<double>& packed,
                            const std::vector<int>& keep, int n) {
  std::vector<double> full(n, 0.0);
  for (size_t i = 0; i < keep.size(); ++i) full[keep[i]] = packed[i];
  return full;
}

std::vector<double> gather(const std::vector<double>& full,
                           const std::vector<int>& keep) {
  std::vector<double> packed(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) packed[i] = full[keep[i]];
  return packed;
}

std::vector<int> interior_vertices(const AssembledSystem& sys) {
  std::vector<int> keep;
  keep.reserve(sys.b.size());
  size_t j = 0;
  for (int i = 0; i < (int)sys.b.size(); ++i) {
    if (j < sys.boundary_vertices.size() && sys.boundary_vertices[j] == i) {
      ++j;
    } else {
      keep.push_back(i);
    }
  }
  return keep;
}

}  // namespace

AssembledSystem assemble(const Mesh& mesh) {
  const int n = (int)mesh.vertices.size();
  std::vector<std::array<int, 2>> a_idx, m_idx, mb_idx;
  std::vector<double> a_val, m_val, mb_val;
  a_idx.reserve(mesh.triangles.size() * 9);
  a_val.reserve(mesh.triangles.size() * 9);
  m_idx.reserve(mesh.triangles.size() * 9);
  m_val.reserve(mesh.triangles.size() * 9);

  AssembledSystem sys;
  sys.b.assign(n, 0.0);

  for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const auto& t = mesh.triangles[ti];
    const auto& p0 = mesh.vertices[t[0]];
    const auto& p1 = mesh.vertices[t[1]];
    const auto& p2 = mesh.vertices[t[2]];
    // edge vector opposite each vertex, cyclic
    const double ex[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    const double ey[3] = {p2[1] - p1[1], p0[1] - p2[1], p1[1] - p0[1]};
    const double area = 0.5 * (ex[2] * (-ey[1]) - (-ex[1]) * ey[2]);
    if (!(area > 0.0)) {
      std::ostringstream os;
      os << "assemble: degenerate triangle " << ti;
      throw ValidationError(os.str());
    }
    for (int i = 0; i < 3; ++i) {
      sys.b[t[i]] += area / 3.0;
      for (int j = 0; j < 3; ++j) {
        a_idx.push_back({t[i], t[j]});
        a_val.push_back((ex[i] * ex[j] + ey[i] * ey[j]) / (4.0 * area));
        m_idx.push_back({t[i], t[j]});
        m_val.push_back(i == j ? area / 6.0 : area / 12.0);
      }
    }
  }

  for (const auto& be : mesh.boundary_edges) {
    const auto& pa = mesh.vertices[be.a];
    const auto& pb = mesh.vertices[be.b];
    const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
    mb_idx.push_back({be.a, be.a});
    mb_val.push_back(len / 3.0);
    mb_idx.push_back({be.b, be.b});
    mb_val.push_back(len / 3.0);
    mb_idx.push_back({be.a, be.b});
    mb_val.push_back(len / 6.0);
    mb_idx.push_back({be.b, be.a});
    mb_val.push_back(len / 6.0);
  }

  sys.A = SparseSymmetric::from_triplets(n, a_idx, a_val);
  sys.M = SparseSymmetric::from_triplets(n, m_idx, m_val);
  sys.Mb = SparseSymmetric::from_triplets(n, mb_idx, mb_val);

  MeshStats stats = mesh_stats(mesh);
  sys.area = stats.area;
  sys.perimeter = stats.perimeter;

  std::set<int> bset;
  for (const auto& be : mesh.boundary_edges) {
    bset.insert(be.a);
    bset.insert(be.b);
  }
  sys.boundary_vertices.assign(bset.begin(), bset.end());
  return sys;
}

TorsionSolution solve_torsion(const AssembledSystem& sys, const Beta& beta,
                              double tol) {
  const int n = (int)sys.b.size();
  TorsionSolution out;
  if (beta.infinite()) {
    std::vector<int> keep = interior_vertices(sys);
    SparseSymmetric K = sys.A.restrict_to(keep);
    std::vector<double> rhs = gather(sys.b, keep);
    std::vector<double> w = cg_solve(K, rhs, tol);
    out.w = scatter(w, keep, n);
    out.T = dot(rhs, w);
    out.energy = K.quadratic_form(w);
  } else {
    SparseSymmetric K = sys.A.plus_scaled(sys.Mb, beta.value());
    out.w = cg_solve(K, sys.b, tol);
    out.T = dot(sys.b, out.w);
    out.energy = K.quadratic_form(out.w);
  }
  return out;
}

SpectralSolution solve_eig(const AssembledSystem& sys, const Beta& beta,
                           double tol) {
  const int n = (int)sys.b.size();
  const double cg_tol = std::min(1e-12, tol * 0.01);

  std::vector<int> keep;
  SparseSymmetric K, M;
  if (beta.infinite()) {
    keep = interior_vertices(sys);
    K = sys.A.restrict_to(keep);
    M = sys.M.restrict_to(keep);
  } else {
    K = sys.A.plus_scaled(sys.Mb, beta.value());
    M = sys.M;
  }
  const int na = K.n();
  if (na == 0) throw ValidationError("solve_eig: no active vertices");

  auto m_norm = [&](std::vector<double>& v) {
    double nm = std::sqrt(M.quadratic_form(v));
    for (auto& x : v) x /= nm;
    return nm;
  };

  std::vector<double> x(na, 1.0);
  m_norm(x);

  double lambda = 0.0;
  double residual = 1e300;
  int iterations = 0;
  bool restarted = false;
  const int cap = 500;
  const double residual_target = 10.0 * tol;

  while (iterations < cap) {
    std::vector<double> Mx = M.multiply(x);
    std::vector<double> y = cg_solve(K, Mx, cg_tol);
    double yMy = M.quadratic_form(y);
    double lambda_new = dot(y, Mx) / yMy;
    double scale = std::sqrt(yMy);
    for (auto& v : y) v /= scale;
    ++iterations;

    std::vector<double> Ky = K.multiply(y);
    std::vector<double> My = M.multiply(y);
    double r2 = 0.0;
    for (int i = 0; i < na; ++i) {
      double ri = Ky[i] - lambda_new * My[i];
      r2 += ri * ri;
    }
    residual = std::sqrt(r2);
    bool rq_ok = std::abs(lambda_new - lambda) <= tol * std::abs(lambda_new);
    lambda = lambda_new;
    x = std::move(y);
    if (rq_ok && residual <= residual_target) break;

    // stagnation: the iterate stopped moving but the residual will not drop;
    // retry once from a fixed pseudo-random vector
    if (iterations == 400 && !restarted && residual > residual_target) {
      SplitMix64 g(1);
      for (auto& v : x) v = g.uniform() - 0.5;
      m_norm(x);
      restarted = true;
    }
  }
  if (residual > residual_target) {
    std::ostringstream os;
    os << "solve_eig: stagnation after " << iterations
       << " iterations (residual " << residual << ", target "
       << residual_target << ")";
    throw SolverError(os.str());
  }

  SpectralSolution out;
  out.lambda = lambda;
  out.residual = residual;
  out.iterations = iterations;
  out.u = beta.infinite() ? scatter(x, keep, n) : x;
  return out;
}

double discrete_F1(const AssembledSystem& sys, const Beta& beta,
                   double eig_tol, double cg_tol) {
  SpectralSolution eig = solve_eig(sys, beta, eig_tol);
  TorsionSolution tor = solve_torsion(sys, beta, cg_tol);
  return eig.lambda * tor.T;
}

}  // namespace shapelab

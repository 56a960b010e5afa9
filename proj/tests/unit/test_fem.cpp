#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "shapelab/fem.hpp"
#include "shapelab/geometry.hpp"
#include "shapelab/radial.hpp"
#include "shapelab/rng.hpp"
#include "shapelab/sparse.hpp"

using namespace shapelab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

double ones_form(const SparseSymmetric& m) {
  return m.quadratic_form(std::vector<double>(m.n(), 1.0));
}

Mesh reference_triangle() {
  Mesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.triangles = {{0, 1, 2}};
  m.boundary_edges = {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}};
  return m;
}
}  // namespace

TEST_SUITE("fem") {
  TEST_CASE("assembled row sums reproduce area, perimeter, and loads") {
    const AssembledSystem sys = assemble(make_rect_mesh(1.0, 1.0, 1, 1));
    CHECK(ones_form(sys.M) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ones_form(sys.Mb) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::abs(ones_form(sys.A)) < 1e-13);
    double load_sum = 0.0;
    for (double v : sys.b) load_sum += v;
    CHECK(load_sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sys.area == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sys.perimeter == doctest::Approx(4.0).epsilon(1e-14));

    const AssembledSystem perf =
        assemble(make_perforated_square_mesh(2, 0.5, 16));
    const MeshStats st = mesh_stats(make_perforated_square_mesh(2, 0.5, 16));
    CHECK(ones_form(perf.M) == doctest::Approx(st.area).epsilon(1e-12));
    CHECK(ones_form(perf.Mb) == doctest::Approx(st.perimeter).epsilon(1e-12));
    CHECK(perf.A.symmetry_defect() < 1e-14);
    CHECK(std::abs(ones_form(perf.A)) < 1e-10);
  }

  TEST_CASE("reference triangle stiffness has constants in its kernel") {
    const AssembledSystem sys = assemble(reference_triangle());
    const std::vector<double> r = sys.A.multiply({1.0, 1.0, 1.0});
    for (double v : r) CHECK(std::abs(v) < 1e-15);
    const std::vector<double> diag = sys.A.diagonal();
    CHECK(diag[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(diag[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(diag[2] == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("cg solves diagonal and manufactured SPD systems") {
    std::vector<std::array<int, 2>> idx;
    std::vector<double> vals;
    for (int i = 0; i < 10; ++i) {
      idx.push_back({i, i});
      vals.push_back(double(i + 1));
    }
    const SparseSymmetric D = SparseSymmetric::from_triplets(10, idx, vals);
    std::vector<double> rhs(10, 1.0);
    const std::vector<double> x = cg_solve(D, rhs, 1e-14);
    for (int i = 0; i < 10; ++i)
      CHECK(x[i] == doctest::Approx(1.0 / (i + 1)).epsilon(1e-12));

    // pseudo-random symmetric diagonally dominant system, manufactured
    // solution of ones
    SplitMix64 rng(42);
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) {
        const double v = rng.uniform() - 0.5;
        idx.push_back({i, j});
        vals.push_back(v);
        idx.push_back({j, i});
        vals.push_back(v);
      }
    for (int i = 0; i < 10; ++i) {
      idx.push_back({i, i});
      vals.push_back(10.0);
    }
    const SparseSymmetric K = SparseSymmetric::from_triplets(10, idx, vals);
    const std::vector<double> b = K.multiply(std::vector<double>(10, 1.0));
    const std::vector<double> sol = cg_solve(K, b, 1e-13);
    for (double v : sol) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("disk torsion matches the closed form within 1 percent") {
    const AssembledSystem sys = assemble(make_disk_mesh(1.0, 128, 16));
    const TorsionSolution robin = solve_torsion(sys, Beta(1.0));
    CHECK(rel_err(robin.T, 5.0 * kPi / 8.0) < 0.01);
    CHECK(rel_err(robin.T, robin.energy) < 1e-10);  // b^T w = w^T K w
    CHECK(robin.T >= sys.area * sys.area / (1.0 * sys.perimeter) - 1e-10);
    CHECK(*std::min_element(robin.w.begin(), robin.w.end()) > -1e-9);

    const TorsionSolution dir = solve_torsion(sys, Beta::dirichlet());
    CHECK(rel_err(dir.T, kPi / 8.0) < 0.01);
    CHECK(rel_err(dir.T, dir.energy) < 1e-10);
    CHECK(dir.T < robin.T);  // Dirichlet is the stiffest condition
  }

  TEST_CASE("disk eigenvalue matches radial shooting within 1 percent") {
    const AssembledSystem sys = assemble(make_disk_mesh(1.0, 128, 16));
    const SpectralSolution eig = solve_eig(sys, Beta(1.0));
    CHECK(rel_err(eig.lambda, eig_ball(1.0, Beta(1.0), 2)) < 0.01);
    CHECK(eig.lambda <= 1.0 * sys.perimeter / sys.area + 1e-10);
    CHECK(eig.residual <= 1e-9);  // 10x the default tolerance
    CHECK(eig.iterations > 0);
    // the discrete eigenvalue of a conforming space bounds from above
    CHECK(eig.lambda > eig_ball(1.0, Beta(1.0), 2));

    const SpectralSolution dir = solve_eig(sys, Beta::dirichlet());
    CHECK(rel_err(dir.lambda, oracles::dirichlet_disk_eigenvalue()) < 0.01);
    CHECK(eig.lambda < dir.lambda);
  }

  TEST_CASE("unit square Dirichlet eigenvalue approaches 2 pi^2") {
    const AssembledSystem sys = assemble(make_rect_mesh(1.0, 1.0, 64, 64));
    const SpectralSolution dir = solve_eig(sys, Beta::dirichlet());
    CHECK(rel_err(dir.lambda, 2.0 * kPi * kPi) < 0.01);
  }

  TEST_CASE("eigenvalue and torsion errors shrink at second order") {
    const double lam_exact = eig_ball(1.0, Beta(1.0), 2, 1e-12);
    const double tor_exact = 5.0 * kPi / 8.0;
    std::vector<double> lam_err, tor_err;
    for (int level = 0; level < 3; ++level) {
      const int nb = 64 << level, nr = 8 << level;
      const AssembledSystem sys = assemble(make_disk_mesh(1.0, nb, nr));
      lam_err.push_back(
          std::abs(solve_eig(sys, Beta(1.0)).lambda - lam_exact));
      tor_err.push_back(
          std::abs(solve_torsion(sys, Beta(1.0)).T - tor_exact));
    }
    for (int level = 0; level < 2; ++level) {
      const double lam_ratio = lam_err[level] / lam_err[level + 1];
      const double tor_ratio = tor_err[level] / tor_err[level + 1];
      CHECK(lam_ratio > 3.0);
      CHECK(lam_ratio < 5.0);
      CHECK(tor_ratio > 3.0);
      CHECK(tor_ratio < 5.0);
    }
  }

  TEST_CASE("Robin quantities bracket the Dirichlet ones on a fixed mesh") {
    const AssembledSystem sys = assemble(make_rect_mesh(1.0, 1.0, 16, 16));
    const double lam_robin = solve_eig(sys, Beta(1.0)).lambda;
    const double lam_dir = solve_eig(sys, Beta::dirichlet()).lambda;
    const double tor_robin = solve_torsion(sys, Beta(1.0)).T;
    const double tor_dir = solve_torsion(sys, Beta::dirichlet()).T;
    CHECK(lam_robin < lam_dir);
    CHECK(tor_robin > tor_dir);
  }

  TEST_CASE("coordinate scaling transfers discrete solutions exactly") {
    const Mesh mesh = make_rect_mesh(1.0, 1.0, 12, 12);
    const double t = 2.0;
    const AssembledSystem base = assemble(mesh);
    const AssembledSystem scaled = assemble(scale_mesh(mesh, t));
    const double lam_scaled = solve_eig(scaled, Beta(1.0)).lambda;
    const double lam_base = solve_eig(base, Beta(t * 1.0)).lambda;
    CHECK(rel_err(lam_scaled, lam_base / (t * t)) < 1e-8);
    const double tor_scaled = solve_torsion(scaled, Beta(1.0)).T;
    const double tor_base = solve_torsion(base, Beta(t * 1.0)).T;
    CHECK(rel_err(tor_scaled, std::pow(t, 4) * tor_base) < 1e-8);
  }

  TEST_CASE("discrete product lambda T stays below the area") {
    const struct {
      Mesh mesh;
      Beta beta;
    } cases[] = {
        {make_rect_mesh(1.0, 1.0, 24, 24), Beta(1.0)},
        {make_disk_mesh(1.0, 96, 12), Beta(10.0)},
        {make_perforated_square_mesh(4, 1.0, 8), Beta(0.5)},
        {make_rect_mesh(2.0, 0.5, 32, 8), Beta::dirichlet()},
    };
    for (const auto& c : cases) {
      const AssembledSystem sys = assemble(c.mesh);
      const double f1 = discrete_F1(sys, c.beta);
      CHECK(f1 > 0.0);
      CHECK(f1 <= sys.area + 1e-8);
    }

    // unit-area disk: the product is strictly inside (0, 1)
    const AssembledSystem unit =
        assemble(make_disk_mesh(1.0 / std::sqrt(kPi), 128, 16));
    const double f1 = discrete_F1(unit, Beta(1.0));
    CHECK(f1 > 0.0);
    CHECK(f1 < 1.0);

    // beta -> infinity converges to the Dirichlet product
    const AssembledSystem sq = assemble(make_rect_mesh(1.0, 1.0, 24, 24));
    CHECK(rel_err(discrete_F1(sq, Beta(1e6)),
                  discrete_F1(sq, Beta::dirichlet())) < 0.01);
  }
}

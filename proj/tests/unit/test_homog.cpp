#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "../support/oracles.hpp"
#include "shapelab/error.hpp"
#include "shapelab/homog.hpp"

using namespace shapelab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_SUITE("homog") {
  TEST_CASE("shell lattice geometry and exact mass conservation") {
    const ShellLattice lat = ShellLattice::make(2, 1.0);
    CHECK(lat.r_N == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
    REQUIRE(lat.centers.size() == 8);
    CHECK(lat.centers[0][0] == 0.25);
    CHECK(lat.centers[0][1] == 0.25);
    CHECK(lat.centers[0][2] == 0.25);
    CHECK(lat.centers[7][0] == 0.75);
    // lexicographic order: the second center advances the last coordinate
    CHECK(lat.centers[1][2] == 0.75);
    CHECK(lat.centers[1][0] == 0.25);

    for (int N : {1, 2, 3, 4, 7, 8, 16})
      for (double k : {0.5, 1.0}) {
        const ShellLattice l = ShellLattice::make(N, k);
        const double total = double(N) * N * N * l.shell_mass;
        CHECK(rel_err(total, 4.0 * kPi * k * k) < 1e-12);
      }
    // powers of two conserve the total mass bit for bit
    CHECK(8.0 * ShellLattice::make(2, 1.0).shell_mass == 4.0 * kPi);

    // separation: at k=1 the shells overlap up to N=4 and separate after
    CHECK(!ShellLattice::make(2, 1.0).separated());
    CHECK(!ShellLattice::make(4, 1.0).separated());  // 2r = 1/N exactly
    CHECK(ShellLattice::make(8, 1.0).separated());
    CHECK(ShellLattice::make(2, 0.3).separated());
  }

  TEST_CASE("pair energy matches Newton shell quadrature") {
    const double m = 4.0 * kPi;
    CHECK(shell_pair_energy(1.0, m, 0.1) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-15));
    // kernel homogeneity
    CHECK(shell_pair_energy(2.0, 3.0, 0.5) ==
          doctest::Approx(0.5 * shell_pair_energy(1.0, 3.0, 0.5))
              .epsilon(1e-15));

    // farthest pair of the N=2, k=1 lattice: D = sqrt(3)/2, r = 2^(-3/2)
    const double D = std::sqrt(3.0) / 2.0, r = std::pow(2.0, -1.5);
    const double mass = ShellLattice::make(2, 1.0).shell_mass;
    CHECK(rel_err(shell_pair_energy(D, mass, r),
                  oracles::shell_pair_quadrature(D, mass, r, 32)) < 1e-3);

    // overlapping regime: exact closed form against quadrature
    CHECK(rel_err(shell_pair_energy(1.0, m, 1.0),
                  oracles::shell_pair_quadrature(1.0, m, 1.0, 96)) < 1e-3);
    // continuity across the touching distance
    const double below = shell_pair_energy(2.0 - 1e-12, m, 1.0);
    const double above = shell_pair_energy(2.0 + 1e-12, m, 1.0);
    CHECK(rel_err(below, above) < 1e-10);
    // coincident shells: the overlap formula reduces to the self energy
    CHECK(shell_pair_energy(0.0, m, 1.0) ==
          doctest::Approx(shell_self_energy(m, 1.0)).epsilon(1e-15));
  }

  TEST_CASE("self energy matches the surface quadrature") {
    CHECK(shell_self_energy(4.0 * kPi, 1.0) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-15));
    CHECK(shell_self_energy(2.0, 0.5) ==
          doctest::Approx(2.0 * shell_self_energy(2.0, 1.0)).epsilon(1e-15));
    CHECK(rel_err(shell_self_energy(3.0, 0.7),
                  oracles::shell_self_quadrature(3.0, 0.7, 64)) < 0.01);
  }

  TEST_CASE("shell-cube term: symmetry, exactness, Monte-Carlo rate") {
    // cube symmetries map estimates onto each other exactly (same seed)
    const double r = std::pow(2.0, -1.5), m = 1.3, c = 2.0;
    const double a =
        shell_cube_energy({0.25, 0.25, 0.75}, r, m, c, 16384, 99);
    const double b =
        shell_cube_energy({0.75, 0.25, 0.25}, r, m, c, 16384, 99);
    const double d =
        shell_cube_energy({0.25, 0.75, 0.75}, r, m, c, 16384, 99);
    CHECK(a == b);
    CHECK(a == d);

    // against the exact integral: int_Q 1/max(|y-x0|, r) equals the Duffy
    // value of int_Q 1/|y-x0| minus (2/3) pi r^2 when the ball is inside
    const std::array<double, 3> x0 = {0.5, 0.5, 0.5};
    const double rr = 0.25;
    double se = 0.0;
    const double mc = shell_cube_energy(x0, rr, 1.0, 1.0, 32768, 1234, &se);
    const double exact =
        (oracles::inv_dist_cube_integral(x0, 48) -
         2.0 / 3.0 * kPi * rr * rr) /
        (4.0 * kPi);
    CHECK(se > 0.0);
    CHECK(std::abs(mc - exact) < 3.0 * se);
    // r -> 0 limit reproduces the plain Newtonian potential integral
    double se0 = 0.0;
    const double mc0 =
        shell_cube_energy(x0, 1e-6, 1.0, 1.0, 32768, 555, &se0);
    CHECK(std::abs(mc0 - oracles::inv_dist_cube_integral(x0, 48) /
                             (4.0 * kPi)) < 3.0 * se0);

    // doubling the sample count shrinks the standard error like 1/sqrt(2)
    double se1 = 0.0, se2 = 0.0;
    shell_cube_energy(x0, rr, 1.0, 1.0, 8192, 77, &se1);
    shell_cube_energy(x0, rr, 1.0, 1.0, 16384, 77, &se2);
    CHECK(se2 / se1 > 0.5);
    CHECK(se2 / se1 < 0.9);

    // against the independent surface-times-cube product quadrature
    const double quad =
        oracles::shell_cube_quadrature({0.25, 0.25, 0.75}, r, m, c, 24, 16, 32);
    CHECK(std::abs(a - quad) < 0.01 * std::abs(quad));
  }

  TEST_CASE("cube self term: scaling, caching, independent quadrature") {
    double se1 = 0.0, se2 = 0.0;
    const double v1 = cube_self_energy(1.0, 200000, 42, &se1);
    const double v2 = cube_self_energy(1.0, 200000, 43, &se2);
    CHECK(std::abs(v1 - v2) < 3.0 * std::sqrt(se1 * se1 + se2 * se2));

    // c enters quadratically and exactly (the raw integral is cached)
    CHECK(cube_self_energy(2.0, 200000, 42) == 4.0 * v1);

    // deterministic Duffy-based value of int int 1/|x-y| over the cube pair
    const double ref = oracles::cube_self_inv_dist_quadrature(16, 24);
    CHECK(std::abs(v1 - ref / (4.0 * kPi)) < 3.0 * se1);
    // the classical value of that constant is 1.88231264...
    CHECK(ref == doctest::Approx(1.8823126444).epsilon(1e-8));
  }

  TEST_CASE("energy breakdown: identity, closed-form diagonal, decay") {
    for (int N : {1, 2, 3, 4, 8})
      for (double k : {0.5, 1.0}) {
        const ShellLattice lat = ShellLattice::make(N, k);
        const EnergyBreakdown e = h1_energy(lat, 512, 42);
        CHECK(rel_err(e.S_NN_self,
                      4.0 * kPi * k * k * k * std::pow(double(N), -1.5)) <
              1e-12);
        CHECK(e.E_N == doctest::Approx(e.S_NN_self + e.S_NN_cross -
                                       2.0 * e.S_Nmu + e.S_mumu)
                           .epsilon(1e-15));
        CHECK(e.S_NN_self > 0.0);
        CHECK(e.S_Nmu > 0.0);
        CHECK(e.S_mumu > 0.0);
        CHECK(e.seed == 42);
        if (N > 1) CHECK(e.S_NN_cross > 0.0);
      }

    // same seed, same breakdown, bit for bit
    const ShellLattice lat = ShellLattice::make(2, 1.0);
    const EnergyBreakdown x = h1_energy(lat, 1024, 7);
    const EnergyBreakdown y = h1_energy(lat, 1024, 7);
    CHECK(x.E_N == y.E_N);
    CHECK(x.S_Nmu == y.S_Nmu);

    // positive and strictly decreasing with lattice refinement (k = 1)
    double prev = 1e300;
    for (int N : {1, 2, 4}) {
      const EnergyBreakdown e = h1_energy(ShellLattice::make(N, 1.0), 4096, 42);
      CHECK(e.E_N > 3.0 * e.mc_stderr);  // positive beyond noise
      CHECK(e.E_N < prev - 3.0 * e.mc_stderr);
      prev = e.E_N;
    }

    CHECK_THROWS_AS(h1_energy(ShellLattice::make(17, 0.5), 64, 1),
                    ValidationError);
  }

  TEST_CASE("narrow convergence gaps vanish where symmetry demands") {
    QuadraticPoly one{1.0, {0.0, 0.0, 0.0}, {{{0.0, 0.0, 0.0},
                                             {0.0, 0.0, 0.0},
                                             {0.0, 0.0, 0.0}}}};
    QuadraticPoly x1{0.0, {1.0, 0.0, 0.0}, {{{0.0, 0.0, 0.0},
                                            {0.0, 0.0, 0.0},
                                            {0.0, 0.0, 0.0}}}};
    QuadraticPoly r2{0.0, {0.0, 0.0, 0.0}, {{{1.0, 0.0, 0.0},
                                            {0.0, 1.0, 0.0},
                                            {0.0, 0.0, 1.0}}}};
    for (int N : {2, 4}) {
      const ShellLattice lat = ShellLattice::make(N, 1.0);
      CHECK(narrow_convergence_check(lat, one) == 0.0);
      CHECK(narrow_convergence_check(lat, x1) < 1e-14);
    }

    // |x|^2: verify against a direct evaluation of both sides
    const ShellLattice lat = ShellLattice::make(3, 1.0);
    double lattice_side = 0.0;
    for (const auto& cpt : lat.centers)
      lattice_side += lat.shell_mass *
                      (cpt[0] * cpt[0] + cpt[1] * cpt[1] + cpt[2] * cpt[2] +
                       lat.r_N * lat.r_N);
    const double cube_side = 4.0 * kPi * 1.0;  // c_total * int_Q |x|^2 = c * 1
    const double expected = std::abs(lattice_side - cube_side);
    CHECK(narrow_convergence_check(lat, r2) ==
          doctest::Approx(expected).epsilon(1e-12));

    // At k = 1 the shell-radius term r^2 = 1/N^3 exactly cancels the
    // midpoint-rule error 1/(4 N^2) when N = 4, so that gap is zero.
    CHECK(narrow_convergence_check(ShellLattice::make(4, 1.0), r2) == 0.0);

    // At k = 1/2 the gap has the closed form pi (N - 1) / (4 N^3):
    // the midpoint sum of |x|^2 over the N^3 centers is 1 - 1/(4 N^2),
    // the shell average adds r^2 = 1/(4 N^3), and c_total = pi.
    // It decreases strictly as the lattice refines.
    double prev = std::numeric_limits<double>::infinity();
    for (int N : {2, 4, 8}) {
      const double gap =
          narrow_convergence_check(ShellLattice::make(N, 0.5), r2);
      const double n3 = double(N) * double(N) * double(N);
      CHECK(gap ==
            doctest::Approx(kPi * (N - 1) / (4.0 * n3)).epsilon(1e-12));
      CHECK(gap < prev);
      prev = gap;
    }
  }

  TEST_CASE("riemann sum against the radial integral") {
    // int over |x| <= 2 eps of 1/|x| = 2 pi (2 eps)^2, by 4 pi s^2 * 1/s
    const RiemannSumCheck c16 =
        riemann_sum_check(ShellLattice::make(16, 0.5), 0.25);
    CHECK(c16.integral ==
          doctest::Approx(2.0 * kPi * 0.25).epsilon(1e-14));
    CHECK(std::abs(c16.gap) < 0.15 * c16.integral);
    CHECK(c16.gap ==
          doctest::Approx(std::abs(c16.sum - c16.integral)).epsilon(1e-12));

    const RiemannSumCheck c32 =
        riemann_sum_check(ShellLattice::make(32, 0.5), 0.25);
    CHECK(std::abs(c32.gap) < std::abs(c16.gap));

    CHECK_THROWS_AS(riemann_sum_check(ShellLattice::make(4, 0.5), 0.5),
                    ValidationError);
    CHECK_THROWS_AS(riemann_sum_check(ShellLattice::make(4, 0.5), 0.0),
                    ValidationError);
  }
}

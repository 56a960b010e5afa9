#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace shapelab {

// N^3 spherical shells on the cubic lattice ((l+1/2)/N)^3 inside the unit
// cube, radius r_N = k N^{-3/2}, each carrying uniform surface mass
// m = 4 pi r_N^2. Total mass 4 pi k^2 independent of N. Shells of
// neighbouring centers may overlap for k >= sqrt(N)/2; the energy formulas
// below stay exact in that regime, so construction does not reject it.
struct ShellLattice {
  int N;
  double k;
  double r_N;
  double shell_mass;                           // 4 pi k^2 / N^3 (exact total)
  std::vector<std::array<double, 3>> centers;  // lexicographic order

  static ShellLattice make(int N, double k);

  // 2 r_N < 1/N: shells stay inside their own cells
  bool separated() const;
};

struct EnergyBreakdown {
  double S_NN_self;
  double S_NN_cross;
  double S_Nmu;
  double S_mumu;
  double E_N;       // S_NN_self + S_NN_cross - 2 S_Nmu + S_mumu
  double mc_stderr; // combined Monte-Carlo error of the sampled terms
  uint64_t seed;
};

// Mutual Newtonian energy (kernel 1/(4 pi |x|)) of two uniform shells of
// equal radius r and mass m at center distance D. Equals m^2/(4 pi D) for
// D >= 2r (point-mass reduction); for D < 2r the exact overlap value is
// m^2/(4 pi r) (1 - D/(4r)), continuous at D = 2r.
double shell_pair_energy(double D, double m, double r);

// m^2 / (4 pi r)
double shell_self_energy(double m, double r);

// <G * shell, c * Leb restricted to Q>: c m/(4 pi) times the cube integral of
// 1/max(|y - center|, r), by stratified Monte Carlo symmetrized over the 48
// cube symmetries (estimates for symmetry-related centers agree exactly).
// stderr_out (optional) receives the standard error.
double shell_cube_energy(const std::array<double, 3>& center, double r,
                         double m, double c, int samples, uint64_t seed,
                         double* stderr_out = nullptr);

// c^2/(4 pi) times the double cube integral of 1/|x-y|, antithetic-paired
// Monte Carlo; cached per (samples, seed)
double cube_self_energy(double c, int samples, uint64_t seed,
                        double* stderr_out = nullptr);

// Full energy E_N of the signed measure (shell lattice) - (uniform cube of
// equal mass). samples = Monte-Carlo samples per shell for the shell-cube
// term.
EnergyBreakdown h1_energy(const ShellLattice& lat, int samples, uint64_t seed);

// |integral of a quadratic polynomial against (mu_N - mu)|, both sides in
// closed form. Coefficients: value = c0 + g.x + x^T H x (H symmetric 3x3).
struct QuadraticPoly {
  double c0;
  std::array<double, 3> g;
  std::array<std::array<double, 3>, 3> H;
};
double narrow_convergence_check(const ShellLattice& lat,
                                const QuadraticPoly& p);

struct RiemannSumCheck {
  double sum;       // (1/N^3) sum over lattice points within 2 eps of the
                    // center-most one of 1/distance
  double integral;  // 2 pi (2 eps)^2
  double gap;
};
RiemannSumCheck riemann_sum_check(const ShellLattice& lat, double epsilon);

}  // namespace shapelab

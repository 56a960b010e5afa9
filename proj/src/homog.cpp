#include "shapelab/homog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include "shapelab/error.hpp"
#include "shapelab/rng.hpp"

namespace shapelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// antithetic pairs for the cube self-energy term; fixed so every sweep row
// shares one cached estimate and the term cancels consistently across N
constexpr int kCubeSelfPairs = 6'000'000;

// the six permutations of three coordinate axes
constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

// squared distance summed in sorted order: bitwise invariant under any
// relabeling or sign flip of the difference components
double sorted_dist2(double d0, double d1, double d2) {
  double q[3] = {d0 * d0, d1 * d1, d2 * d2};
  if (q[0] > q[1]) std::swap(q[0], q[1]);
  if (q[1] > q[2]) std::swap(q[1], q[2]);
  if (q[0] > q[1]) std::swap(q[0], q[1]);
  return (q[0] + q[1]) + q[2];
}

}  // namespace

ShellLattice ShellLattice::make(int N, double k) {
  if (N < 1) throw ValidationError("shell lattice needs N >= 1");
  if (!(k > 0.0)) throw ValidationError("shell lattice needs k > 0");
  ShellLattice lat;
  lat.N = N;
  lat.k = k;
  lat.r_N = k * std::pow(double(N), -1.5);
  const double n3 = double(N) * double(N) * double(N);
  // divide last so that shell_mass * N^3 reproduces the total 4 pi k^2
  // bitwise when N is a power of two
  lat.shell_mass = 4.0 * kPi * k * k / n3;
  lat.centers.reserve(std::size_t(N) * N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l)
        lat.centers.push_back({(i + 0.5) / N, (j + 0.5) / N, (l + 0.5) / N});
  return lat;
}

bool ShellLattice::separated() const { return 2.0 * r_N < 1.0 / N; }

double shell_pair_energy(double D, double m, double r) {
  if (!(r > 0.0)) throw ValidationError("shell radius must be > 0");
  if (!(D >= 0.0)) throw ValidationError("center distance must be >= 0");
  if (D >= 2.0 * r) return m * m / (4.0 * kPi * D);
  // overlapping shells: averaging the point-mass potential m/(4 pi s) over
  // the distance density s/(2 D r) on [|D - 2r|... ] collapses to a linear
  // ramp that meets the point-mass value continuously at D = 2r
  return m * m / (4.0 * kPi * r) * (1.0 - D / (4.0 * r));
}

double shell_self_energy(double m, double r) {
  if (!(r > 0.0)) throw ValidationError("shell radius must be > 0");
  return m * m / (4.0 * kPi * r);
}

double shell_cube_energy(const std::array<double, 3>& center, double r,
                         double m, double c, int samples, uint64_t seed,
                         double* stderr_out) {
  if (!(r > 0.0)) throw ValidationError("shell radius must be > 0");
  if (samples < 1) throw ValidationError("need at least one sample");

  // largest stratification grid with G^3 <= samples
  int G = std::max(1, int(std::cbrt(double(samples))));
  while ((G + 1) * (G + 1) * (G + 1) <= samples) ++G;
  while (G > 1 && G * G * G > samples) --G;
  const int n = G * G * G;

  // everything is expressed relative to the cube midpoint so the 48
  // symmetries act by exact sign flips and permutations
  const double e[3] = {center[0] - 0.5, center[1] - 0.5, center[2] - 0.5};

  SplitMix64 rng(seed);
  double sum = 0.0;
  double sumsq = 0.0;
  for (int ix = 0; ix < G; ++ix)
    for (int iy = 0; iy < G; ++iy)
      for (int iz = 0; iz < G; ++iz) {
        const double dy[3] = {(ix + rng.uniform()) / G - 0.5,
                              (iy + rng.uniform()) / G - 0.5,
                              (iz + rng.uniform()) / G - 0.5};
        double vals[48];
        int idx = 0;
        for (const auto& p : kPerm) {
          const double w0 = dy[p[0]], w1 = dy[p[1]], w2 = dy[p[2]];
          for (int mask = 0; mask < 8; ++mask) {
            const double s0 = (mask & 1) ? -w0 : w0;
            const double s1 = (mask & 2) ? -w1 : w1;
            const double s2 = (mask & 4) ? -w2 : w2;
            const double d2 = sorted_dist2(s0 - e[0], s1 - e[1], s2 - e[2]);
            vals[idx++] = 1.0 / std::max(std::sqrt(d2), r);
          }
        }
        std::sort(vals, vals + 48);
        double f = 0.0;
        for (double v : vals) f += v;
        f /= 48.0;
        sum += f;
        sumsq += f * f;
      }

  const double mean = sum / n;
  const double scale = c * m / (4.0 * kPi);
  if (stderr_out) {
    double var = 0.0;
    if (n > 1) var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1));
    *stderr_out = scale * std::sqrt(var / n);
  }
  return scale * mean;
}

double cube_self_energy(double c, int samples, uint64_t seed,
                        double* stderr_out) {
  if (samples < 1) throw ValidationError("need at least one sample");

  // the double integral of 1/|x-y| over the unit cube is expensive enough
  // (and shared widely enough) to memoize per sampling plan
  static std::mutex cache_mutex;
  static std::map<std::pair<int, uint64_t>, std::pair<double, double>> cache;

  double mean, se;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({samples, seed});
    if (it != cache.end()) {
      mean = it->second.first;
      se = it->second.second;
      if (stderr_out) *stderr_out = c * c / (4.0 * kPi) * se;
      return c * c / (4.0 * kPi) * mean;
    }
  }

  SplitMix64 rng(seed);
  double sum = 0.0;
  double sumsq = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x[3], y[3];
    for (double& v : x) v = rng.uniform();
    for (double& v : y) v = rng.uniform();
    const double d1 = std::sqrt(sorted_dist2(x[0] - y[0], x[1] - y[1],
                                             x[2] - y[2]));
    // antithetic partner: reflect y through the cube midpoint
    const double d2 = std::sqrt(sorted_dist2(x[0] - (1.0 - y[0]),
                                             x[1] - (1.0 - y[1]),
                                             x[2] - (1.0 - y[2])));
    const double f = 0.5 * (1.0 / std::max(d1, 1e-300) +
                            1.0 / std::max(d2, 1e-300));
    sum += f;
    sumsq += f * f;
  }
  mean = sum / samples;
  double var = 0.0;
  if (samples > 1)
    var = std::max(0.0, (sumsq - samples * mean * mean) / (samples - 1));
  se = std::sqrt(var / samples);

  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache[{samples, seed}] = {mean, se};
  }
  if (stderr_out) *stderr_out = c * c / (4.0 * kPi) * se;
  return c * c / (4.0 * kPi) * mean;
}

EnergyBreakdown h1_energy(const ShellLattice& lat, int samples,
                          uint64_t seed) {
  if (lat.N > 16)
    throw ValidationError(
        "h1_energy: pairwise sums are capped at N <= 16; larger lattices "
        "are only supported by the closed-form and Riemann-sum checks");
  if (samples < 1) throw ValidationError("need at least one sample");

  const int N = lat.N;
  const double m = lat.shell_mass;
  const double r = lat.r_N;
  const double n3 = double(N) * double(N) * double(N);
  const double c_total = 4.0 * kPi * lat.k * lat.k;

  EnergyBreakdown out;
  out.seed = seed;
  out.S_NN_self = n3 * shell_self_energy(m, r);

  // ordered cross pairs grouped by integer offset: (N-|a|)(N-|b|)(N-|c|)
  // ordered pairs share the offset (a, b, c)
  double cross = 0.0;
  for (int a = -(N - 1); a <= N - 1; ++a)
    for (int b = -(N - 1); b <= N - 1; ++b)
      for (int c = -(N - 1); c <= N - 1; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const double count =
            double(N - std::abs(a)) * double(N - std::abs(b)) *
            double(N - std::abs(c));
        const double D = std::sqrt(double(a) * a + double(b) * b +
                                   double(c) * c) /
                         N;
        cross += count * shell_pair_energy(D, m, r);
      }
  out.S_NN_cross = cross;

  double s_nmu = 0.0;
  double var_nmu = 0.0;
  for (std::size_t l = 0; l < lat.centers.size(); ++l) {
    double se = 0.0;
    s_nmu += shell_cube_energy(lat.centers[l], r, m, c_total, samples,
                               derive_seed(seed, uint64_t(l)), &se);
    var_nmu += se * se;
  }
  out.S_Nmu = s_nmu;

  double se_mumu = 0.0;
  out.S_mumu = cube_self_energy(c_total, kCubeSelfPairs,
                                derive_seed(seed, 0x6d756d75u), &se_mumu);

  out.E_N = out.S_NN_self + out.S_NN_cross - 2.0 * out.S_Nmu + out.S_mumu;
  out.mc_stderr = std::sqrt(4.0 * var_nmu + se_mumu * se_mumu);
  return out;
}

double narrow_convergence_check(const ShellLattice& lat,
                                const QuadraticPoly& p) {
  const int N = lat.N;
  const double n3 = double(N) * double(N) * double(N);
  const double r = lat.r_N;
  const double c_total = 4.0 * kPi * lat.k * lat.k;

  // the sphere average of a quadratic at center x is p(x) + r^2/3 tr H, so
  // the lattice side reduces to a plain sum of point evaluations
  double tr_h = p.H[0][0] + p.H[1][1] + p.H[2][2];
  double sum_p = 0.0;
  for (const auto& x : lat.centers) {
    double quad = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) quad += p.H[i][j] * x[i] * x[j];
    sum_p += p.c0 + (p.g[0] * x[0] + p.g[1] * x[1] + p.g[2] * x[2]) + quad;
  }
  const double lattice_side =
      lat.shell_mass * (sum_p + n3 * (r * r / 3.0) * tr_h);

  // cube moments: int x_i = 1/2, int x_i^2 = 1/3, int x_i x_j = 1/4 (i != j)
  double off_diag = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) off_diag += p.H[i][j];
  const double cube_side =
      c_total * (p.c0 + 0.5 * (p.g[0] + p.g[1] + p.g[2]) +
                 (p.H[0][0] + p.H[1][1] + p.H[2][2]) / 3.0 +
                 0.25 * off_diag);

  return std::abs(lattice_side - cube_side);
}

RiemannSumCheck riemann_sum_check(const ShellLattice& lat, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ValidationError("riemann_sum_check needs 0 < epsilon < 1/2");
  const int N = lat.N;
  const int mid = (N - 1) / 2;
  const std::size_t idx =
      (std::size_t(mid) * N + mid) * N + mid;  // center-most lattice point
  const auto& xb = lat.centers[idx];

  double sum = 0.0;
  for (std::size_t p = 0; p < lat.centers.size(); ++p) {
    if (p == idx) continue;
    const auto& x = lat.centers[p];
    const double dist = std::sqrt(sorted_dist2(x[0] - xb[0], x[1] - xb[1],
                                               x[2] - xb[2]));
    if (dist <= 2.0 * epsilon) sum += 1.0 / dist;
  }
  RiemannSumCheck out;
  out.sum = sum / (double(N) * double(N) * double(N));
  out.integral = 2.0 * kPi * (2.0 * epsilon) * (2.0 * epsilon);
  out.gap = std::abs(out.sum - out.integral);
  return out;
}

}  // namespace shapelab

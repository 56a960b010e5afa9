#include "shapelab/radial.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "shapelab/error.hpp"

namespace shapelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// value and derivative at s = r of the radial solution of
// u'' + (d-1)/s u' + lambda u = 0, u(0) = 1, u'(0) = 0,
// integrated by fixed-step RK4 from eps0 = 1e-8 r with the series start
// u = 1 - lambda s^2 / (2d), u' = -lambda s / d
void integrate_radial(double r, double lambda, int d, int steps, double& u,
                      double& du) {
  const double eps0 = 1e-8 * r;
  u = 1.0 - lambda * eps0 * eps0 / (2.0 * d);
  du = -lambda * eps0 / d;
  const double h = (r - eps0) / steps;
  const double dm1 = double(d - 1);
  auto f = [lambda, dm1](double s, double uu, double vv, double& fu,
                         double& fv) {
    fu = vv;
    fv = -dm1 / s * vv - lambda * uu;
  };
  double s = eps0;
  for (int i = 0; i < steps; ++i) {
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    f(s, u, du, k1u, k1v);
    f(s + 0.5 * h, u + 0.5 * h * k1u, du + 0.5 * h * k1v, k2u, k2v);
    f(s + 0.5 * h, u + 0.5 * h * k2u, du + 0.5 * h * k2v, k3u, k3v);
    f(s + h, u + h * k3u, du + h * k3v, k4u, k4v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    du += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    s = eps0 + (i + 1) * h;
  }
}

// u'(r) + beta u(r), or u(r) in Dirichlet mode
double boundary_functional(double r, double lambda, int d, const Beta& beta,
                           int steps) {
  double u, du;
  integrate_radial(r, lambda, d, steps, u, du);
  return beta.infinite() ? u : du + beta.value() * u;
}

// smallest root of the boundary functional in (lo, hi]: coarse scan for the
// first sign change, then bisection
double first_root(double r, int d, const Beta& beta, double lo, double hi,
                  int steps, double lambda_tol) {
  const int scan = 64;
  double prev_l = lo;
  double prev_g = boundary_functional(r, prev_l, d, beta, steps);
  double a = 0.0, b = 0.0;
  bool found = false;
  std::ostringstream scanned;
  for (int i = 1; i <= scan; ++i) {
    double l = lo + (hi - lo) * double(i) / scan;
    double g = boundary_functional(r, l, d, beta, steps);
    if (i < 8) scanned << (i > 1 ? ", " : "") << "g(" << l << ")=" << g;
    if ((prev_g < 0.0) != (g < 0.0) || g == 0.0) {
      a = prev_l;
      b = l;
      found = true;
      break;
    }
    prev_l = l;
    prev_g = g;
  }
  if (!found) {
    std::ostringstream os;
    os << "eigenvalue bracket failure on [" << lo << ", " << hi
       << "]: boundary functional does not change sign; first scanned values: "
       << scanned.str();
    throw SolverError(os.str());
  }
  double ga = boundary_functional(r, a, d, beta, steps);
  // relative floor: an absolute width below ~1e-13 |lambda| is not
  // representable for the huge eigenvalues of very small balls
  while (b - a > std::max(lambda_tol, 0.5 * (a + b) * 1e-13)) {
    double mid = 0.5 * (a + b);
    double gm = boundary_functional(r, mid, d, beta, steps);
    if ((ga < 0.0) != (gm < 0.0))
      b = mid;
    else {
      a = mid;
      ga = gm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double unit_ball_volume(int d) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  double w_odd = 2.0;        // w_1
  double w_even = kPi;       // w_2
  if (d == 1) return w_odd;
  if (d == 2) return w_even;
  double w = (d % 2 == 1) ? w_odd : w_even;
  for (int m = (d % 2 == 1) ? 3 : 4; m <= d; m += 2) {
    w *= 2.0 * kPi / double(m);
  }
  return w;
}

double unit_sphere_area(int d) { return double(d) * unit_ball_volume(d); }

double ball_radius_for_unit_volume(int d) {
  return std::pow(unit_ball_volume(d), -1.0 / double(d));
}

double torsion_ball(double r, const Beta& beta, int d) {
  if (!(r > 0.0)) throw ValidationError("ball radius must be > 0");
  if (d < 2) throw ValidationError("dimension must be >= 2");
  const double wd = unit_ball_volume(d);
  if (beta.infinite()) {
    return wd * std::pow(r, d + 2) / (double(d) * double(d + 2));
  }
  return wd / double(d) *
         (std::pow(r, d + 1) / beta.value() + std::pow(r, d + 2) / double(d + 2));
}

double torsion_ball_profile(double r, const Beta& beta, int d, double s) {
  if (!(r > 0.0)) throw ValidationError("ball radius must be > 0");
  if (!(s >= 0.0 && s <= r)) throw ValidationError("need 0 <= s <= r");
  return (r * r - s * s) / (2.0 * d) + r / (double(d) * beta.value());
}

double eig_ball(double r, const Beta& beta, int d, double tol) {
  if (!(r > 0.0)) throw ValidationError("ball radius must be > 0");
  if (d < 2) throw ValidationError("dimension must be >= 2");
  if (!(tol > 0.0)) throw ValidationError("tolerance must be > 0");

  // lambda_inf(B_r) <= d(d+2)/r^2 since lambda * torsion <= |B| (Cauchy-
  // Schwarz on the torsion function); gives a computable scan ceiling
  const double dirichlet_cap = double(d) * double(d + 2) / (r * r) * 1.000001;

  double lo, hi;
  if (beta.infinite()) {
    lo = 0.25 / (r * r);  // below lambda_inf for every d (Robin beta=1 bound)
    hi = dirichlet_cap;
  } else {
    lo = eig_ball_lower_bound(r, beta.value());
    hi = double(d) * double(d + 2) / (r * r) + 1.0;
  }

  // step halving until the eigenvalue is stable to tol; tol is absolute for
  // O(1) eigenvalues, with a relative floor near machine precision so tiny
  // balls (lambda ~ 1/r^2) terminate instead of chasing unrepresentable digits
  int steps = 256;
  double prev = first_root(r, d, beta, lo * 0.999, hi, steps, tol * 0.25);
  for (int it = 0; it < 8; ++it) {
    steps *= 2;
    double next = first_root(r, d, beta, lo * 0.999, hi, steps, tol * 0.25);
    if (std::abs(next - prev) <= 0.5 * std::max(tol, std::abs(next) * 1e-12))
      return next;
    prev = next;
  }
  throw SolverError("eig_ball: eigenvalue not stable under step halving");
}

double eig_ball_lower_bound(double r, double beta) {
  if (!(r > 0.0) || !(beta > 0.0))
    throw ValidationError("need r > 0 and beta > 0");
  return beta / (4.0 * r * (1.0 + beta * r));
}

double estimate_Cd(int d, const std::vector<std::pair<double, double>>& grid,
                   double tol) {
  if (grid.empty()) throw ValidationError("estimate_Cd needs a nonempty grid");
  double best = 0.0;
  for (const auto& [r, beta] : grid) {
    double lam = eig_ball(r, Beta(beta), d, tol);
    best = std::max(best, lam * r * (1.0 + beta * r) / beta);
  }
  return best;
}

}  // namespace shapelab

#include "shapelab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shapelab/beta.hpp"
#include "shapelab/csv.hpp"
#include "shapelab/error.hpp"
#include "shapelab/experiments.hpp"
#include "shapelab/fem.hpp"
#include "shapelab/functionals.hpp"
#include "shapelab/geometry.hpp"
#include "shapelab/homog.hpp"
#include "shapelab/radial.hpp"
#include "shapelab/svg.hpp"

namespace shapelab {

namespace {

constexpr const char* kVersion = "1.0.0";

double parse_number(const std::string& text, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size())
    throw ValidationError(std::string("cannot parse ") + what + ": '" + text +
                          "'");
  return v;
}

int parse_integer(const std::string& text, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size())
    throw ValidationError(std::string("cannot parse ") + what + ": '" + text +
                          "'");
  return int(v);
}

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SHAPELAB_OUT"); env && *env) return env;
  return ".";
}

std::string utc_stamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

// fresh timestamped name unless the user chose one
std::string output_path(const std::string& dir, const std::string& base,
                        const std::string& user_stem, const char* ext) {
  std::filesystem::create_directories(dir);
  const std::string stem =
      user_stem.empty() ? base + "-" + utc_stamp() : user_stem;
  return (std::filesystem::path(dir) / (stem + ext)).string();
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  }
};

void finish_table(ResultTable& table, const std::string& echo, double wall,
                  const std::string& path) {
  table.version = kVersion;
  table.config_echo = echo;
  table.wall_time_s = wall;
  write_text_file(path, table.to_csv());
}

std::vector<std::string> quantity_header(const std::string& param) {
  std::vector<std::string> h;
  if (!param.empty()) h.push_back(param);
  for (const char* c :
       {"domain", "beta", "q", "lambda", "torsion", "F", "solver", "mesh_h"})
    h.push_back(c);
  return h;
}

std::vector<std::string> quantity_row(const QuantityReport& r) {
  return {csv_escape(r.domain),
          r.beta.str(),
          format_float(r.q),
          format_float(r.lambda),
          format_float(r.torsion),
          format_float(r.F),
          csv_escape(r.solver),
          r.mesh_h > 0.0 ? format_float(r.mesh_h) : std::string()};
}

void write_family_svg(const FamilyResult& res, const std::string& param,
                      const std::string& path) {
  SvgSeries s;
  s.label = "F_q vs " + param;
  for (std::size_t i = 0; i < res.params.size(); ++i)
    s.points.emplace_back(res.params[i], res.reports[i].F);
  SvgGuide g;
  g.slope = res.expected_slope;
  g.label = "reference slope " + format_float(res.expected_slope);
  write_text_file(path, emit_svg({s}, {g}));
}

// shared mesh corpus for the probe subcommands: disk, unit square,
// 2 x 0.5 rectangle, 4 x 4 perforated square
std::vector<Mesh> probe_corpus(int resolution) {
  std::vector<Mesh> meshes;
  meshes.push_back(make_disk_mesh(1.0, 8 * resolution, resolution));
  meshes.push_back(make_rect_mesh(1.0, 1.0, resolution, resolution));
  meshes.push_back(
      make_rect_mesh(2.0, 0.5, 2 * resolution, std::max(1, resolution / 4)));
  meshes.push_back(
      make_perforated_square_mesh(4, 1.0, std::max(8, resolution / 2)));
  return meshes;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4)
    throw ValidationError("range must be lo:hi:geom:n or lo:hi:lin:n, got '" +
                          text + "'");
  const double lo = parse_number(parts[0], "range start");
  const double hi = parse_number(parts[1], "range end");
  const std::string& kind = parts[2];
  const int n = parse_integer(parts[3], "range count");
  if (n < 1) throw ValidationError("range needs at least one point");
  if (n == 1) return {lo};

  std::vector<double> out;
  out.reserve(n);
  if (kind == "geom") {
    if (!(lo > 0.0) || !(hi > 0.0))
      throw ValidationError("geometric range needs positive endpoints");
    for (int i = 0; i < n - 1; ++i)
      out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    out.push_back(hi);
  } else if (kind == "lin") {
    for (int i = 0; i < n - 1; ++i)
      out.push_back(lo + (hi - lo) * double(i) / (n - 1));
    out.push_back(hi);
  } else {
    throw ValidationError("range kind must be 'geom' or 'lin', got '" + kind +
                          "'");
  }
  return out;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"spectral shape functionals: Robin/Dirichlet eigenvalues, "
               "torsional rigidity, and the experiments built on them"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // ------------------------------------------------------------------ eig
  struct {
    std::string domain = "ball";
    double r = 1.0;
    std::string beta;
    int d = 2;
    double tol = 1e-10;
    std::string mesh;
    std::string out_dir, out;
  } ec;
  auto* eig = app.add_subcommand("eig", "principal eigenvalue");
  eig->add_option("--domain", ec.domain, "ball | mesh")
      ->check(CLI::IsMember({"ball", "mesh"}));
  eig->add_option("--r", ec.r, "ball radius");
  eig->add_option("--beta", ec.beta, "Robin parameter or 'inf'")->required();
  eig->add_option("--d", ec.d, "dimension (ball only)");
  eig->add_option("--tol", ec.tol, "eigenvalue tolerance");
  eig->add_option("--mesh", ec.mesh, "mesh file (domain=mesh)");
  eig->add_option("--out-dir", ec.out_dir, "output directory");
  eig->add_option("--out", ec.out, "output file stem");
  eig->callback([&] {
    Timer timer;
    const Beta beta = Beta::parse(ec.beta);
    double lambda = 0.0;
    std::string domain_id, solver;
    if (ec.domain == "ball") {
      lambda = eig_ball(ec.r, beta, ec.d, ec.tol);
      std::ostringstream os;
      os << "ball(r=" << ec.r << ",d=" << ec.d << ")";
      domain_id = os.str();
      solver = "radial";
    } else {
      if (ec.mesh.empty())
        throw ValidationError("--domain mesh requires --mesh <file>");
      const Mesh mesh = read_mesh_file(ec.mesh);
      lambda = solve_eig(assemble(mesh), beta, ec.tol).lambda;
      domain_id = "mesh:" + ec.mesh;
      solver = "fem";
    }
    std::ostringstream echo;
    echo << "eig --domain " << ec.domain;
    if (ec.domain == "ball")
      echo << " --r " << format_float(ec.r) << " --d " << ec.d;
    else
      echo << " --mesh " << ec.mesh;
    echo << " --beta " << beta.str() << " --tol " << format_float(ec.tol);

    ResultTable t;
    t.header = {"domain", "beta", "d", "tol", "solver", "lambda"};
    t.add_row({csv_escape(domain_id), beta.str(), std::to_string(ec.d),
               format_float(ec.tol), solver, format_float(lambda)});
    const std::string path =
        output_path(resolve_out_dir(ec.out_dir), "eig", ec.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    std::cout << "lambda = " << format_float(lambda) << "\n";
  });

  // -------------------------------------------------------------- torsion
  struct {
    std::string domain = "ball";
    double r = 1.0;
    std::string beta;
    int d = 2;
    double tol = 1e-12;
    std::string mesh;
    std::string out_dir, out;
  } tc;
  auto* tor = app.add_subcommand("torsion", "torsional rigidity");
  tor->add_option("--domain", tc.domain, "ball | mesh")
      ->check(CLI::IsMember({"ball", "mesh"}));
  tor->add_option("--r", tc.r, "ball radius");
  tor->add_option("--beta", tc.beta, "Robin parameter or 'inf'")->required();
  tor->add_option("--d", tc.d, "dimension (ball only)");
  tor->add_option("--tol", tc.tol, "linear solve tolerance (mesh)");
  tor->add_option("--mesh", tc.mesh, "mesh file (domain=mesh)");
  tor->add_option("--out-dir", tc.out_dir, "output directory");
  tor->add_option("--out", tc.out, "output file stem");
  tor->callback([&] {
    Timer timer;
    const Beta beta = Beta::parse(tc.beta);
    double torsion = 0.0;
    std::string domain_id, solver;
    if (tc.domain == "ball") {
      torsion = torsion_ball(tc.r, beta, tc.d);
      std::ostringstream os;
      os << "ball(r=" << tc.r << ",d=" << tc.d << ")";
      domain_id = os.str();
      solver = "radial";
    } else {
      if (tc.mesh.empty())
        throw ValidationError("--domain mesh requires --mesh <file>");
      const Mesh mesh = read_mesh_file(tc.mesh);
      torsion = solve_torsion(assemble(mesh), beta, tc.tol).T;
      domain_id = "mesh:" + tc.mesh;
      solver = "fem";
    }
    std::ostringstream echo;
    echo << "torsion --domain " << tc.domain;
    if (tc.domain == "ball")
      echo << " --r " << format_float(tc.r) << " --d " << tc.d;
    else
      echo << " --mesh " << tc.mesh;
    echo << " --beta " << beta.str() << " --tol " << format_float(tc.tol);

    ResultTable t;
    t.header = {"domain", "beta", "d", "tol", "solver", "torsion"};
    t.add_row({csv_escape(domain_id), beta.str(), std::to_string(tc.d),
               format_float(tc.tol), solver, format_float(torsion)});
    const std::string path =
        output_path(resolve_out_dir(tc.out_dir), "torsion", tc.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    std::cout << "torsion = " << format_float(torsion) << "\n";
  });

  // ----------------------------------------------------------- functional
  struct {
    std::string domain = "ball";
    double r = 1.0;
    std::string beta;
    double q = 1.0;
    int d = 2;
    double tol = 1e-10;
    std::string mesh;
    std::string out_dir, out;
  } fc;
  auto* fun = app.add_subcommand("functional",
                                 "F_q = lambda * torsion^q on one domain");
  fun->add_option("--domain", fc.domain, "ball | mesh")
      ->check(CLI::IsMember({"ball", "mesh"}));
  fun->add_option("--r", fc.r, "ball radius");
  fun->add_option("--beta", fc.beta, "Robin parameter or 'inf'")->required();
  fun->add_option("--q", fc.q, "torsion exponent")->required();
  fun->add_option("--d", fc.d, "dimension (ball only)");
  fun->add_option("--tol", fc.tol, "eigenvalue tolerance");
  fun->add_option("--mesh", fc.mesh, "mesh file (domain=mesh)");
  fun->add_option("--out-dir", fc.out_dir, "output directory");
  fun->add_option("--out", fc.out, "output file stem");
  fun->callback([&] {
    Timer timer;
    const Beta beta = Beta::parse(fc.beta);
    QuantityReport rep;
    rep.beta = beta;
    rep.q = fc.q;
    if (fc.domain == "ball") {
      rep.lambda = eig_ball(fc.r, beta, fc.d, fc.tol);
      rep.torsion = torsion_ball(fc.r, beta, fc.d);
      std::ostringstream os;
      os << "ball(r=" << fc.r << ",d=" << fc.d << ")";
      rep.domain = os.str();
      rep.solver = "radial";
    } else {
      if (fc.mesh.empty())
        throw ValidationError("--domain mesh requires --mesh <file>");
      const Mesh mesh = read_mesh_file(fc.mesh);
      const AssembledSystem sys = assemble(mesh);
      rep.lambda = solve_eig(sys, beta, fc.tol).lambda;
      rep.torsion = solve_torsion(sys, beta).T;
      rep.domain = "mesh:" + fc.mesh;
      rep.solver = "fem";
      rep.mesh_h = mesh_stats(mesh).h_max;
    }
    rep.F = F_q(rep.lambda, rep.torsion, fc.q);

    std::ostringstream echo;
    echo << "functional --domain " << fc.domain;
    if (fc.domain == "ball")
      echo << " --r " << format_float(fc.r) << " --d " << fc.d;
    else
      echo << " --mesh " << fc.mesh;
    echo << " --beta " << beta.str() << " --q " << format_float(fc.q)
         << " --tol " << format_float(fc.tol);

    ResultTable t;
    t.header = quantity_header("");
    t.add_row(quantity_row(rep));
    const std::string path =
        output_path(resolve_out_dir(fc.out_dir), "functional", fc.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    std::cout << "F = " << format_float(rep.F)
              << " (lambda = " << format_float(rep.lambda)
              << ", torsion = " << format_float(rep.torsion) << ")\n";
  });

  // ----------------------------------------------------------- experiment
  auto* exp = app.add_subcommand("experiment", "parameter sweeps");
  exp->require_subcommand(1);

  struct {
    double q = 0.5;
    int d = 2;
    std::string beta;
    std::string deltas = "1e-1:1e-3:geom:7";
    bool svg = false;
    std::string out_dir, out;
  } thc;
  auto* thr = exp->add_subcommand(
      "threshold", "one small ball plus many tiny balls, slope of F_q");
  thr->add_option("--q", thc.q, "torsion exponent")->required();
  thr->add_option("--d", thc.d, "dimension");
  thr->add_option("--beta", thc.beta, "Robin parameter or 'inf'")->required();
  thr->add_option("--deltas", thc.deltas, "lo:hi:geom:n sweep of delta");
  thr->add_flag("--svg", thc.svg, "emit a log-log plot");
  thr->add_option("--out-dir", thc.out_dir, "output directory");
  thr->add_option("--out", thc.out, "output file stem");
  thr->callback([&] {
    Timer timer;
    const Beta beta = Beta::parse(thc.beta);
    const FamilyResult res =
        threshold_family(thc.q, thc.d, beta, parse_range(thc.deltas));

    std::ostringstream echo;
    echo << "experiment threshold --q " << format_float(thc.q) << " --d "
         << thc.d << " --beta " << beta.str() << " --deltas " << thc.deltas;
    if (thc.svg) echo << " --svg";

    ResultTable t;
    t.header = quantity_header("delta");
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
      auto row = quantity_row(res.reports[i]);
      row.insert(row.begin(), format_float(res.params[i]));
      t.add_row(row);
    }
    const std::string dir = resolve_out_dir(thc.out_dir);
    const std::string path = output_path(dir, "threshold", thc.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    if (thc.svg)
      write_family_svg(res, "delta",
                       output_path(dir, "threshold", thc.out, ".svg"));
    std::cout << "slope = " << format_float(res.fit.slope) << " (expected "
              << format_float(res.expected_slope)
              << ", r2 = " << format_float(res.fit.r2) << "); wrote " << path
              << "\n";
  });

  struct {
    double q = 0.5;
    int d = 2;
    std::string beta;
    std::string epsilons = "1e-1:1e-3:geom:7";
    bool svg = false;
    std::string out_dir, out;
  } dvc;
  auto* dvg = exp->add_subcommand(
      "divergence", "many tiny balls, slope of F_q against the reference "
                    "exponent -2+2q");
  dvg->add_option("--q", dvc.q, "torsion exponent in (0,1)")->required();
  dvg->add_option("--d", dvc.d, "dimension");
  dvg->add_option("--beta", dvc.beta, "Robin parameter or 'inf'")->required();
  dvg->add_option("--epsilons", dvc.epsilons, "lo:hi:geom:n sweep of epsilon");
  dvg->add_flag("--svg", dvc.svg, "emit a log-log plot");
  dvg->add_option("--out-dir", dvc.out_dir, "output directory");
  dvg->add_option("--out", dvc.out, "output file stem");
  dvg->callback([&] {
    Timer timer;
    const Beta beta = Beta::parse(dvc.beta);
    const FamilyResult res =
        divergence_family(dvc.q, dvc.d, beta, parse_range(dvc.epsilons));

    std::ostringstream echo;
    echo << "experiment divergence --q " << format_float(dvc.q) << " --d "
         << dvc.d << " --beta " << beta.str() << " --epsilons "
         << dvc.epsilons;
    if (dvc.svg) echo << " --svg";

    ResultTable t;
    t.header = quantity_header("epsilon");
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
      auto row = quantity_row(res.reports[i]);
      row.insert(row.begin(), format_float(res.params[i]));
      t.add_row(row);
    }
    const std::string dir = resolve_out_dir(dvc.out_dir);
    const std::string path = output_path(dir, "divergence", dvc.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    if (dvc.svg)
      write_family_svg(res, "epsilon",
                       output_path(dir, "divergence", dvc.out, ".svg"));
    std::cout << "slope = " << format_float(res.fit.slope) << " (reference "
              << format_float(res.expected_slope)
              << ", r2 = " << format_float(res.fit.r2) << "); wrote " << path
              << "\n";
  });

  struct {
    double beta = 1.0;
    double k = 1.0;
    std::vector<int> Ns;
    int cell_resolution = 8;
    int jobs = 1;
    std::string out_dir, out;
  } hoc;
  auto* hom = exp->add_subcommand(
      "homogenize", "perforated squares with shrinking holes");
  hom->add_option("--beta", hoc.beta, "Robin parameter (finite)");
  hom->add_option("--k", hoc.k, "hole size parameter");
  hom->add_option("--Ns", hoc.Ns, "lattice sizes")->delimiter(',');
  hom->add_option("--cell-resolution", hoc.cell_resolution,
                  "mesh resolution per cell");
  hom->add_option("--jobs", hoc.jobs, "worker threads (1 = serial)");
  hom->add_option("--out-dir", hoc.out_dir, "output directory");
  hom->add_option("--out", hoc.out, "output file stem");
  hom->callback([&] {
    Timer timer;
    if (hoc.Ns.empty()) hoc.Ns = {4, 8, 12};
    const auto rows = homogenization_sweep(hoc.beta, hoc.k, hoc.Ns,
                                           hoc.cell_resolution, hoc.jobs);

    std::ostringstream echo;
    echo << "experiment homogenize --beta " << format_float(hoc.beta)
         << " --k " << format_float(hoc.k) << " --Ns ";
    for (std::size_t i = 0; i < hoc.Ns.size(); ++i)
      echo << (i ? "," : "") << hoc.Ns[i];
    echo << " --cell-resolution " << hoc.cell_resolution << " --jobs "
         << hoc.jobs;

    ResultTable t;
    t.header = {"N",         "k",         "beta",          "lambda",
                "torsion",   "F1",        "area",          "perimeter",
                "target_lambda", "target_F1"};
    for (const auto& r : rows)
      t.add_row({std::to_string(r.N), format_float(r.k), format_float(r.beta),
                 format_float(r.lambda), format_float(r.torsion),
                 format_float(r.F1), format_float(r.area),
                 format_float(r.perimeter), format_float(r.target_lambda),
                 format_float(r.target_F1)});
    const std::string path = output_path(resolve_out_dir(hoc.out_dir),
                                         "homogenize", hoc.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    const auto& last = rows.back();
    std::cout << "N = " << last.N << ": lambda = "
              << format_float(last.lambda)
              << " (target " << format_float(last.target_lambda)
              << "), F1 = " << format_float(last.F1) << " (target "
              << format_float(last.target_F1) << "); wrote " << path << "\n";
  });

  struct {
    double k = 1.0;
    std::vector<int> Ns;
    int samples = 2048;
    uint64_t seed = 42;
    bool svg = false;
    std::string out_dir, out;
  } h1c;
  auto* h1d = exp->add_subcommand(
      "h1decay", "Newtonian energy of shell lattice minus uniform cube");
  h1d->add_option("--k", h1c.k, "shell size parameter");
  h1d->add_option("--Ns", h1c.Ns, "lattice sizes (<= 16)")->delimiter(',');
  h1d->add_option("--samples", h1c.samples, "Monte-Carlo samples per shell");
  h1d->add_option("--seed", h1c.seed, "random seed");
  h1d->add_flag("--svg", h1c.svg, "emit a log-log plot of E_N");
  h1d->add_option("--out-dir", h1c.out_dir, "output directory");
  h1d->add_option("--out", h1c.out, "output file stem");
  h1d->callback([&] {
    Timer timer;
    if (h1c.Ns.empty()) h1c.Ns = {1, 2, 4, 8, 16};

    std::ostringstream echo;
    echo << "experiment h1decay --k " << format_float(h1c.k) << " --Ns ";
    for (std::size_t i = 0; i < h1c.Ns.size(); ++i)
      echo << (i ? "," : "") << h1c.Ns[i];
    echo << " --samples " << h1c.samples << " --seed " << h1c.seed;
    if (h1c.svg) echo << " --svg";

    ResultTable t;
    t.header = {"N",      "k",      "r_N",  "S_NN_self", "S_NN_cross",
                "S_Nmu",  "S_mumu", "E_N",  "mc_stderr", "seed"};
    SvgSeries series;
    series.label = "E_N";
    for (int N : h1c.Ns) {
      const ShellLattice lat = ShellLattice::make(N, h1c.k);
      const EnergyBreakdown e = h1_energy(lat, h1c.samples, h1c.seed);
      t.add_row({std::to_string(N), format_float(h1c.k), format_float(lat.r_N),
                 format_float(e.S_NN_self), format_float(e.S_NN_cross),
                 format_float(e.S_Nmu), format_float(e.S_mumu),
                 format_float(e.E_N), format_float(e.mc_stderr),
                 std::to_string(e.seed)});
      if (e.E_N > 0.0) series.points.emplace_back(double(N), e.E_N);
    }
    const std::string dir = resolve_out_dir(h1c.out_dir);
    const std::string path = output_path(dir, "h1decay", h1c.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    if (h1c.svg) {
      SvgGuide g;
      g.slope = -1.5;
      g.label = "reference slope -1.5";
      write_text_file(output_path(dir, "h1decay", h1c.out, ".svg"),
                      emit_svg({series}, {g}));
    }
    std::cout << "rows = " << t.rows.size() << ", E_N from "
              << t.rows.front()[7] << " to " << t.rows.back()[7] << "; wrote "
              << path << "\n";
  });

  struct {
    double beta = 1.0;
    int resolution = 16;
    std::string out_dir, out;
  } gnc;
  auto* gnp = exp->add_subcommand(
      "gn", "empirical trace-interpolation constant over the mesh corpus");
  gnp->add_option("--beta", gnc.beta, "Robin parameter (finite)");
  gnp->add_option("--resolution", gnc.resolution, "corpus mesh resolution");
  gnp->add_option("--out-dir", gnc.out_dir, "output directory");
  gnp->add_option("--out", gnc.out, "output file stem");
  gnp->callback([&] {
    Timer timer;
    const double R = gn_probe(probe_corpus(gnc.resolution), gnc.beta);

    std::ostringstream echo;
    echo << "experiment gn --beta " << format_float(gnc.beta)
         << " --resolution " << gnc.resolution;

    ResultTable t;
    t.header = {"beta", "resolution", "R"};
    t.add_row({format_float(gnc.beta), std::to_string(gnc.resolution),
               format_float(R)});
    const std::string path =
        output_path(resolve_out_dir(gnc.out_dir), "gn", gnc.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    std::cout << "R = " << format_float(R) << "; wrote " << path << "\n";
  });

  struct {
    double q = 0.5;
    std::string beta;
    int resolution = 16;
    std::string out_dir, out;
  } kjc;
  auto* kjp = exp->add_subcommand(
      "kj", "exploratory landscape of F_q over the corpus vs the ball");
  kjp->add_option("--q", kjc.q, "torsion exponent")->required();
  kjp->add_option("--beta", kjc.beta, "Robin parameter or 'inf'")->required();
  kjp->add_option("--resolution", kjc.resolution, "corpus mesh resolution");
  kjp->add_option("--out-dir", kjc.out_dir, "output directory");
  kjp->add_option("--out", kjc.out, "output file stem");
  kjp->callback([&] {
    Timer timer;
    const Beta beta = Beta::parse(kjc.beta);
    std::vector<DomainSpec> corpus;
    corpus.push_back(
        DomainSpec{BallSpec{ball_radius_for_unit_volume(2), 2}});
    corpus.push_back(DomainSpec{RectangleSpec{1.0, 1.0}});
    corpus.push_back(DomainSpec{RectangleSpec{2.0, 0.5}});
    corpus.push_back(DomainSpec{PerforatedSquareSpec{4, 1.0, 2}});
    const KjProbeReport rep = kj_probe(kjc.q, beta, corpus, kjc.resolution);

    std::ostringstream echo;
    echo << "experiment kj --q " << format_float(kjc.q) << " --beta "
         << beta.str() << " --resolution " << kjc.resolution;

    ResultTable t;
    t.header = {"q", "beta", "domain", "F"};
    for (const auto& e : rep.entries)
      t.add_row({format_float(kjc.q), beta.str(), csv_escape(e.domain),
                 format_float(e.F)});
    const std::string path =
        output_path(resolve_out_dir(kjc.out_dir), "kj", kjc.out, ".csv");
    finish_table(t, echo.str(), timer.seconds(), path);
    std::cout << "F_ball = " << format_float(rep.F_ball)
              << ", F_min = " << format_float(rep.F_min)
              << ", F_max = " << format_float(rep.F_max)
              << ", ball_is_min = " << (rep.ball_is_min ? 1 : 0)
              << ", ball_is_max = " << (rep.ball_is_max ? 1 : 0) << " ("
              << rep.note << "); wrote " << path << "\n";
  });

  // ----------------------------------------------------------------- mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "mesh generation and queries");
  mesh_cmd->require_subcommand(1);

  struct {
    std::string domain = "disk";
    double r = 1.0;
    int n_boundary = 64;
    int n_rings = 8;
    double w = 1.0, h = 1.0;
    int nx = 16, ny = 16;
    int N = 4;
    double k = 1.0;
    int cell_resolution = 8;
    std::string out;
  } mkc;
  auto* mk = mesh_cmd->add_subcommand("make", "generate and save a mesh");
  mk->add_option("--domain", mkc.domain, "disk | rect | perforated")
      ->check(CLI::IsMember({"disk", "rect", "perforated"}));
  mk->add_option("--r", mkc.r, "disk radius");
  mk->add_option("--n-boundary", mkc.n_boundary, "disk boundary vertices");
  mk->add_option("--n-rings", mkc.n_rings, "disk rings");
  mk->add_option("--width", mkc.w, "rectangle width");
  mk->add_option("--height", mkc.h, "rectangle height");
  mk->add_option("--nx", mkc.nx, "rectangle cells in x");
  mk->add_option("--ny", mkc.ny, "rectangle cells in y");
  mk->add_option("--N", mkc.N, "perforated lattice size");
  mk->add_option("--k", mkc.k, "perforated hole parameter");
  mk->add_option("--cell-resolution", mkc.cell_resolution,
                 "perforated resolution per cell");
  mk->add_option("--out", mkc.out, "output mesh file")->required();
  mk->callback([&] {
    Mesh mesh;
    if (mkc.domain == "disk")
      mesh = make_disk_mesh(mkc.r, mkc.n_boundary, mkc.n_rings);
    else if (mkc.domain == "rect")
      mesh = make_rect_mesh(mkc.w, mkc.h, mkc.nx, mkc.ny);
    else
      mesh = make_perforated_square_mesh(mkc.N, mkc.k, mkc.cell_resolution);
    write_mesh_file(mkc.out, mesh);
    const MeshStats s = mesh_stats(mesh);
    std::cout << "wrote " << mkc.out << " (vertices = " << mesh.vertices.size()
              << ", triangles = " << mesh.triangles.size()
              << ", h_max = " << format_float(s.h_max) << ")\n";
  });

  struct {
    std::string mesh;
  } stc;
  auto* st = mesh_cmd->add_subcommand("stats", "print mesh statistics");
  st->add_option("--mesh", stc.mesh, "mesh file")->required();
  st->callback([&] {
    const Mesh mesh = read_mesh_file(stc.mesh);
    validate_mesh(mesh);
    const MeshStats s = mesh_stats(mesh);
    std::cout << "vertices = " << mesh.vertices.size()
              << ", triangles = " << mesh.triangles.size()
              << ", area = " << format_float(s.area)
              << ", perimeter = " << format_float(s.perimeter)
              << ", h_max = " << format_float(s.h_max)
              << ", min_angle = " << format_float(s.min_angle)
              << ", euler = " << euler_characteristic(mesh) << "\n";
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace shapelab

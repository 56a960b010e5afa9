#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shapelab/beta.hpp"
#include "shapelab/cli.hpp"
#include "shapelab/csv.hpp"
#include "shapelab/error.hpp"
#include "shapelab/radial.hpp"
#include "shapelab/svg.hpp"

using namespace shapelab;

namespace {
namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "shapelab-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// the rows of a result file, with the '#' metadata comments stripped
std::string data_section(const std::string& csv) {
  std::string out;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#') out += line + "\n";
  return out;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("numeric ranges parse in both spacings") {
    const std::vector<double> geom = parse_range("1e-1:1e-3:geom:7");
    REQUIRE(geom.size() == 7);
    CHECK(geom.front() == 0.1);
    CHECK(geom.back() == 1e-3);
    for (size_t i = 1; i + 1 < geom.size(); ++i) {
      const double ratio = geom[i + 1] / geom[i];
      CHECK(ratio == doctest::Approx(geom[1] / geom[0]).epsilon(1e-12));
    }

    const std::vector<double> lin = parse_range("0:10:lin:5");
    CHECK(lin == std::vector<double>{0.0, 2.5, 5.0, 7.5, 10.0});

    CHECK(parse_range("3:9:geom:1") == std::vector<double>{3.0});

    CHECK_THROWS_AS(parse_range("2"), ValidationError);
    CHECK_THROWS_AS(parse_range("1:2:cubic:4"), ValidationError);
    CHECK_THROWS_AS(parse_range("1:2:geom:0"), ValidationError);
    CHECK_THROWS_AS(parse_range("-1:2:geom:4"), ValidationError);
    CHECK_THROWS_AS(parse_range("a:2:lin:4"), ValidationError);
  }

  TEST_CASE("float formatting round-trips every value") {
    for (double v : {1.0 / 3.0, 0.1, 2.5e-300, 1.0e300, 5.0 * std::atan(1.0),
                     -7.25, 123456789.123456789}) {
      CHECK(std::stod(format_float(v)) == v);
    }
    CHECK(format_float(0.25) == "0.25");
  }

  TEST_CASE("csv quoting follows the comma-quote-newline rule") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("ball(r=1,d=2)") == "\"ball(r=1,d=2)\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  }

  TEST_CASE("result tables carry metadata and reject ragged rows") {
    ResultTable t;
    t.header = {"a", "b"};
    t.version = "1.0.0";
    t.config_echo = "eig --domain ball";
    t.wall_time_s = 0.5;
    t.add_row({"1", "2"});
    CHECK_THROWS_AS(t.add_row({"1"}), ValidationError);
    const std::string text = t.to_csv();
    CHECK(text.find("# version: 1.0.0\n") == 0);
    CHECK(text.find("# config: eig --domain ball\n") != std::string::npos);
    CHECK(text.find("a,b\n") != std::string::npos);
    CHECK(text.find("1,2\n") != std::string::npos);
    CHECK(parse_config_echo(text) == "eig --domain ball");
    CHECK(parse_config_echo("x,y\n1,2\n").empty());
  }

  TEST_CASE("eigenvalue command writes a reproducible table") {
    const fs::path dir = fresh_dir("eig");
    const int code = run({"eig", "--domain", "ball", "--r", "1", "--beta",
                          "1", "--out-dir", dir.string(), "--out", "first"});
    CHECK(code == 0);
    const std::string csv = slurp(dir / "first.csv");

    // the reported value is the radial solver's
    const std::string data = data_section(csv);
    const size_t last_comma = data.find_last_of(',');
    const double lambda =
        std::stod(data.substr(last_comma + 1));
    CHECK(lambda == eig_ball(1.0, Beta(1.0), 2, 1e-10));

    // the config echo restates the run well enough to reproduce it
    std::vector<std::string> args = tokenize(parse_config_echo(csv));
    REQUIRE(!args.empty());
    args.insert(args.end(),
                {"--out-dir", dir.string(), "--out", "second"});
    CHECK(run(args) == 0);
    CHECK(data_section(slurp(dir / "second.csv")) == data);
  }

  TEST_CASE("torsion and functional commands agree with closed forms") {
    const fs::path dir = fresh_dir("torsion");
    CHECK(run({"torsion", "--domain", "ball", "--r", "1", "--beta", "inf",
               "--out-dir", dir.string(), "--out", "t"}) == 0);
    const std::string csv = slurp(dir / "t.csv");
    const std::string data = data_section(csv);
    const double T = std::stod(data.substr(data.find_last_of(',') + 1));
    CHECK(T == torsion_ball(1.0, Beta::dirichlet(), 2));

    CHECK(run({"functional", "--domain", "ball", "--r", "1", "--beta", "1",
               "--q", "0.5", "--out-dir", dir.string(), "--out", "f"}) == 0);
    const std::string fcsv = slurp(dir / "f.csv");
    CHECK(fcsv.find("\"ball(r=1,d=2)\"") != std::string::npos);
    CHECK(fcsv.find("radial") != std::string::npos);
  }

  TEST_CASE("mesh files flow between the make, stats, and solve commands") {
    const fs::path dir = fresh_dir("mesh");
    const fs::path meshfile = dir / "perf.mesh";
    CHECK(run({"mesh", "make", "--domain", "perforated", "--N", "2", "--k",
               "0.5", "--cell-resolution", "8", "--out",
               meshfile.string()}) == 0);
    CHECK(fs::exists(meshfile));
    CHECK(run({"mesh", "stats", "--mesh", meshfile.string()}) == 0);
    CHECK(run({"eig", "--domain", "mesh", "--mesh", meshfile.string(),
               "--beta", "1", "--out-dir", dir.string(), "--out", "m"}) == 0);
    const std::string csv = slurp(dir / "m.csv");
    CHECK(csv.find("fem") != std::string::npos);
  }

  TEST_CASE("experiment subcommands emit csv and svg artifacts") {
    const fs::path dir = fresh_dir("exp");
    CHECK(run({"experiment", "threshold", "--q", "0.5", "--beta", "1",
               "--deltas", "1e-1:1e-2:geom:4", "--svg", "--out-dir",
               dir.string(), "--out", "th"}) == 0);
    const std::string csv = slurp(dir / "th.csv");
    CHECK(csv.find("delta") != std::string::npos);
    CHECK(parse_config_echo(csv).find("--deltas 1e-1:1e-2:geom:4") !=
          std::string::npos);
    const std::string svg = slurp(dir / "th.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    CHECK(run({"experiment", "h1decay", "--k", "0.5", "--Ns", "1,2",
               "--samples", "256", "--seed", "7", "--out-dir", dir.string(),
               "--out", "h1"}) == 0);
    const std::string h1 = slurp(dir / "h1.csv");
    CHECK(h1.find("S_NN_self") != std::string::npos);
    CHECK(data_section(h1).find("nan") == std::string::npos);
  }

  TEST_CASE("bad inputs exit 1 without touching the filesystem") {
    const fs::path dir = fresh_dir("bad");
    CHECK(run({"eig", "--domain", "ball", "--r", "-3", "--beta", "1",
               "--out-dir", dir.string()}) == 1);
    CHECK(run({"eig", "--domain", "ball", "--r", "1", "--beta", "-2",
               "--out-dir", dir.string()}) == 1);
    CHECK(run({"eig", "--domain", "ball", "--r", "1", "--beta", "nonsense",
               "--out-dir", dir.string()}) == 1);
    CHECK(run({"mesh", "stats", "--mesh", (dir / "missing.mesh").string()}) ==
          1);
    CHECK(run({"no-such-command"}) == 1);
    CHECK(run({"experiment", "threshold", "--q", "0.5", "--beta", "1",
               "--deltas", "1e-1:1e-3:warp:7", "--out-dir", dir.string()}) ==
          1);
    CHECK(fs::is_empty(dir));
  }

  TEST_CASE("svg scatter plots are deterministic and validated") {
    SvgSeries s;
    s.points = {{1e-3, 2.0}, {1e-2, 4.1}, {1e-1, 8.3}};
    s.label = "family";
    SvgGuide g{1.0, "slope 1"};
    const std::string one = emit_svg({s}, {g});
    const std::string two = emit_svg({s}, {g});
    CHECK(one == two);
    CHECK(one.rfind("<svg", 0) == 0);
    CHECK(one.find("family") != std::string::npos);

    CHECK(!emit_svg({s}, {}).empty());          // guides optional
    SvgSeries unlabeled = s;
    unlabeled.label.clear();
    CHECK(!emit_svg({unlabeled}, {}).empty());  // labels optional

    CHECK_THROWS_AS(emit_svg({}, {}), ValidationError);
    SvgSeries negative;
    negative.points = {{1.0, -2.0}, {2.0, 1.0}};
    CHECK_THROWS_AS(emit_svg({negative}, {}), ValidationError);
  }
}

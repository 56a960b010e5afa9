#include "shapelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "shapelab/error.hpp"

namespace shapelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double signed_area(const Mesh& m, const std::array<int, 3>& t) {
  const auto& p0 = m.vertices[t[0]];
  const auto& p1 = m.vertices[t[1]];
  const auto& p2 = m.vertices[t[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double edge_len(const Mesh& m, int a, int b) {
  double dx = m.vertices[a][0] - m.vertices[b][0];
  double dy = m.vertices[a][1] - m.vertices[b][1];
  return std::sqrt(dx * dx + dy * dy);
}

double triangle_min_angle_deg(const Mesh& m, const std::array<int, 3>& t) {
  double best = 180.0;
  for (int i = 0; i < 3; ++i) {
    const auto& a = m.vertices[t[i]];
    const auto& b = m.vertices[t[(i + 1) % 3]];
    const auto& c = m.vertices[t[(i + 2) % 3]];
    double ux = b[0] - a[0], uy = b[1] - a[1];
    double vx = c[0] - a[0], vy = c[1] - a[1];
    double nu = std::sqrt(ux * ux + uy * uy);
    double nv = std::sqrt(vx * vx + vy * vy);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    double cosang = std::clamp((ux * vx + uy * vy) / (nu * nv), -1.0, 1.0);
    best = std::min(best, std::acos(cosang) * 180.0 / kPi);
  }
  return best;
}

void check_min_angle(const Mesh& m, const char* what) {
  double worst = 180.0;
  size_t worst_idx = 0;
  for (size_t i = 0; i < m.triangles.size(); ++i) {
    double a = triangle_min_angle_deg(m, m.triangles[i]);
    if (a < worst) {
      worst = a;
      worst_idx = i;
    }
  }
  if (worst < 20.0) {
    std::ostringstream os;
    os << what << ": triangle " << worst_idx << " has minimum angle " << worst
       << " deg (< 20)";
    throw ValidationError(os.str());
  }
}

// merge two concentric vertex rings (indices ordered CCW by angle) into
// triangles; handles unequal counts
void zipper(Mesh& mesh, const std::vector<int>& inner,
            const std::vector<int>& outer) {
  const size_t ci = inner.size(), co = outer.size();
  size_t i = 0, j = 0;
  const double inf = std::numeric_limits<double>::infinity();
  while (i < ci || j < co) {
    double next_in = i < ci ? 2.0 * kPi * double(i + 1) / double(ci) : inf;
    double next_out = j < co ? 2.0 * kPi * double(j + 1) / double(co) : inf;
    if (next_in <= next_out) {
      mesh.triangles.push_back({inner[i % ci], outer[j % co],
                                inner[(i + 1) % ci]});
      ++i;
    } else {
      mesh.triangles.push_back({inner[i % ci], outer[j % co],
                                outer[(j + 1) % co]});
      ++j;
    }
  }
}

}  // namespace

std::string DomainSpec::label() const {
  struct V {
    std::string operator()(const BallSpec& b) const {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "ball(r=%g,d=%d)", b.radius, b.dim);
      return buf;
    }
    std::string operator()(const RectangleSpec& r) const {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "rect(%gx%g)", r.width, r.height);
      return buf;
    }
    std::string operator()(const DisjointUnionSpec& u) const {
      std::string s = "union(";
      for (size_t i = 0; i < u.parts.size(); ++i) {
        if (i) s += ",";
        s += u.parts[i].label();
      }
      return s + ")";
    }
    std::string operator()(const PerforatedSquareSpec& p) const {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "perforated(N=%d,k=%g,d=%d)", p.N, p.k,
                    p.dim);
      return buf;
    }
  };
  return std::visit(V{}, v);
}

void validate_domain(const DomainSpec& spec) {
  struct V {
    void operator()(const BallSpec& b) const {
      if (!(b.radius > 0.0)) throw ValidationError("ball radius must be > 0");
      if (b.dim < 2) throw ValidationError("ball dimension must be >= 2");
    }
    void operator()(const RectangleSpec& r) const {
      if (!(r.width > 0.0) || !(r.height > 0.0))
        throw ValidationError("rectangle sides must be > 0");
    }
    void operator()(const DisjointUnionSpec& u) const {
      if (u.parts.empty()) throw ValidationError("empty disjoint union");
      for (const auto& p : u.parts) validate_domain(p);
    }
    void operator()(const PerforatedSquareSpec& p) const {
      hole_radius(p.N, p.k, p.dim);  // throws on overlap
    }
  };
  std::visit(V{}, spec.v);
}

double hole_radius(int N, double k, int d) {
  if (N < 1) throw ValidationError("N must be >= 1");
  if (!(k > 0.0)) throw ValidationError("k must be > 0");
  if (d < 2) throw ValidationError("d must be >= 2");
  double r = k * std::pow(double(N), -double(d) / double(d - 1));
  if (2.0 * r >= 1.0 / double(N)) {
    std::ostringstream os;
    os << "holes touch their cell boundary: 2 r_N = " << 2.0 * r
       << " >= 1/N = " << 1.0 / double(N) << " (N=" << N << ", k=" << k
       << ", d=" << d << ")";
    throw ValidationError(os.str());
  }
  return r;
}

Mesh make_disk_mesh(double radius, int n_boundary, int n_rings) {
  if (!(radius > 0.0)) throw ValidationError("disk radius must be > 0");
  if (n_boundary < 8) throw ValidationError("n_boundary must be >= 8");
  if (n_rings < 2) throw ValidationError("n_rings must be >= 2");

  Mesh mesh;
  mesh.vertices.push_back({0.0, 0.0});

  // ring vertex counts grow roughly linearly with radius, floored so the
  // innermost fan keeps fat triangles
  std::vector<int> counts(n_rings + 1, 0);
  int floor_count = std::min(8, n_boundary);
  for (int i = 1; i <= n_rings; ++i) {
    int c = (int)std::llround(double(n_boundary) * double(i) /
                              double(n_rings));
    counts[i] = std::max({floor_count, c, counts[i - 1]});
  }
  counts[n_rings] = n_boundary;

  std::vector<std::vector<int>> rings(n_rings + 1);
  for (int i = 1; i <= n_rings; ++i) {
    double r = radius * double(i) / double(n_rings);
    rings[i].reserve(counts[i]);
    for (int j = 0; j < counts[i]; ++j) {
      double ang = 2.0 * kPi * double(j) / double(counts[i]);
      rings[i].push_back((int)mesh.vertices.size());
      mesh.vertices.push_back({r * std::cos(ang), r * std::sin(ang)});
    }
  }

  for (int j = 0; j < counts[1]; ++j) {
    mesh.triangles.push_back({0, rings[1][j], rings[1][(j + 1) % counts[1]]});
  }
  for (int i = 1; i < n_rings; ++i) zipper(mesh, rings[i], rings[i + 1]);

  const auto& outer = rings[n_rings];
  for (int j = 0; j < n_boundary; ++j) {
    mesh.boundary_edges.push_back({outer[j], outer[(j + 1) % n_boundary], 0});
  }

  check_min_angle(mesh, "make_disk_mesh");
  return mesh;
}

Mesh make_rect_mesh(double width, double height, int nx, int ny) {
  if (!(width > 0.0) || !(height > 0.0))
    throw ValidationError("rectangle sides must be > 0");
  if (nx < 1 || ny < 1) throw ValidationError("nx, ny must be >= 1");

  Mesh mesh;
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.vertices.push_back(
          {width * double(i) / double(nx), height * double(j) / double(ny)});
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j);
      int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      } else {
        mesh.triangles.push_back({v00, v10, v01});
        mesh.triangles.push_back({v10, v11, v01});
      }
    }
  }
  for (int i = 0; i < nx; ++i)
    mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), 0});
  for (int j = 0; j < ny; ++j)
    mesh.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), 0});
  for (int i = nx; i > 0; --i)
    mesh.boundary_edges.push_back({vid(i, ny), vid(i - 1, ny), 0});
  for (int j = ny; j > 0; --j)
    mesh.boundary_edges.push_back({vid(0, j), vid(0, j - 1), 0});

  check_min_angle(mesh, "make_rect_mesh");
  return mesh;
}

Mesh make_perforated_square_mesh(int N, double k, int cell_resolution) {
  if (cell_resolution < 8)
    throw ValidationError("cell_resolution must be >= 8");
  const double r_hole = hole_radius(N, k, 2);  // throws on overlap

  // ring point count, rounded up so the cell corners are ring points
  const int M4 = (cell_resolution + 3) / 4;
  const int M = 4 * M4;

  // radial layers: geometric grading from the hole to the cell boundary so
  // the first layer matches the hole's angular spacing even for tiny holes
  const double rho_max = std::sqrt(2.0) / (2.0 * double(N));
  const int n_r = std::max(
      2, (int)std::ceil(double(M) * std::log(rho_max / r_hole) / (2.0 * kPi)));

  Mesh mesh;
  // shared cell-edge coordinates are built from integers so neighbouring
  // cells produce bitwise-identical vertices
  const double denom = double(int64_t(N) * M4);
  auto grid_coord = [denom](int64_t i) { return double(i) / denom; };

  struct Key {
    uint64_t x, y;
    bool operator==(const Key& o) const { return x == o.x && y == o.y; }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      uint64_t h = k.x * 0x9e3779b97f4a7c15ull ^ (k.y + 0x7f4a7c15ull);
      h ^= h >> 33;
      return size_t(h * 0xc2b2ae3d27d4eb4full);
    }
  };
  std::unordered_map<Key, int, KeyHash> seen;
  auto add_vertex = [&](double x, double y) {
    Key key;
    std::memcpy(&key.x, &x, 8);
    std::memcpy(&key.y, &y, 8);
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    int idx = (int)mesh.vertices.size();
    mesh.vertices.push_back({x, y});
    seen.emplace(key, idx);
    return idx;
  };

  for (int J = 0; J < N; ++J) {
    for (int I = 0; I < N; ++I) {
      const double cx = (2.0 * I + 1.0) / (2.0 * N);
      const double cy = (2.0 * J + 1.0) / (2.0 * N);

      // outer ring, CCW from the bottom-left corner of the cell
      std::vector<std::array<double, 2>> ring(M);
      for (int j = 0; j < M4; ++j) {
        ring[j] = {grid_coord(int64_t(I) * M4 + j),
                   grid_coord(int64_t(J) * M4)};
        ring[M4 + j] = {grid_coord(int64_t(I + 1) * M4),
                        grid_coord(int64_t(J) * M4 + j)};
        ring[2 * M4 + j] = {grid_coord(int64_t(I + 1) * M4 - j),
                            grid_coord(int64_t(J + 1) * M4)};
        ring[3 * M4 + j] = {grid_coord(int64_t(I) * M4),
                            grid_coord(int64_t(J + 1) * M4 - j)};
      }

      std::vector<std::vector<int>> layer(n_r + 1,
                                          std::vector<int>(M));
      for (int j = 0; j < M; ++j) {
        double dx = ring[j][0] - cx, dy = ring[j][1] - cy;
        double rho = std::sqrt(dx * dx + dy * dy);
        double ux = dx / rho, uy = dy / rho;
        for (int i = 0; i < n_r; ++i) {
          double rad =
              r_hole * std::pow(rho / r_hole, double(i) / double(n_r));
          layer[i][j] = add_vertex(cx + rad * ux, cy + rad * uy);
        }
        layer[n_r][j] = add_vertex(ring[j][0], ring[j][1]);
      }

      for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < M; ++j) {
          int jn = (j + 1) % M;
          int a = layer[i][j], b = layer[i + 1][j];
          int c = layer[i + 1][jn], d = layer[i][jn];
          // the circle-to-square blend shears quads near cell corners, so
          // pick the diagonal that maximizes the worst angle
          const double ac = std::min(triangle_min_angle_deg(mesh, {a, b, c}),
                                     triangle_min_angle_deg(mesh, {a, c, d}));
          const double bd = std::min(triangle_min_angle_deg(mesh, {a, b, d}),
                                     triangle_min_angle_deg(mesh, {b, c, d}));
          if (ac >= bd) {
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
          } else {
            mesh.triangles.push_back({a, b, d});
            mesh.triangles.push_back({b, c, d});
          }
        }
      }

      const int hole_tag = 1 + J * N + I;
      for (int j = 0; j < M; ++j) {
        mesh.boundary_edges.push_back(
            {layer[0][(j + 1) % M], layer[0][j], hole_tag});
      }
      if (J == 0)
        for (int j = 0; j < M4; ++j)
          mesh.boundary_edges.push_back(
              {layer[n_r][j], layer[n_r][j + 1], 0});
      if (I == N - 1)
        for (int j = M4; j < 2 * M4; ++j)
          mesh.boundary_edges.push_back(
              {layer[n_r][j], layer[n_r][j + 1], 0});
      if (J == N - 1)
        for (int j = 2 * M4; j < 3 * M4; ++j)
          mesh.boundary_edges.push_back(
              {layer[n_r][j], layer[n_r][j + 1], 0});
      if (I == 0)
        for (int j = 3 * M4; j < 4 * M4; ++j)
          mesh.boundary_edges.push_back(
              {layer[n_r][j], layer[n_r][(j + 1) % M], 0});
    }
  }

  check_min_angle(mesh, "make_perforated_square_mesh");
  return mesh;
}

Mesh scale_mesh(const Mesh& mesh, double t) {
  if (!(t > 0.0)) throw ValidationError("scale factor must be > 0");
  Mesh out = mesh;
  for (auto& v : out.vertices) {
    v[0] *= t;
    v[1] *= t;
  }
  return out;
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats s{0.0, 0.0, 0.0, 180.0};
  for (size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    double a = signed_area(mesh, t);
    if (!(a > 0.0)) {
      std::ostringstream os;
      os << "degenerate triangle " << i << " (signed area " << a << ")";
      throw ValidationError(os.str());
    }
    s.area += a;
    for (int e = 0; e < 3; ++e)
      s.h_max = std::max(s.h_max, edge_len(mesh, t[e], t[(e + 1) % 3]));
    s.min_angle = std::min(s.min_angle, triangle_min_angle_deg(mesh, t));
  }
  for (const auto& be : mesh.boundary_edges)
    s.perimeter += edge_len(mesh, be.a, be.b);
  return s;
}

void validate_mesh(const Mesh& mesh) {
  const int nv = (int)mesh.vertices.size();
  if (nv < 3) throw ValidationError("mesh has fewer than 3 vertices");
  for (size_t i = 0; i < mesh.triangles.size(); ++i) {
    for (int v : mesh.triangles[i]) {
      if (v < 0 || v >= nv) {
        std::ostringstream os;
        os << "triangle " << i << " references vertex " << v
           << " out of range";
        throw ValidationError(os.str());
      }
    }
    if (!(signed_area(mesh, mesh.triangles[i]) > 0.0)) {
      std::ostringstream os;
      os << "triangle " << i << " has nonpositive area";
      throw ValidationError(os.str());
    }
  }

  std::map<std::pair<int, int>, int> edge_count;
  auto canon = [](int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) edge_count[canon(t[e], t[(e + 1) % 3])]++;

  std::map<std::pair<int, int>, int> boundary_mult;
  for (const auto& be : mesh.boundary_edges) boundary_mult[canon(be.a, be.b)]++;
  for (const auto& [edge, mult] : boundary_mult) {
    if (mult != 1)
      throw ValidationError("boundary edge listed more than once");
    auto it = edge_count.find(edge);
    if (it == edge_count.end() || it->second != 1) {
      std::ostringstream os;
      os << "boundary edge (" << edge.first << "," << edge.second
         << ") not on exactly one triangle";
      throw ValidationError(os.str());
    }
  }
  for (const auto& [edge, cnt] : edge_count) {
    if (cnt > 2) throw ValidationError("edge shared by more than 2 triangles");
    if (cnt == 1 && !boundary_mult.count(edge)) {
      std::ostringstream os;
      os << "edge (" << edge.first << "," << edge.second
         << ") is on one triangle but not marked as boundary";
      throw ValidationError(os.str());
    }
  }

  // boundary edges must close up into loops: every touched vertex has
  // exactly two incident boundary edges
  std::map<int, int> bdeg;
  for (const auto& be : mesh.boundary_edges) {
    bdeg[be.a]++;
    bdeg[be.b]++;
  }
  for (const auto& [v, deg] : bdeg) {
    if (deg != 2) {
      std::ostringstream os;
      os << "boundary vertex " << v << " has degree " << deg
         << " (loops must close)";
      throw ValidationError(os.str());
    }
  }

  // duplicate vertices within 1e-12 of the mesh extent
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const auto& v : mesh.vertices) {
    lo_x = std::min(lo_x, v[0]);
    hi_x = std::max(hi_x, v[0]);
    lo_y = std::min(lo_y, v[1]);
    hi_y = std::max(hi_y, v[1]);
  }
  double tol = 1e-12 * std::max(hi_x - lo_x, hi_y - lo_y);
  std::vector<int> order(nv);
  for (int i = 0; i < nv; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return mesh.vertices[a] < mesh.vertices[b];
  });
  for (int i = 0; i + 1 < nv; ++i) {
    const auto& p = mesh.vertices[order[i]];
    const auto& q = mesh.vertices[order[i + 1]];
    if (std::abs(p[0] - q[0]) <= tol && std::abs(p[1] - q[1]) <= tol) {
      std::ostringstream os;
      os << "duplicate vertices " << order[i] << " and " << order[i + 1];
      throw ValidationError(os.str());
    }
  }
}

int euler_characteristic(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      edges[a < b ? std::make_pair(a, b) : std::make_pair(b, a)] = 1;
    }
  }
  return (int)mesh.vertices.size() - (int)edges.size() +
         (int)mesh.triangles.size();
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  char buf[80];
  out << "vertices " << mesh.vertices.size() << "\n";
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v[0], v[1]);
    out << buf;
  }
  out << "triangles " << mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles)
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "boundary " << mesh.boundary_edges.size() << "\n";
  for (const auto& be : mesh.boundary_edges)
    out << be.a << " " << be.b << " " << be.tag << "\n";
}

Mesh read_mesh(std::istream& in) {
  Mesh mesh;
  std::string word;
  size_t n = 0;
  if (!(in >> word >> n) || word != "vertices")
    throw ValidationError("mesh file: expected 'vertices <n>'");
  mesh.vertices.resize(n);
  for (auto& v : mesh.vertices)
    if (!(in >> v[0] >> v[1]))
      throw ValidationError("mesh file: truncated vertex list");
  if (!(in >> word >> n) || word != "triangles")
    throw ValidationError("mesh file: expected 'triangles <m>'");
  mesh.triangles.resize(n);
  for (auto& t : mesh.triangles)
    if (!(in >> t[0] >> t[1] >> t[2]))
      throw ValidationError("mesh file: truncated triangle list");
  if (!(in >> word >> n) || word != "boundary")
    throw ValidationError("mesh file: expected 'boundary <b>'");
  mesh.boundary_edges.resize(n);
  for (auto& be : mesh.boundary_edges)
    if (!(in >> be.a >> be.b >> be.tag))
      throw ValidationError("mesh file: truncated boundary list");
  return mesh;
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  write_mesh(out, mesh);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open for reading: " + path);
  return read_mesh(in);
}

}  // namespace shapelab

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace shapelab {

// Symbolic domain descriptions. Balls of any dimension are handled by the
// radial solvers; everything meshable is 2D.
struct BallSpec {
  double radius;
  int dim;
};

struct RectangleSpec {
  double width;
  double height;
};

struct PerforatedSquareSpec {
  int N;
  double k;
  int dim;
};

struct DomainSpec;

struct DisjointUnionSpec {
  std::vector<DomainSpec> parts;
};

struct DomainSpec {
  std::variant<BallSpec, RectangleSpec, DisjointUnionSpec,
               PerforatedSquareSpec>
      v;
  std::string label() const;
};

// throws ValidationError on bad parameters (nonpositive sizes, empty unions,
// holes touching their cell boundary)
void validate_domain(const DomainSpec& spec);

struct BoundaryEdge {
  int a;
  int b;
  int tag;  // 0 = outer boundary, >= 1 identifies a hole
};

struct Mesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW
  std::vector<BoundaryEdge> boundary_edges;
};

struct MeshStats {
  double area;
  double perimeter;
  double h_max;
  double min_angle;  // degrees
};

// r_N = k * N^{-d/(d-1)}; rejects holes that would touch the cell boundary
// (2 r_N >= 1/N).
double hole_radius(int N, double k, int d);

// Fan-plus-rings triangulation of the inscribed regular n_boundary-gon.
// Ring vertex counts grow with radius so triangles stay well shaped near the
// center.
Mesh make_disk_mesh(double radius, int n_boundary, int n_rings);

// Structured grid with alternating diagonals.
Mesh make_rect_mesh(double width, double height, int nx, int ny);

// Unit square tiled with N x N template cells, each carrying a central
// circular hole of radius hole_radius(N, k, 2) meshed by radially graded
// transfinite interpolation. Hole boundaries get per-hole tags >= 1.
Mesh make_perforated_square_mesh(int N, double k, int cell_resolution);

Mesh scale_mesh(const Mesh& mesh, double t);

MeshStats mesh_stats(const Mesh& mesh);

// structural invariants: positive triangle areas, closed boundary loops,
// every boundary edge on exactly one triangle, interior edges on exactly two,
// no duplicate vertices; throws ValidationError with a diagnostic
void validate_mesh(const Mesh& mesh);

// V - E + F for the triangulated region; equals 1 - (number of holes)
int euler_characteristic(const Mesh& mesh);

// text cache format: "vertices <n>" / "triangles <m>" / "boundary <b>"
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
void write_mesh_file(const std::string& path, const Mesh& mesh);
Mesh read_mesh_file(const std::string& path);

}  // namespace shapelab

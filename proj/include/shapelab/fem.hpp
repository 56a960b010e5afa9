#pragma once

#include <vector>

#include "shapelab/beta.hpp"
#include "shapelab/geometry.hpp"
#include "shapelab/sparse.hpp"

namespace shapelab {

struct AssembledSystem {
  SparseSymmetric A;   // stiffness, grad phi_i . grad phi_j
  SparseSymmetric M;   // interior mass
  SparseSymmetric Mb;  // boundary mass (over boundary edges)
  std::vector<double> b;  // loads, integral of phi_i
  double area;
  double perimeter;
  std::vector<int> boundary_vertices;  // sorted, for Dirichlet condensation
};

struct SpectralSolution {
  double lambda;
  std::vector<double> u;  // M-normalized, zeros on the boundary in Dirichlet
                          // mode
  double residual;        // ||(A + beta Mb) u - lambda M u||_2 with u
                          // M-normalized
  int iterations;
};

struct TorsionSolution {
  std::vector<double> w;
  double T;       // b^T w
  double energy;  // w^T (A + beta Mb) w
};

// Exact P1 element integrals (closed forms, no quadrature error):
// per-triangle stiffness e_i.e_j / (4 area), mass area/12 * (2 diag, 1 off),
// boundary-edge mass length/6 * (2 diag, 1 off), loads area/3.
AssembledSystem assemble(const Mesh& mesh);

// torsion: (A + beta Mb) w = b, Dirichlet via condensation to interior
// vertices; T = b^T w
TorsionSolution solve_torsion(const AssembledSystem& sys, const Beta& beta,
                              double tol = 1e-12);

// smallest eigenvalue of the pencil (A + beta Mb, M) by inverse power
// iteration with CG inner solves; Dirichlet mode condenses both matrices
SpectralSolution solve_eig(const AssembledSystem& sys, const Beta& beta,
                           double tol = 1e-10);

// lambda_h * T_h on one system; bounded by the mesh area up to solver error
double discrete_F1(const AssembledSystem& sys, const Beta& beta,
                   double eig_tol = 1e-10, double cg_tol = 1e-12);

}  // namespace shapelab

#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace shapelab {

// Symmetric sparse matrix in CSR with the full pattern stored (both halves).
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  // sums duplicate (i, j) contributions; keeps both triangle halves
  static SparseSymmetric from_triplets(
      int n, const std::vector<std::array<int, 2>>& idx,
      const std::vector<double>& vals);

  int n() const { return n_; }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  void multiply(const double* x, double* y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  std::vector<double> diagonal() const;

  double quadratic_form(const std::vector<double>& x) const;

  // this + c * other (patterns merged)
  SparseSymmetric plus_scaled(const SparseSymmetric& other, double c) const;

  // principal submatrix on the kept indices, in their given (sorted) order
  SparseSymmetric restrict_to(const std::vector<int>& keep) const;

  // max relative asymmetry |a_ij - a_ji| / max|a|; 0 for structurally
  // symmetric content
  double symmetry_defect() const;

 private:
  int n_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

// Jacobi-preconditioned conjugate gradients. Returns x with
// ||Kx - rhs|| / ||rhs|| <= tol; throws SolverError after 10 n iterations.
std::vector<double> cg_solve(const SparseSymmetric& K,
                             const std::vector<double>& rhs, double tol);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace shapelab

#include "shapelab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shapelab/error.hpp"

namespace shapelab {

SparseSymmetric SparseSymmetric::from_triplets(
    int n, const std::vector<std::array<int, 2>>& idx,
    const std::vector<double>& vals) {
  SparseSymmetric m;
  m.n_ = n;
  std::vector<int> order(idx.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return idx[a] < idx[b];
  });
  m.row_ptr_.assign(n + 1, 0);
  for (size_t k = 0; k < order.size();) {
    size_t j = k;
    double sum = 0.0;
    while (j < order.size() && idx[order[j]] == idx[order[k]]) {
      sum += vals[order[j]];
      ++j;
    }
    m.col_idx_.push_back(idx[order[k]][1]);
    m.values_.push_back(sum);
    m.row_ptr_[idx[order[k]][0] + 1]++;
    k = j;
  }
  for (int i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

void SparseSymmetric::multiply(const double* x, double* y) const {
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      acc += values_[p] * x[col_idx_[p]];
    y[i] = acc;
  }
}

std::vector<double> SparseSymmetric::multiply(
    const std::vector<double>& x) const {
  std::vector<double> y(n_);
  multiply(x.data(), y.data());
  return y;
}

std::vector<double> SparseSymmetric::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      if (col_idx_[p] == i) d[i] = values_[p];
  return d;
}

double SparseSymmetric::quadratic_form(const std::vector<double>& x) const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) {
    double row = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      row += values_[p] * x[col_idx_[p]];
    acc += x[i] * row;
  }
  return acc;
}

SparseSymmetric SparseSymmetric::plus_scaled(const SparseSymmetric& other,
                                             double c) const {
  SparseSymmetric m;
  m.n_ = n_;
  m.row_ptr_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) {
    int pa = row_ptr_[i], ea = row_ptr_[i + 1];
    int pb = other.row_ptr_[i], eb = other.row_ptr_[i + 1];
    while (pa < ea || pb < eb) {
      int ca = pa < ea ? col_idx_[pa] : n_;
      int cb = pb < eb ? other.col_idx_[pb] : n_;
      if (ca < cb) {
        m.col_idx_.push_back(ca);
        m.values_.push_back(values_[pa++]);
      } else if (cb < ca) {
        m.col_idx_.push_back(cb);
        m.values_.push_back(c * other.values_[pb++]);
      } else {
        m.col_idx_.push_back(ca);
        m.values_.push_back(values_[pa++] + c * other.values_[pb++]);
      }
    }
    m.row_ptr_[i + 1] = (int)m.col_idx_.size();
  }
  return m;
}

SparseSymmetric SparseSymmetric::restrict_to(
    const std::vector<int>& keep) const {
  std::vector<int> new_id(n_, -1);
  for (size_t i = 0; i < keep.size(); ++i) new_id[keep[i]] = (int)i;
  SparseSymmetric m;
  m.n_ = (int)keep.size();
  m.row_ptr_.assign(m.n_ + 1, 0);
  for (size_t i = 0; i < keep.size(); ++i) {
    int old = keep[i];
    for (int p = row_ptr_[old]; p < row_ptr_[old + 1]; ++p) {
      int c = new_id[col_idx_[p]];
      if (c >= 0) {
        m.col_idx_.push_back(c);
        m.values_.push_back(values_[p]);
      }
    }
    m.row_ptr_[i + 1] = (int)m.col_idx_.size();
  }
  return m;
}

double SparseSymmetric::symmetry_defect() const {
  double max_abs = 0.0;
  for (double v : values_) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 0.0;
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      int j = col_idx_[p];
      if (j < i) continue;
      double vji = 0.0;
      for (int q = row_ptr_[j]; q < row_ptr_[j + 1]; ++q)
        if (col_idx_[q] == i) vji = values_[q];
      worst = std::max(worst, std::abs(values_[p] - vji));
    }
  }
  return worst / max_abs;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> cg_solve(const SparseSymmetric& K,
                             const std::vector<double>& rhs, double tol) {
  const int n = K.n();
  if ((int)rhs.size() != n)
    throw ValidationError("cg_solve: rhs size mismatch");
  std::vector<double> x(n, 0.0);
  double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) return x;

  std::vector<double> diag = K.diagonal();
  for (int i = 0; i < n; ++i) {
    if (!(diag[i] > 0.0))
      throw SolverError("cg_solve: nonpositive diagonal entry");
  }

  std::vector<double> r = rhs, z(n), p(n), Kp(n);
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);
  const long cap = 10L * n;
  for (long it = 0; it < cap; ++it) {
    K.multiply(p.data(), Kp.data());
    double alpha = rz / dot(p, Kp);
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Kp[i];
    }
    if (norm2(r) / rhs_norm <= tol) return x;
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream os;
  os << "cg_solve: no convergence after " << cap
     << " iterations, residual " << norm2(r) / rhs_norm << " (tol " << tol
     << ")";
  throw SolverError(os.str());
}

}  // namespace shapelab

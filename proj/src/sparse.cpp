#include "fbn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbn {

void SparseMatrix::add(int i, int j, double v) {
  row_idx.push_back(i);
  col_idx.push_back(j);
  values.push_back(v);
}

void SparseMatrix::validate() const {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (row_idx[k] < 0 || row_idx[k] >= rows || col_idx[k] < 0 || col_idx[k] >= cols)
      throw std::runtime_error("SparseMatrix: index out of range");
    if (!std::isfinite(values[k])) throw std::runtime_error("SparseMatrix: non-finite value");
  }
  std::vector<std::pair<int, int>> keys;
  keys.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) keys.emplace_back(row_idx[k], col_idx[k]);
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
    throw std::runtime_error("SparseMatrix: duplicate (i,j) entry");
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.row_idx == b.row_idx &&
         a.col_idx == b.col_idx && a.values == b.values;
}

Vector spmv(const SparseMatrix& a, const Vector& x) {
  require_dim(x, a.cols, "spmv");
  Vector y(a.rows, 0.0);
  for (std::size_t k = 0; k < a.values.size(); ++k) y[a.row_idx[k]] += a.values[k] * x[a.col_idx[k]];
  return y;
}

Vector spmv_t(const SparseMatrix& a, const Vector& x) {
  require_dim(x, a.rows, "spmv_t");
  Vector y(a.cols, 0.0);
  for (std::size_t k = 0; k < a.values.size(); ++k) y[a.col_idx[k]] += a.values[k] * x[a.row_idx[k]];
  return y;
}

DenseMatrix to_dense(const SparseMatrix& a) {
  DenseMatrix d(a.rows, a.cols);
  for (std::size_t k = 0; k < a.values.size(); ++k) d(a.row_idx[k], a.col_idx[k]) += a.values[k];
  return d;
}

SparseMatrix from_dense(const DenseMatrix& a, double drop_tol) {
  SparseMatrix s(a.rows, a.cols);
  for (int j = 0; j < a.cols; ++j)
    for (int i = 0; i < a.rows; ++i)
      if (std::fabs(a(i, j)) > drop_tol) s.add(i, j, a(i, j));
  return s;
}

}  // namespace fbn

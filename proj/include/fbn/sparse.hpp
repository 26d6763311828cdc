#pragma once

#include "fbn/core.hpp"
#include "fbn/dense.hpp"

namespace fbn {

/// Triplet-form sparse matrix. Kept minimal: problem generators and the
/// MatrixMarket reader produce it, consumers either iterate the triplets
/// or convert to dense at desk scale.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_idx;
  std::vector<int> col_idx;
  std::vector<double> values;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c) {}

  void add(int i, int j, double v);
  std::size_t nnz() const { return values.size(); }

  /// Throws if an index is out of range or a (i,j) pair repeats.
  void validate() const;
};

bool operator==(const SparseMatrix& a, const SparseMatrix& b);

Vector spmv(const SparseMatrix& a, const Vector& x);    // a * x
Vector spmv_t(const SparseMatrix& a, const Vector& x);  // a' * x
DenseMatrix to_dense(const SparseMatrix& a);
SparseMatrix from_dense(const DenseMatrix& a, double drop_tol = 0.0);

}  // namespace fbn

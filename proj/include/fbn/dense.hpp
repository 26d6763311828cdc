#pragma once

#include "fbn/core.hpp"

namespace fbn {

/// Column-major dense matrix. Small and unencapsulated on purpose:
/// everything large in this library goes through matrix-free operators,
/// dense storage only appears at desk scale.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * std::size_t(c), 0.0) {}

  double& operator()(int i, int j) { return data[std::size_t(j) * rows + i]; }
  double operator()(int i, int j) const { return data[std::size_t(j) * rows + i]; }

  static DenseMatrix identity(int n);
};

bool operator==(const DenseMatrix& a, const DenseMatrix& b);

Vector matvec(const DenseMatrix& a, const Vector& x);    // a * x
Vector matvec_t(const DenseMatrix& a, const Vector& x);  // a' * x
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix symmetrized(const DenseMatrix& a);  // (a + a')/2
DenseMatrix mat_add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix mat_sub(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix mat_scaled(const DenseMatrix& a, double alpha);
double frob_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
/// Frobenius inner product <a, b>.
double frob_dot(const DenseMatrix& a, const DenseMatrix& b);

/// Column stacking vec(X) and its inverse.
Vector mat_to_vec(const DenseMatrix& a);
DenseMatrix vec_to_mat(const Vector& v, int rows, int cols);

/// Lower Cholesky factor of a symmetric positive definite matrix.
/// Throws std::runtime_error if the matrix is not (numerically) PD.
DenseMatrix cholesky(const DenseMatrix& a);
/// Solve a x = b given the lower factor of a.
Vector cholesky_solve(const DenseMatrix& lower, const Vector& b);

/// Thin Householder QR of an m-by-k matrix with m >= k and full column
/// rank: a = q r with q m-by-k (orthonormal columns) and r k-by-k upper
/// triangular. Throws on rank deficiency.
struct ThinQR {
  DenseMatrix q;
  DenseMatrix r;
};
ThinQR thin_qr(const DenseMatrix& a);

Vector solve_upper(const DenseMatrix& r, const Vector& b);    // r x = b
Vector solve_upper_t(const DenseMatrix& r, const Vector& b);  // r' x = b

}  // namespace fbn

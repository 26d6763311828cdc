#include "fbn/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace fbn {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

Vector matvec(const DenseMatrix& a, const Vector& x) {
  require_dim(x, a.cols, "matvec");
  Vector y(a.rows, 0.0);
  for (int j = 0; j < a.cols; ++j) {
    double xj = x[j];
    const double* col = &a.data[std::size_t(j) * a.rows];
    for (int i = 0; i < a.rows; ++i) y[i] += col[i] * xj;
  }
  return y;
}

Vector matvec_t(const DenseMatrix& a, const Vector& x) {
  require_dim(x, a.rows, "matvec_t");
  Vector y(a.cols, 0.0);
  for (int j = 0; j < a.cols; ++j) {
    const double* col = &a.data[std::size_t(j) * a.rows];
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i) s += col[i] * x[i];
    y[j] = s;
  }
  return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
  DenseMatrix c(a.rows, b.cols);
  for (int j = 0; j < b.cols; ++j) {
    const double* bcol = &b.data[std::size_t(j) * b.rows];
    double* ccol = &c.data[std::size_t(j) * c.rows];
    for (int k = 0; k < a.cols; ++k) {
      double bkj = bcol[k];
      if (bkj == 0.0) continue;
      const double* acol = &a.data[std::size_t(k) * a.rows];
      for (int i = 0; i < a.rows; ++i) ccol[i] += acol[i] * bkj;
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (int j = 0; j < a.cols; ++j)
    for (int i = 0; i < a.rows; ++i) t(j, i) = a(i, j);
  return t;
}

DenseMatrix symmetrized(const DenseMatrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("symmetrized: matrix not square");
  DenseMatrix s(a.rows, a.cols);
  for (int j = 0; j < a.cols; ++j)
    for (int i = 0; i < a.rows; ++i) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

DenseMatrix mat_add(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("mat_add: shape mismatch");
  DenseMatrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) c.data[i] = a.data[i] + b.data[i];
  return c;
}

DenseMatrix mat_sub(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("mat_sub: shape mismatch");
  DenseMatrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) c.data[i] = a.data[i] - b.data[i];
  return c;
}

DenseMatrix mat_scaled(const DenseMatrix& a, double alpha) {
  DenseMatrix c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) c.data[i] = alpha * a.data[i];
  return c;
}

double frob_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

double frob_dot(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("frob_dot: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

Vector mat_to_vec(const DenseMatrix& a) { return a.data; }

DenseMatrix vec_to_mat(const Vector& v, int rows, int cols) {
  if (v.size() != std::size_t(rows) * std::size_t(cols))
    throw std::invalid_argument("vec_to_mat: size mismatch");
  DenseMatrix m(rows, cols);
  m.data = v;
  return m;
}

DenseMatrix cholesky(const DenseMatrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("cholesky: matrix not square");
  int n = a.rows;
  DenseMatrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0 || !std::isfinite(d)) throw std::runtime_error("cholesky: matrix not positive definite");
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Vector cholesky_solve(const DenseMatrix& lower, const Vector& b) {
  int n = lower.rows;
  require_dim(b, n, "cholesky_solve");
  Vector y(b);
  for (int i = 0; i < n; ++i) {  // L y = b
    double s = y[i];
    for (int k = 0; k < i; ++k) s -= lower(i, k) * y[k];
    y[i] = s / lower(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {  // L' x = y
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= lower(k, i) * y[k];
    y[i] = s / lower(i, i);
  }
  return y;
}

ThinQR thin_qr(const DenseMatrix& a) {
  int m = a.rows, k = a.cols;
  if (m < k) throw std::invalid_argument("thin_qr: requires rows >= cols");
  DenseMatrix work = a;                     // reduced in place to R with reflectors below
  std::vector<Vector> reflectors;           // Householder vectors
  reflectors.reserve(k);
  for (int j = 0; j < k; ++j) {
    double nx = 0.0;
    for (int i = j; i < m; ++i) nx += work(i, j) * work(i, j);
    nx = std::sqrt(nx);
    if (nx < 1e-13 * (1.0 + max_abs(a))) throw std::runtime_error("thin_qr: rank deficient input");
    double alpha = work(j, j) >= 0.0 ? -nx : nx;
    Vector v(m - j, 0.0);
    v[0] = work(j, j) - alpha;
    for (int i = j + 1; i < m; ++i) v[i - j] = work(i, j);
    double vnorm = norm2(v);
    if (vnorm > 0.0)
      for (double& e : v) e /= vnorm;
    // apply I - 2vv' to the trailing block
    for (int c = j; c < k; ++c) {
      double s = 0.0;
      for (int i = j; i < m; ++i) s += v[i - j] * work(i, c);
      s *= 2.0;
      for (int i = j; i < m; ++i) work(i, c) -= s * v[i - j];
    }
    reflectors.push_back(std::move(v));
  }
  ThinQR out;
  out.r = DenseMatrix(k, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i <= j; ++i) out.r(i, j) = work(i, j);
  // accumulate Q = H_0 ... H_{k-1} applied to the first k identity columns
  out.q = DenseMatrix(m, k);
  for (int j = 0; j < k; ++j) out.q(j, j) = 1.0;
  for (int h = k - 1; h >= 0; --h) {
    const Vector& v = reflectors[h];
    for (int c = 0; c < k; ++c) {
      double s = 0.0;
      for (int i = h; i < m; ++i) s += v[i - h] * out.q(i, c);
      s *= 2.0;
      for (int i = h; i < m; ++i) out.q(i, c) -= s * v[i - h];
    }
  }
  return out;
}

Vector solve_upper(const DenseMatrix& r, const Vector& b) {
  int n = r.rows;
  require_dim(b, n, "solve_upper");
  Vector x(b);
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= r(i, k) * x[k];
    x[i] = s / r(i, i);
  }
  return x;
}

Vector solve_upper_t(const DenseMatrix& r, const Vector& b) {
  int n = r.rows;
  require_dim(b, n, "solve_upper_t");
  Vector x(b);
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= r(k, i) * x[k];
    x[i] = s / r(i, i);
  }
  return x;
}

}  // namespace fbn

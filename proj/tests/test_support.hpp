#pragma once

#include <cmath>
#include <functional>

#include "fbn/dense.hpp"
#include "fbn/linops.hpp"

namespace fbn::test {

inline Vector random_vector(int n, Rng& rng, double scale = 1.0) {
  Vector v(n);
  for (double& e : v) e = scale * rng.gaussian();
  return v;
}

inline DenseMatrix random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  DenseMatrix m(rows, cols);
  for (double& e : m.data) e = scale * rng.gaussian();
  return m;
}

/// B'B + I: symmetric positive definite by construction.
inline DenseMatrix random_spd(int n, Rng& rng) {
  DenseMatrix b = random_matrix(n, n, rng);
  DenseMatrix s = matmul(transpose(b), b);
  for (int i = 0; i < n; ++i) s(i, i) += 1.0;
  return symmetrized(s);
}

inline DenseMatrix random_symmetric(int n, Rng& rng, double scale = 1.0) {
  return symmetrized(random_matrix(n, n, rng, scale));
}

/// Dense Gaussian elimination with partial pivoting; the direct-solve
/// oracle kept independent of the iterative solvers under test.
inline Vector gauss_solve(DenseMatrix a, Vector b) {
  int n = a.rows;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      double factor = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      b[r] -= factor * b[col];
    }
  }
  Vector x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

/// Central finite-difference gradient of a scalar function.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-5) {
  Vector g(x.size());
  Vector p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double xi = x[i];
    p[i] = xi + h;
    double fp = f(p);
    p[i] = xi - h;
    double fm = f(p);
    p[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Finite-difference Jacobian of a vector map applied to direction v:
/// central unless forward = true.
inline Vector fd_jacobian_apply(const std::function<Vector(const Vector&)>& map, const Vector& x,
                                const Vector& v, double h = 1e-6, bool forward = false) {
  Vector xp = x;
  axpy(h, v, xp);
  Vector fp = map(xp);
  if (forward) {
    Vector f0 = map(x);
    Vector out(fp.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (fp[i] - f0[i]) / h;
    return out;
  }
  Vector xm = x;
  axpy(-h, v, xm);
  Vector fm = map(xm);
  Vector out(fp.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (fp[i] - fm[i]) / (2.0 * h);
  return out;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / (1.0 + std::fabs(want));
}

inline double rel_err(const Vector& got, const Vector& want) {
  return norm2(sub(got, want)) / (1.0 + norm2(want));
}

}  // namespace fbn::test

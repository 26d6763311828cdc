#include "fbn/matrixprox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PsdConeIndicator::PsdConeIndicator(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("PsdConeIndicator: bad dimension");
}

double PsdConeIndicator::value(const Vector& x) const {
  check_point(x, "PsdConeIndicator");
  DenseMatrix m = vec_to_mat(x, n_, n_);
  double tol = feasibility_tol(x);
  if (max_abs(mat_sub(m, transpose(m))) > tol) return kInf;
  EigDecomposition eig = sym_eig(symmetrized(m));
  return eig.values.back() >= -tol ? 0.0 : kInf;
}

Vector PsdConeIndicator::prox(const Vector& x, double gamma) const {
  check_point(x, "PsdConeIndicator");
  check_gamma(gamma);
  return mat_to_vec(psd_project(symmetrized(vec_to_mat(x, n_, n_))));
}

LinOp PsdConeIndicator::jac_element(const Vector& x, double gamma) const {
  check_point(x, "PsdConeIndicator");
  check_gamma(gamma);
  auto eig = std::make_shared<EigDecomposition>(sym_eig(symmetrized(vec_to_mat(x, n_, n_))));
  int n = n_;
  return LinOp(n * n, n * n, [eig, n](const Vector& v) {
    DenseMatrix s = symmetrized(vec_to_mat(v, n, n));
    return mat_to_vec(psd_jac_apply(*eig, s));
  });
}

NuclearNorm::NuclearNorm(int rows, int cols, double lambda)
    : rows_(rows), cols_(cols), lambda_(lambda) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("NuclearNorm: bad shape");
  if (lambda <= 0.0) throw std::invalid_argument("NuclearNorm: lambda must be positive");
}

double NuclearNorm::value(const Vector& x) const {
  check_point(x, "NuclearNorm");
  SvdDecomposition dec = svd(vec_to_mat(x, rows_, cols_));
  double s = 0.0;
  for (double sv : dec.sigma) s += sv;
  return lambda_ * s;
}

Vector NuclearNorm::prox(const Vector& x, double gamma) const {
  check_point(x, "NuclearNorm");
  check_gamma(gamma);
  return mat_to_vec(nuclear_prox(vec_to_mat(x, rows_, cols_), gamma * lambda_));
}

std::pair<Vector, double> NuclearNorm::prox_and_value(const Vector& x, double gamma) const {
  check_point(x, "NuclearNorm");
  check_gamma(gamma);
  DenseMatrix m = vec_to_mat(x, rows_, cols_);
  bool flip = rows_ > cols_;
  if (flip) m = transpose(m);
  SvdDecomposition dec = svd(m);
  double t = gamma * lambda_;
  double val = 0.0;
  DenseMatrix us = dec.u;
  for (int j = 0; j < us.cols; ++j) {
    double sv = std::max(dec.sigma[j] - t, 0.0);
    val += sv;
    for (int i = 0; i < us.rows; ++i) us(i, j) *= sv;
  }
  DenseMatrix p = matmul(us, transpose(dec.v1()));
  if (flip) p = transpose(p);
  return {mat_to_vec(p), lambda_ * val};
}

LinOp NuclearNorm::jac_element(const Vector& x, double gamma) const {
  check_point(x, "NuclearNorm");
  check_gamma(gamma);
  bool flip = rows_ > cols_;
  DenseMatrix m = vec_to_mat(x, rows_, cols_);
  auto dec = std::make_shared<SvdDecomposition>(svd(flip ? transpose(m) : m));
  double t = gamma * lambda_;
  int r = rows_, c = cols_;
  return LinOp(r * c, r * c, [dec, t, r, c, flip](const Vector& v) {
    DenseMatrix h = vec_to_mat(v, r, c);
    if (flip) return mat_to_vec(transpose(nuclear_jac_apply(*dec, transpose(h), t)));
    return mat_to_vec(nuclear_jac_apply(*dec, h, t));
  });
}

}  // namespace fbn

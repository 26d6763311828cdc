#include "fbn/smooth.hpp"

#include <cmath>
#include <stdexcept>

#include "fbn/spectral.hpp"

namespace fbn {

namespace {

constexpr int kPowerIters = 300;
constexpr std::uint64_t kPowerSeed = 0x9a75u;

double softplus(double z) {
  // log(1 + e^z) without overflow
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

LinOp SmoothFunction::hessian_op(const Vector& x) const {
  require_dim(x, dim(), "hessian_op");
  return LinOp(dim(), dim(), [this, x](const Vector& v) { return hessian_vec(x, v); });
}

CurvatureBounds curvature_bounds(const SmoothFunction& f) { return f.curvature(); }

Quadratic::Quadratic(DenseMatrix q_mat, Vector q_lin)
    : mat_(symmetrized(q_mat)), lin_(std::move(q_lin)) {
  if (mat_.rows != static_cast<int>(lin_.size()))
    throw std::invalid_argument("Quadratic: dimension mismatch");
  int n = mat_.rows;
  if (n <= 500) {
    EigDecomposition eig = sym_eig(mat_);
    bounds_.L = std::max(eig.values.front(), 0.0);
    bounds_.mu = std::max(eig.values.back(), 0.0);
  } else {
    LinOp op = dense_op(mat_);
    double lmax = power_method(op, kPowerIters, kPowerSeed);
    bounds_.L = lmax;
    // lambda_min via the shifted spectrum lmax*I - Q
    LinOp shifted = add_op(scale_op(-1.0, dense_op(mat_)), scale_op(lmax, identity_op(n)));
    bounds_.mu = std::max(lmax - power_method(shifted, kPowerIters, kPowerSeed + 1), 0.0);
  }
}

Quadratic::Quadratic(DenseMatrix q_mat, Vector q_lin, CurvatureBounds known)
    : mat_(symmetrized(q_mat)), lin_(std::move(q_lin)), bounds_(known) {
  if (mat_.rows != static_cast<int>(lin_.size()))
    throw std::invalid_argument("Quadratic: dimension mismatch");
}

double Quadratic::value(const Vector& x) const {
  require_dim(x, dim(), "Quadratic::value");
  return 0.5 * dot(x, matvec(mat_, x)) + dot(lin_, x);
}

Vector Quadratic::gradient(const Vector& x) const {
  require_dim(x, dim(), "Quadratic::gradient");
  Vector g = matvec(mat_, x);
  axpy(1.0, lin_, g);
  return g;
}

Vector Quadratic::hessian_vec(const Vector& x, const Vector& v) const {
  require_dim(x, dim(), "Quadratic::hessian_vec");
  return matvec(mat_, v);
}

LeastSquares::LeastSquares(DenseMatrix a, Vector b, bool assert_full_rank)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows != static_cast<int>(b_.size()))
    throw std::invalid_argument("LeastSquares: dimension mismatch");
  LinOp gram(a_.cols, a_.cols, [this](const Vector& v) { return matvec_t(a_, matvec(a_, v)); });
  bounds_.L = power_method(gram, kPowerIters, kPowerSeed);
  bounds_.mu = 0.0;
  if (assert_full_rank && a_.rows >= a_.cols) {
    LinOp shifted = add_op(scale_op(-1.0, gram), scale_op(bounds_.L, identity_op(a_.cols)));
    bounds_.mu = std::max(bounds_.L - power_method(shifted, kPowerIters, kPowerSeed + 1), 0.0);
  }
}

double LeastSquares::value(const Vector& x) const {
  Vector r = sub(matvec(a_, x), b_);
  return 0.5 * dot(r, r);
}

Vector LeastSquares::gradient(const Vector& x) const {
  return matvec_t(a_, sub(matvec(a_, x), b_));
}

Vector LeastSquares::hessian_vec(const Vector&, const Vector& v) const {
  return matvec_t(a_, matvec(a_, v));
}

Logistic::Logistic(SparseMatrix a) : a_(std::move(a)) {
  a_.validate();
  LinOp gram(a_.cols, a_.cols, [this](const Vector& v) { return spmv_t(a_, spmv(a_, v)); });
  bounds_.L = 0.25 * power_method(gram, kPowerIters, kPowerSeed);
  bounds_.mu = 0.0;
}

Vector Logistic::margins(const Vector& x) const {
  require_dim(x, dim(), "Logistic");
  return spmv(a_, x);
}

double Logistic::value(const Vector& x) const {
  Vector z = margins(x);
  double s = 0.0;
  for (double zi : z) s += softplus(-zi);
  return s;
}

Vector Logistic::gradient(const Vector& x) const {
  Vector z = margins(x);
  for (double& zi : z) zi = sigmoid(zi) - 1.0;
  return spmv_t(a_, z);
}

Vector Logistic::hessian_vec(const Vector& x, const Vector& v) const {
  Vector z = margins(x);
  Vector av = spmv(a_, v);
  for (std::size_t i = 0; i < av.size(); ++i) {
    double s = sigmoid(z[i]);
    av[i] *= s * (1.0 - s);
  }
  return spmv_t(a_, av);
}

DualQuadratic::DualQuadratic(DenseMatrix a, DenseMatrix q_mat, Vector q_lin)
    : a_(std::move(a)), chol_(cholesky(symmetrized(q_mat))), lin_(std::move(q_lin)) {
  if (a_.cols != static_cast<int>(lin_.size()) || a_.cols != chol_.rows)
    throw std::invalid_argument("DualQuadratic: dimension mismatch");
  LinOp hess(a_.rows, a_.rows,
             [this](const Vector& v) { return matvec(a_, cholesky_solve(chol_, matvec_t(a_, v))); });
  bounds_.L = power_method(hess, kPowerIters, kPowerSeed);
  bounds_.mu = 0.0;
}

double DualQuadratic::value(const Vector& w) const {
  require_dim(w, dim(), "DualQuadratic::value");
  Vector z = matvec_t(a_, w);
  axpy(1.0, lin_, z);
  return 0.5 * dot(z, cholesky_solve(chol_, z));
}

Vector DualQuadratic::gradient(const Vector& w) const {
  require_dim(w, dim(), "DualQuadratic::gradient");
  Vector z = matvec_t(a_, w);
  axpy(1.0, lin_, z);
  return matvec(a_, cholesky_solve(chol_, z));
}

Vector DualQuadratic::hessian_vec(const Vector&, const Vector& v) const {
  return matvec(a_, cholesky_solve(chol_, matvec_t(a_, v)));
}

Vector DualQuadratic::primal_point(const Vector& w) const {
  Vector z = matvec_t(a_, w);
  axpy(1.0, lin_, z);
  return scaled(cholesky_solve(chol_, z), -1.0);
}

SelectionLeastSquares::SelectionLeastSquares(std::vector<int> indices, Vector b, int total_dim)
    : indices_(std::move(indices)), b_(std::move(b)), total_dim_(total_dim) {
  if (indices_.size() != b_.size())
    throw std::invalid_argument("SelectionLeastSquares: index/value count mismatch");
  if (indices_.empty()) throw std::invalid_argument("SelectionLeastSquares: empty selection");
  for (int idx : indices_)
    if (idx < 0 || idx >= total_dim_)
      throw std::invalid_argument("SelectionLeastSquares: index out of range");
  bounds_ = {0.0, 1.0};  // the Hessian is a 0/1 diagonal mask
}

double SelectionLeastSquares::value(const Vector& x) const {
  require_dim(x, total_dim_, "SelectionLeastSquares::value");
  double s = 0.0;
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    double r = x[indices_[j]] - b_[j];
    s += r * r;
  }
  return 0.5 * s;
}

Vector SelectionLeastSquares::gradient(const Vector& x) const {
  require_dim(x, total_dim_, "SelectionLeastSquares::gradient");
  Vector g(x.size(), 0.0);
  for (std::size_t j = 0; j < indices_.size(); ++j) g[indices_[j]] = x[indices_[j]] - b_[j];
  return g;
}

Vector SelectionLeastSquares::hessian_vec(const Vector&, const Vector& v) const {
  Vector out(v.size(), 0.0);
  for (int idx : indices_) out[idx] = v[idx];
  return out;
}

}  // namespace fbn

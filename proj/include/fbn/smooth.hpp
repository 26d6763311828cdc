#pragma once

#include <memory>

#include "fbn/dense.hpp"
#include "fbn/linops.hpp"
#include "fbn/sparse.hpp"

namespace fbn {

struct CurvatureBounds {
  double mu = 0.0;  // strong convexity modulus, >= 0
  double L = 0.0;   // gradient Lipschitz constant
};

/// Twice continuously differentiable convex function with Lipschitz
/// gradient, accessed matrix-free: value, gradient and Hessian-vector
/// products only. Implementations are immutable after construction and
/// all evaluations are re-entrant.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  virtual int dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Vector hessian_vec(const Vector& x, const Vector& v) const = 0;
  virtual CurvatureBounds curvature() const = 0;

  /// Hessian at x as a matrix-free operator (captures a copy of x).
  LinOp hessian_op(const Vector& x) const;
};

CurvatureBounds curvature_bounds(const SmoothFunction& f);

/// f(x) = 1/2 x'Qx + q'x with Q symmetric PSD. Curvature bounds are
/// exact: either supplied by the caller (generators know their spectrum)
/// or computed at construction — dense eigendecomposition up to n = 500,
/// power iteration above.
class Quadratic final : public SmoothFunction {
 public:
  Quadratic(DenseMatrix q_mat, Vector q_lin);
  Quadratic(DenseMatrix q_mat, Vector q_lin, CurvatureBounds known);
  int dim() const override { return static_cast<int>(lin_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_vec(const Vector& x, const Vector& v) const override;
  CurvatureBounds curvature() const override { return bounds_; }
  const DenseMatrix& matrix() const { return mat_; }
  const Vector& linear_term() const { return lin_; }

 private:
  DenseMatrix mat_;
  Vector lin_;
  CurvatureBounds bounds_;
};

/// f(x) = 1/2 ||Ax - b||^2; the Hessian A'A is applied matrix-free.
class LeastSquares final : public SmoothFunction {
 public:
  LeastSquares(DenseMatrix a, Vector b, bool assert_full_rank = false);
  int dim() const override { return a_.cols; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_vec(const Vector& x, const Vector& v) const override;
  CurvatureBounds curvature() const override { return bounds_; }
  const DenseMatrix& matrix() const { return a_; }
  const Vector& rhs() const { return b_; }

 private:
  DenseMatrix a_;
  Vector b_;
  CurvatureBounds bounds_;
};

/// Logistic loss sum_i log(1 + exp(-a_i'x)) over sparse rows (labels are
/// expected to be folded into the rows; the trailing column is the bias).
/// log(1+e^z) is evaluated as max(z,0) + log1p(e^-|z|) to survive large
/// margins.
class Logistic final : public SmoothFunction {
 public:
  explicit Logistic(SparseMatrix a);
  int dim() const override { return a_.cols; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_vec(const Vector& x, const Vector& v) const override;
  CurvatureBounds curvature() const override { return bounds_; }
  const SparseMatrix& features() const { return a_; }

 private:
  Vector margins(const Vector& x) const;
  SparseMatrix a_;
  CurvatureBounds bounds_;
};

/// f(w) = 1/2 (A'w + q)' Q^{-1} (A'w + q), the smooth part of the Fenchel
/// dual of a linearly constrained strongly convex QP. Q must be positive
/// definite; its Cholesky factor is computed once at construction and
/// every product with Q^{-1} is a pair of triangular solves.
class DualQuadratic final : public SmoothFunction {
 public:
  DualQuadratic(DenseMatrix a, DenseMatrix q_mat, Vector q_lin);
  int dim() const override { return a_.rows; }
  double value(const Vector& w) const override;
  Vector gradient(const Vector& w) const override;
  Vector hessian_vec(const Vector& w, const Vector& v) const override;
  CurvatureBounds curvature() const override { return bounds_; }
  /// Primal point -Q^{-1}(A'w + q) recovered from a dual iterate.
  Vector primal_point(const Vector& w) const;

 private:
  DenseMatrix a_;
  DenseMatrix chol_;
  Vector lin_;
  CurvatureBounds bounds_;
};

/// f(x) = 1/2 sum_j (x[idx_j] - b_j)^2 over vec-space coordinates: least
/// squares against a subset of entries, with an exactly diagonal Hessian
/// (0/1 mask). Used for matrix completion objectives.
class SelectionLeastSquares final : public SmoothFunction {
 public:
  SelectionLeastSquares(std::vector<int> indices, Vector b, int total_dim);
  int dim() const override { return total_dim_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_vec(const Vector& x, const Vector& v) const override;
  CurvatureBounds curvature() const override { return bounds_; }
  const std::vector<int>& indices() const { return indices_; }
  const Vector& rhs() const { return b_; }

 private:
  std::vector<int> indices_;
  Vector b_;
  int total_dim_;
  CurvatureBounds bounds_;
};

}  // namespace fbn

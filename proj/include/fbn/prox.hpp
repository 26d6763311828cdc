#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "fbn/dense.hpp"
#include "fbn/linops.hpp"

namespace fbn {

/// Proper closed convex function g accessed through its value, proximal
/// mapping and one selected element of the B-subdifferential of
/// prox_{gamma g} (as a matrix-free operator). Selected elements are
/// symmetric PSD with norm at most 1; for separable g they are diagonal.
///
/// Tie policy at points where the prox is not differentiable: the limit
/// from the inactive/thresholded side is selected (the entry 0 rather
/// than 1 wherever both are admissible). This keeps the effective Newton
/// system as small as possible.
class ProxOperator {
 public:
  virtual ~ProxOperator() = default;
  virtual int dim() const = 0;
  /// Extended-real value; indicators return 0 inside the set (with a
  /// feasibility tolerance 1e-9*(1+||x||)) and +inf outside.
  virtual double value(const Vector& x) const = 0;
  virtual Vector prox(const Vector& x, double gamma) const = 0;
  virtual LinOp jac_element(const Vector& x, double gamma) const = 0;

  /// prox together with g at the prox point. Overridden where the pair
  /// is much cheaper than two calls (spectral functions reuse one SVD).
  virtual std::pair<Vector, double> prox_and_value(const Vector& x, double gamma) const;

 protected:
  void check_point(const Vector& x, const char* where) const;
  static void check_gamma(double gamma);
};

/// g^gamma(x) = g(prox(x)) + ||prox(x)-x||^2/(2 gamma).
double moreau_envelope(const ProxOperator& g, const Vector& x, double gamma);

double feasibility_tol(const Vector& x);

/// g identically zero: prox is the identity. Handy for unconstrained
/// smooth problems going through the composite machinery.
class ZeroProx final : public ProxOperator {
 public:
  explicit ZeroProx(int n) : n_(n) {}
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  int n_;
};

/// Indicator of the box [l, u].
class BoxIndicator final : public ProxOperator {
 public:
  BoxIndicator(Vector lower, Vector upper);
  BoxIndicator(int n, double lower, double upper);
  int dim() const override { return static_cast<int>(lower_.size()); }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  Vector lower_, upper_;
};

/// Indicator of {x | Ax = b} for full-row-rank A; the pseudoinverse is
/// realized through a QR factorization of A' taken once at construction.
class AffineIndicator final : public ProxOperator {
 public:
  AffineIndicator(DenseMatrix a, Vector b);
  int dim() const override { return a_.cols; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  Vector multiplier_step(const Vector& x) const;  // A^dagger (Ax - b)
  DenseMatrix a_;
  Vector b_;
  DenseMatrix q_;  // orthonormal columns spanning range(A')
  DenseMatrix r_;
};

/// Indicator of {x | a'x <= b}.
class Halfspace final : public ProxOperator {
 public:
  Halfspace(Vector a, double b);
  int dim() const override { return static_cast<int>(a_.size()); }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  Vector a_;
  double b_;
  double a_sq_;
};

/// Indicator of the unit simplex {x >= 0, sum x = 1}. Projection by the
/// exact sort-and-scan algorithm; the Jacobian block on the inactive set
/// is applied as a rank-one correction.
class SimplexIndicator final : public ProxOperator {
 public:
  explicit SimplexIndicator(int n) : n_(n) {}
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  int n_;
};

/// Indicator of the Euclidean unit ball.
class L2BallIndicator final : public ProxOperator {
 public:
  explicit L2BallIndicator(int n) : n_(n) {}
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  int n_;
};

/// Indicator of the second-order cone {(x0, xbar) | ||xbar|| <= x0};
/// coordinate 0 is the cone axis.
class SocIndicator final : public ProxOperator {
 public:
  explicit SocIndicator(int n);
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  int n_;
};

/// g(x) = ||x||_2.
class L2Norm final : public ProxOperator {
 public:
  explicit L2Norm(int n) : n_(n) {}
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  int n_;
};

/// g(x) = lambda ||x||_1, prox is soft thresholding.
class L1Norm final : public ProxOperator {
 public:
  L1Norm(int n, double lambda);
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;
  double lambda() const { return lambda_; }

 private:
  int n_;
  double lambda_;
};

/// g(x) = lambda sum_s ||x_s||_2 over a partition of the coordinates.
class GroupL2Norm final : public ProxOperator {
 public:
  GroupL2Norm(std::vector<std::vector<int>> groups, double lambda);
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  std::vector<std::vector<int>> groups_;
  double lambda_;
  int n_;
};

/// lambda * l1 norm over all coordinates except the last (the bias term
/// of a regularized classifier is left free).
class PartialL1 final : public ProxOperator {
 public:
  PartialL1(int n, double lambda);
  int dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  int n_;
  double lambda_;
};

/// Moreau-decomposition adapter: the conjugate g* of a base function,
/// with prox_{gamma g*}(x) = x - gamma prox_{g/gamma}(x/gamma) and
/// Jacobian elements I - Q. The value of g* is exact at prox outputs
/// (through the Fenchel equality); at arbitrary points an explicit
/// value callback is used when supplied, otherwise a Fenchel lower
/// bound evaluated at prox_{g/t}(x/t) with t = 1e-10 (exact in the
/// limit t -> 0, tight for support functions).
class ConjugateProx final : public ProxOperator {
 public:
  explicit ConjugateProx(std::shared_ptr<const ProxOperator> base,
                         std::function<double(const Vector&)> value_fn = {});
  int dim() const override { return base_->dim(); }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;
  std::pair<Vector, double> prox_and_value(const Vector& x, double gamma) const override;

 private:
  std::shared_ptr<const ProxOperator> base_;
  std::function<double(const Vector&)> value_fn_;
};

std::shared_ptr<ProxOperator> conjugate(std::shared_ptr<const ProxOperator> g);
/// Support function of the box [l, u] (conjugate of its indicator).
std::shared_ptr<ProxOperator> make_box_support(Vector lower, Vector upper);
/// g(x) = max(x_1, ..., x_n) (conjugate of the unit-simplex indicator).
std::shared_ptr<ProxOperator> make_pointwise_max(int n);

}  // namespace fbn

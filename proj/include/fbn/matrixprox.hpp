#pragma once

#include "fbn/prox.hpp"
#include "fbn/spectral.hpp"

namespace fbn {

// Matrix-variable prox operators exposed over vec(X) so that the
// composite solvers stay dimension-agnostic. Jacobian elements freeze
// one decomposition at construction of the returned operator; CG then
// reuses it for every product.

/// Indicator of the positive semidefinite cone over vec(X), X n-by-n.
/// Operands of the Jacobian action are symmetrized before use.
class PsdConeIndicator final : public ProxOperator {
 public:
  explicit PsdConeIndicator(int n);
  int dim() const override { return n_ * n_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;

 private:
  int n_;
};

/// g(X) = lambda ||X||_* over vec(X), X rows-by-cols.
class NuclearNorm final : public ProxOperator {
 public:
  NuclearNorm(int rows, int cols, double lambda);
  int dim() const override { return rows_ * cols_; }
  double value(const Vector& x) const override;
  Vector prox(const Vector& x, double gamma) const override;
  LinOp jac_element(const Vector& x, double gamma) const override;
  /// Reuses the one SVD for both the prox and the value at the prox.
  std::pair<Vector, double> prox_and_value(const Vector& x, double gamma) const override;
  double lambda() const { return lambda_; }

 private:
  int rows_, cols_;
  double lambda_;
};

}  // namespace fbn

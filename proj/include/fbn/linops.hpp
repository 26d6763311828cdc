#pragma once

#include <functional>
#include <memory>

#include "fbn/core.hpp"
#include "fbn/dense.hpp"

namespace fbn {

/// Matrix-free linear operator v -> A v. Instances are immutable after
/// construction (the callable captures its state by value) and safe to
/// share across threads.
struct LinOp {
  int out_dim = 0;
  int in_dim = 0;
  std::function<Vector(const Vector&)> fn;

  LinOp() = default;
  LinOp(int out, int in, std::function<Vector(const Vector&)> f)
      : out_dim(out), in_dim(in), fn(std::move(f)) {}

  /// Apply with dimension and finiteness checks on both ends.
  Vector apply(const Vector& v) const;
  Vector operator()(const Vector& v) const { return apply(v); }
};

LinOp identity_op(int n);
LinOp diag_op(Vector d);
LinOp dense_op(DenseMatrix a);
LinOp scale_op(double alpha, LinOp a);
LinOp add_op(LinOp a, LinOp b);
LinOp compose_op(LinOp a, LinOp b);     // v -> a(b(v))
LinOp shift_op(LinOp a, double delta);  // a + delta*I

struct CGReport {
  Vector solution;
  double residual_norm = 0.0;  // ||A x - b||, recomputed from scratch
  int iterations = 0;
  bool converged = false;
};

/// Conjugate gradients on a symmetric positive semidefinite system,
/// always started from the zero vector (the truncated-Newton descent
/// guarantee b'd >= ||b||^2/||A|| needs the zero start). The recurrence
/// residual is recomputed from scratch every 50 iterations to limit
/// drift. On numerical breakdown (p'Ap <= 0, only possible from
/// round-off here) the current iterate is returned with converged=false.
CGReport cg_solve(const LinOp& a, const Vector& b, double target_residual, int max_iter);

/// Power iteration estimate of the largest eigenvalue of a symmetric PSD
/// operator. The returned Rayleigh quotient never exceeds the true
/// lambda_max. A zero operator yields 0.
double power_method(const LinOp& a, int iters, std::uint64_t seed);

}  // namespace fbn

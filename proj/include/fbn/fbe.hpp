#pragma once

#include <memory>
#include <optional>

#include "fbn/prox.hpp"
#include "fbn/smooth.hpp"

namespace fbn {

/// The unit every solver consumes: minimize F(x) = f(x) + g(x) through
/// the forward-backward envelope with step parameter gamma.
struct CompositeProblem {
  std::shared_ptr<const SmoothFunction> f;
  std::shared_ptr<const ProxOperator> g;
  double gamma = 0.0;
  std::optional<Vector> x_star;   // optional reference solution
  std::optional<double> f_star;   // optional reference optimal value

  int dim() const { return f ? f->dim() : 0; }
};

/// Assembles a problem; gamma = 0 picks 0.95/L_f from the curvature
/// bounds (the envelope needs gamma strictly below 1/L_f).
CompositeProblem make_problem(std::shared_ptr<const SmoothFunction> f,
                              std::shared_ptr<const ProxOperator> g, double gamma = 0.0);

/// One envelope evaluation. Caches the forward point T_x, the
/// forward-backward point P_x and the residual G_x so that a solver
/// iteration costs exactly one gradient and one prox; the envelope
/// gradient and the generalized Hessian are separate, lazy calls.
struct FbeEvaluation {
  Vector x;
  Vector grad_f;  // gradient of f at x
  Vector t_x;     // x - gamma grad_f
  Vector p_x;     // prox of t_x
  Vector g_x;     // (x - p_x)/gamma
  double f_x = 0.0;
  double g_px = 0.0;
  double fbe = 0.0;
  double residual_inf = 0.0;  // ||G_x||_inf
};

FbeEvaluation evaluate(const CompositeProblem& prob, const Vector& x);

/// Gradient of the envelope: (I - gamma hess f(x)) G_x; one
/// Hessian-vector product.
Vector fbe_gradient(const CompositeProblem& prob, const FbeEvaluation& eval);

/// One element of the approximate generalized Hessian of the envelope,
/// H = (1/gamma)(I - gamma hess f)(I - P (I - gamma hess f)) with P a
/// B-subdifferential element of the prox at T_x. Each product costs two
/// Hessian-vector products and one P application; the operator is
/// symmetric PSD with eigenvalues in
/// [min{(1-gamma mu)mu, (1-gamma L)L}, (1-gamma mu)/gamma].
LinOp lna_operator(const CompositeProblem& prob, const FbeEvaluation& eval);

/// F(x) = f(x) + g(x); +inf outside dom g.
double objective(const CompositeProblem& prob, const Vector& x);

/// F at the forward-backward point of an evaluation (one f value; g at
/// the prox point is already cached).
double objective_at_prox_point(const CompositeProblem& prob, const FbeEvaluation& eval);

/// Shrinks gamma geometrically until F(P_gamma(x)) <= F_gamma(x), the
/// envelope sandwich that holds for every gamma <= 1/L_f. Returns the
/// accepted gamma; throws if gamma underflows 1e-16 (f is then not a
/// Lipschitz-smooth convex function).
double gamma_backtrack(const CompositeProblem& prob, const Vector& x, double shrink);

}  // namespace fbn

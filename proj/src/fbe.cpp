#include "fbn/fbe.hpp"

#include <cmath>
#include <stdexcept>

namespace fbn {

CompositeProblem make_problem(std::shared_ptr<const SmoothFunction> f,
                              std::shared_ptr<const ProxOperator> g, double gamma) {
  if (!f || !g) throw std::invalid_argument("make_problem: null function");
  if (f->dim() != g->dim()) throw std::invalid_argument("make_problem: f and g dimensions differ");
  CompositeProblem prob;
  prob.f = std::move(f);
  prob.g = std::move(g);
  if (gamma > 0.0) {
    prob.gamma = gamma;
  } else {
    double lf = prob.f->curvature().L;
    prob.gamma = lf > 0.0 ? 0.95 / lf : 1.0;
  }
  return prob;
}

FbeEvaluation evaluate(const CompositeProblem& prob, const Vector& x) {
  if (!(prob.gamma > 0.0)) throw std::invalid_argument("evaluate: gamma must be positive");
  require_dim(x, prob.dim(), "evaluate");
  require_finite(x, "evaluate");
  const double gamma = prob.gamma;

  FbeEvaluation ev;
  ev.x = x;
  ev.f_x = prob.f->value(x);
  ev.grad_f = prob.f->gradient(x);
  ev.t_x = x;
  axpy(-gamma, ev.grad_f, ev.t_x);
  auto [p, gp] = prob.g->prox_and_value(ev.t_x, gamma);
  ev.p_x = std::move(p);
  ev.g_px = gp;
  ev.g_x.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) ev.g_x[i] = (x[i] - ev.p_x[i]) / gamma;
  ev.residual_inf = norm_inf(ev.g_x);
  ev.fbe = ev.f_x + ev.g_px - gamma * dot(ev.grad_f, ev.g_x) + 0.5 * gamma * dot(ev.g_x, ev.g_x);
  if (!std::isfinite(ev.fbe))
    throw std::runtime_error("evaluate: non-finite envelope value (gamma too large?)");
  return ev;
}

Vector fbe_gradient(const CompositeProblem& prob, const FbeEvaluation& eval) {
  Vector grad = eval.g_x;
  axpy(-prob.gamma, prob.f->hessian_vec(eval.x, eval.g_x), grad);
  return grad;
}

LinOp lna_operator(const CompositeProblem& prob, const FbeEvaluation& eval) {
  LinOp p = prob.g->jac_element(eval.t_x, prob.gamma);
  const double gamma = prob.gamma;
  auto f = prob.f;
  Vector x = eval.x;
  int n = prob.dim();
  return LinOp(n, n, [f, x, gamma, p](const Vector& v) {
    Vector u = v;
    axpy(-gamma, f->hessian_vec(x, v), u);  // (I - gamma H) v
    Vector w = sub(v, p.apply(u));          // v - P u
    Vector out = w;
    axpy(-gamma, f->hessian_vec(x, w), out);
    return scaled(out, 1.0 / gamma);        // (1/gamma)(I - gamma H) w
  });
}

double objective(const CompositeProblem& prob, const Vector& x) {
  return prob.f->value(x) + prob.g->value(x);
}

double objective_at_prox_point(const CompositeProblem& prob, const FbeEvaluation& eval) {
  return prob.f->value(eval.p_x) + eval.g_px;
}

double gamma_backtrack(const CompositeProblem& prob, const Vector& x, double shrink) {
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("gamma_backtrack: shrink must lie in (0,1)");
  CompositeProblem trial = prob;
  if (!(trial.gamma > 0.0)) throw std::invalid_argument("gamma_backtrack: gamma must be positive");
  while (true) {
    bool ok = false;
    try {
      FbeEvaluation ev = evaluate(trial, x);
      double f_p = objective_at_prox_point(trial, ev);
      ok = f_p <= ev.fbe + 1e-12 * (1.0 + std::fabs(ev.fbe));
    } catch (const std::runtime_error&) {
      ok = false;  // non-finite envelope signals gamma far too large
    }
    if (ok) return trial.gamma;
    trial.gamma *= shrink;
    if (trial.gamma < 1e-16)
      throw std::runtime_error("gamma_backtrack: gamma underflow; f is not smooth convex");
  }
}

}  // namespace fbn

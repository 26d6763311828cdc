#include "fbn/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double auto_tol(const CompositeProblem& prob, const Vector& x0) {
  return 1e-8 * (1.0 + norm_inf(prob.f->gradient(x0)));
}

CompositeProblem resolve_gamma(const CompositeProblem& prob, const SolverConfig& config,
                               const Vector& x0) {
  CompositeProblem out = prob;
  if (config.gamma > 0.0) {
    out.gamma = config.gamma;
    return out;
  }
  if (!(out.gamma > 0.0)) {
    double lf = out.f->curvature().L;
    out.gamma = lf > 0.0 ? 0.95 / lf : 1.0;
    // curvature estimates may come from power iteration; backtracking
    // certifies the envelope sandwich before the run starts
    out.gamma = gamma_backtrack(out, x0, 0.5);
  }
  return out;
}

struct RunState {
  Clock::time_point t0 = Clock::now();
  IterateTrace trace;
  bool record = false;

  void push(TraceRow row, const Vector& x) {
    row.elapsed_s = seconds_since(t0);
    trace.rows.push_back(row);
    if (record) trace.iterates.push_back(x);
  }
};

}  // namespace

void SolverConfig::validate() const {
  if (gamma < 0.0) throw std::invalid_argument("SolverConfig: gamma must be >= 0");
  if (!(sigma > 0.0 && sigma < 0.5)) throw std::invalid_argument("SolverConfig: sigma not in (0,1/2)");
  if (!(eta_bar > 0.0 && eta_bar < 1.0))
    throw std::invalid_argument("SolverConfig: eta_bar not in (0,1)");
  if (!(zeta >= 0.0 && zeta < 1.0)) throw std::invalid_argument("SolverConfig: zeta not in [0,1)");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("SolverConfig: rho not in (0,1]");
  if (newton_every < 0) throw std::invalid_argument("SolverConfig: newton_every must be >= 0");
  if (max_iter < 0) throw std::invalid_argument("SolverConfig: max_iter must be >= 0");
  if (tol < 0.0) throw std::invalid_argument("SolverConfig: tol must be >= 0");
  if (cg_max_iter < 0) throw std::invalid_argument("SolverConfig: cg_max_iter must be >= 0");
}

long IterateTrace::total_cg_iters() const {
  long total = 0;
  for (const auto& r : rows) total += r.cg_iters;
  return total;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::stalled: return "stalled";
  }
  return "unknown";
}

ArmijoResult armijo_search(const CompositeProblem& prob, const FbeEvaluation& at_x,
                           const Vector& grad_fbe, const Vector& d, double sigma) {
  ArmijoResult res;
  double dd = dot(grad_fbe, d);
  if (!(dd < 0.0)) return res;  // not a descent direction
  const double slack = 1e-13 * (1.0 + std::fabs(at_x.fbe));
  double tau = 1.0;
  for (int i = 0; i <= 60; ++i) {
    Vector x_new = at_x.x;
    axpy(tau, d, x_new);
    FbeEvaluation ev = evaluate(prob, x_new);
    if (ev.fbe <= at_x.fbe + sigma * tau * dd + slack) {
      res.tau = tau;
      res.eval = std::move(ev);
      res.ok = true;
      res.backtracks = i;
      return res;
    }
    tau *= 0.5;
  }
  return res;  // step underflow: d is numerically not a descent direction
}

namespace {

struct NewtonStep {
  Vector d;
  double delta = 0.0;
  double eta = 0.0;
  double grad_norm = 0.0;
  double dir_deriv = 0.0;
  int cg_iters = 0;
};

NewtonStep newton_direction(const CompositeProblem& prob, const SolverConfig& config,
                            const FbeEvaluation& ev, const Vector& grad) {
  NewtonStep st;
  st.grad_norm = norm2(grad);
  st.delta = config.zeta * st.grad_norm;
  st.eta = std::min(config.eta_bar, std::pow(st.grad_norm, config.rho));
  LinOp h = lna_operator(prob, ev);
  LinOp sys = st.delta > 0.0 ? shift_op(std::move(h), st.delta) : std::move(h);
  int cg_max = config.cg_max_iter > 0 ? config.cg_max_iter : prob.dim();
  CGReport cg = cg_solve(sys, scaled(grad, -1.0), st.eta * st.grad_norm, cg_max);
  st.cg_iters = cg.iterations;
  st.d = std::move(cg.solution);
  st.dir_deriv = dot(grad, st.d);
  if (!all_finite(st.d) || !(st.dir_deriv < 0.0)) {
    // CG breakdown: fall back to the steepest-descent direction
    st.d = scaled(grad, -1.0);
    st.dir_deriv = -st.grad_norm * st.grad_norm;
  }
  return st;
}

}  // namespace

SolveResult fbs_solve(const CompositeProblem& prob0, const SolverConfig& config, const Vector& x0) {
  config.validate();
  CompositeProblem prob = resolve_gamma(prob0, config, x0);
  double tol = config.tol > 0.0 ? config.tol : auto_tol(prob, x0);

  RunState run;
  run.record = config.record_iterates;
  run.trace.gamma = prob.gamma;

  Vector x = x0;
  double g_at_x = prob.g->value(x0);
  FbeEvaluation ev = evaluate(prob, x);
  SolveStatus status = SolveStatus::max_iter;

  for (int k = 0;; ++k) {
    TraceRow row;
    row.k = k;
    row.f_val = ev.f_x + g_at_x;
    row.fbe = ev.fbe;
    row.g_norm = ev.residual_inf;
    if (ev.residual_inf <= tol) {
      status = SolveStatus::converged;
      run.push(row, x);
      break;
    }
    if (config.target_objective && ev.fbe <= *config.target_objective) {
      status = SolveStatus::converged;
      x = ev.p_x;
      run.push(row, x);
      break;
    }
    if (k >= config.max_iter) {
      run.push(row, x);
      break;
    }
    run.push(row, x);
    x = ev.p_x;
    g_at_x = ev.g_px;
    ev = evaluate(prob, x);
  }

  SolveResult res;
  res.x = std::move(x);
  res.f_final = prob.f->value(res.x) + prob.g->value(res.x);
  res.status = status;
  res.trace = std::move(run.trace);
  return res;
}

SolveResult afbs_solve(const CompositeProblem& prob0, const SolverConfig& config, const Vector& x0) {
  config.validate();
  CompositeProblem prob = resolve_gamma(prob0, config, x0);
  double tol = config.tol > 0.0 ? config.tol : auto_tol(prob, x0);

  RunState run;
  run.record = config.record_iterates;
  run.trace.gamma = prob.gamma;

  Vector x_prev = x0;
  Vector x = x0;
  double g_at_x = prob.g->value(x0);
  SolveStatus status = SolveStatus::max_iter;

  {
    FbeEvaluation ev0 = evaluate(prob, x);
    TraceRow row;
    row.k = 0;
    row.f_val = ev0.f_x + g_at_x;
    row.fbe = ev0.fbe;
    row.g_norm = ev0.residual_inf;
    run.push(row, x);
    if (ev0.residual_inf <= tol) {
      SolveResult res;
      res.x = x;
      res.f_final = ev0.f_x + g_at_x;
      res.status = SolveStatus::converged;
      res.trace = std::move(run.trace);
      return res;
    }
  }

  for (int k = 1; k <= config.max_iter; ++k) {
    double beta = static_cast<double>(k - 1) / static_cast<double>(k + 2);
    Vector y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += beta * (x[i] - x_prev[i]);
    FbeEvaluation ev_y = evaluate(prob, y);

    x_prev = std::move(x);
    x = ev_y.p_x;
    g_at_x = ev_y.g_px;

    TraceRow row;
    row.k = k;
    row.f_val = prob.f->value(x) + g_at_x;
    row.fbe = ev_y.fbe;
    row.g_norm = ev_y.residual_inf;

    if (config.target_objective && ev_y.fbe <= *config.target_objective) {
      status = SolveStatus::converged;
      run.push(row, x);
      break;
    }
    if (ev_y.residual_inf <= tol) {
      // certify at the iterate itself before stopping
      FbeEvaluation cert = evaluate(prob, x);
      row.g_norm = cert.residual_inf;
      row.fbe = cert.fbe;
      if (cert.residual_inf <= tol) {
        status = SolveStatus::converged;
        run.push(row, x);
        break;
      }
    }
    run.push(row, x);
  }

  SolveResult res;
  res.x = std::move(x);
  res.f_final = prob.f->value(res.x) + prob.g->value(res.x);
  res.status = status;
  res.trace = std::move(run.trace);
  return res;
}

SolveResult fbn_cg1_solve(const CompositeProblem& prob0, const SolverConfig& config,
                          const Vector& x0) {
  config.validate();
  CompositeProblem prob = resolve_gamma(prob0, config, x0);
  double tol = config.tol > 0.0 ? config.tol : auto_tol(prob, x0);

  RunState run;
  run.record = config.record_iterates;
  run.trace.gamma = prob.gamma;

  Vector x = x0;
  FbeEvaluation ev = evaluate(prob, x);
  SolveStatus status = SolveStatus::max_iter;

  for (int k = 0;; ++k) {
    TraceRow row;
    row.k = k;
    row.f_val = ev.f_x + prob.g->value(x);
    row.fbe = ev.fbe;
    row.g_norm = ev.residual_inf;
    if (ev.residual_inf <= tol) {
      status = SolveStatus::converged;
      run.push(row, x);
      break;
    }
    if (config.target_objective && ev.fbe <= *config.target_objective) {
      status = SolveStatus::converged;
      x = ev.p_x;
      run.push(row, x);
      break;
    }
    if (k >= config.max_iter) {
      run.push(row, x);
      break;
    }

    Vector grad = fbe_gradient(prob, ev);
    NewtonStep st = newton_direction(prob, config, ev, grad);
    ArmijoResult ar = armijo_search(prob, ev, grad, st.d, config.sigma);
    if (!ar.ok) {
      status = SolveStatus::stalled;
      run.push(row, x);
      break;
    }
    row.tau = ar.tau;
    row.delta = st.delta;
    row.eta = st.eta;
    row.cg_iters = st.cg_iters;
    row.grad_norm = st.grad_norm;
    row.dir_deriv = st.dir_deriv;
    row.d_norm = norm2(st.d);
    run.push(row, x);

    x = ar.eval.x;
    ev = std::move(ar.eval);
  }

  SolveResult res;
  res.x = std::move(x);
  res.f_final = prob.f->value(res.x) + prob.g->value(res.x);
  res.status = status;
  res.trace = std::move(run.trace);
  return res;
}

SolveResult fbn_cg2_solve(const CompositeProblem& prob0, const SolverConfig& config,
                          const Vector& x0) {
  config.validate();
  CompositeProblem prob = resolve_gamma(prob0, config, x0);
  double tol = config.tol > 0.0 ? config.tol : auto_tol(prob, x0);

  double g_at_x = prob.g->value(x0);
  if (!std::isfinite(g_at_x))
    throw std::invalid_argument("fbn_cg2_solve: x0 must lie in dom g");

  RunState run;
  run.record = config.record_iterates;
  run.trace.gamma = prob.gamma;

  Vector x = x0;
  FbeEvaluation ev = evaluate(prob, x);
  int s = 0;
  SolveStatus status = SolveStatus::max_iter;

  for (int k = 0;; ++k) {
    TraceRow row;
    row.k = k;
    row.f_val = ev.f_x + g_at_x;
    row.fbe = ev.fbe;
    row.g_norm = ev.residual_inf;
    row.s = s;
    if (ev.residual_inf <= tol) {
      status = SolveStatus::converged;
      run.push(row, x);
      break;
    }
    if (config.target_objective && ev.fbe <= *config.target_objective) {
      status = SolveStatus::converged;
      x = ev.p_x;
      run.push(row, x);
      break;
    }
    if (k >= config.max_iter) {
      run.push(row, x);
      break;
    }

    bool do_newton = (config.newton_every > 0 && k % config.newton_every == 0) || s == 1;
    const FbeEvaluation* hat = &ev;
    FbeEvaluation hat_ev;
    int s_next = 0;
    if (do_newton) {
      Vector grad = fbe_gradient(prob, ev);
      NewtonStep st = newton_direction(prob, config, ev, grad);
      ArmijoResult ar = armijo_search(prob, ev, grad, st.d, config.sigma);
      row.delta = st.delta;
      row.eta = st.eta;
      row.cg_iters = st.cg_iters;
      row.grad_norm = st.grad_norm;
      row.dir_deriv = st.dir_deriv;
      row.d_norm = norm2(st.d);
      if (ar.ok) {
        // the forward-backward step is taken from the line-search point
        row.tau = ar.tau;
        hat_ev = std::move(ar.eval);
        hat = &hat_ev;
        s_next = (ar.tau == 1.0) ? 1 : 0;
      }
      // on a failed search the splitting step from x still makes progress
    }
    run.push(row, x);

    Vector x_next = hat->p_x;
    g_at_x = hat->g_px;
    x = std::move(x_next);
    ev = evaluate(prob, x);
    s = s_next;
  }

  SolveResult res;
  res.x = std::move(x);
  res.f_final = prob.f->value(res.x) + prob.g->value(res.x);
  res.status = status;
  res.trace = std::move(run.trace);
  return res;
}

SolverFn solver_by_name(const std::string& name) {
  if (name == "fbs") return fbs_solve;
  if (name == "afbs") return afbs_solve;
  if (name == "fbn_cg1") return fbn_cg1_solve;
  if (name == "fbn_cg2") return fbn_cg2_solve;
  throw std::invalid_argument("unknown solver: " + name);
}

bool is_solver_name(const std::string& name) {
  return name == "fbs" || name == "afbs" || name == "fbn_cg1" || name == "fbn_cg2";
}

SolveResult continuation_solve(const std::function<CompositeProblem(double)>& family,
                               double lambda_max, double lambda0, const SolverConfig& config,
                               const Vector& x0, const SolverFn& inner) {
  config.validate();
  if (!(lambda0 > 0.0) || !(lambda_max > 0.0))
    throw std::invalid_argument("continuation_solve: lambdas must be positive");

  std::vector<double> stages;
  if (lambda0 >= lambda_max) {
    stages.push_back(lambda0);
  } else {
    int count = static_cast<int>(std::ceil(std::log10(lambda_max / lambda0) - 1e-12));
    for (int t = 1; t < count; ++t) stages.push_back(lambda_max * std::pow(10.0, -t));
    stages.push_back(lambda0);
  }

  Vector x = x0;
  SolveResult out;
  IterateTrace merged;
  merged.stages = static_cast<int>(stages.size());
  int k_offset = 0;
  for (std::size_t t = 0; t < stages.size(); ++t) {
    CompositeProblem prob = family(stages[t]);
    SolverConfig stage_config = config;
    bool final_stage = (t + 1 == stages.size());
    double tol = config.tol;
    if (tol <= 0.0) tol = auto_tol(prob, x);
    if (!final_stage) stage_config.tol = std::max(10.0 * tol, 0.1 * stages[t]);
    else stage_config.tol = tol;

    out = inner(prob, stage_config, x);
    x = out.x;
    merged.gamma = out.trace.gamma;
    for (TraceRow row : out.trace.rows) {
      row.stage = static_cast<int>(t);
      row.k += k_offset;
      merged.rows.push_back(row);
    }
    for (auto& it : out.trace.iterates) merged.iterates.push_back(std::move(it));
    k_offset = merged.rows.empty() ? 0 : merged.rows.back().k + 1;
  }
  out.trace = std::move(merged);
  return out;
}

}  // namespace fbn

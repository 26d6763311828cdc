#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fbn/fbe.hpp"

namespace fbn {

struct SolverConfig {
  double gamma = 0.0;     // 0 = auto: 0.95/L_f refined by gamma backtracking at x0
  double sigma = 1e-4;    // Armijo sufficient-decrease constant, in (0, 1/2)
  double eta_bar = 0.5;   // forcing-term cap, in (0, 1)
  double zeta = 1e-6;     // regularization weight delta_k = zeta ||grad||; 0 allowed
  double rho = 1.0;       // forcing-term exponent, in (0, 1]
  int newton_every = 1;   // Newton schedule: every m-th iteration; 0 disables Newton steps
  int max_iter = 1000;
  double tol = 0.0;       // on ||G_gamma||_inf; 0 = auto: 1e-8 (1 + ||grad f(x0)||_inf)
  int cg_max_iter = 0;    // 0 = problem dimension
  // Benchmark mode: stop once the envelope value reaches this target and
  // return the forward-backward point (its objective is at most the
  // envelope value, so the returned point meets the target). The
  // converged status then refers to the objective target, not to tol.
  std::optional<double> target_objective;
  bool record_iterates = false;

  void validate() const;
};

struct TraceRow {
  int k = 0;
  double f_val = 0.0;      // F(x^k), +inf when x^k is outside dom g
  double fbe = 0.0;        // F_gamma at the evaluated point
  double g_norm = 0.0;     // ||G_gamma||_inf
  double tau = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  int cg_iters = 0;
  int s = 0;
  double elapsed_s = 0.0;
  // extra per-iteration data kept for property checks; not part of the CSV
  double grad_norm = 0.0;  // ||grad F_gamma||_2
  double dir_deriv = 0.0;  // grad F_gamma' d
  double d_norm = 0.0;     // ||d||_2
  int stage = 0;           // continuation stage index
};

struct IterateTrace {
  std::vector<TraceRow> rows;
  std::vector<Vector> iterates;  // one per row when record_iterates is on
  double gamma = 0.0;
  int stages = 1;
  long total_cg_iters() const;
};

enum class SolveStatus { converged, max_iter, stalled };
const char* to_string(SolveStatus s);

struct SolveResult {
  Vector x;
  double f_final = 0.0;  // F(x), +inf when x is outside dom g
  SolveStatus status = SolveStatus::max_iter;
  IterateTrace trace;
};

/// Forward-backward splitting x+ = prox(x - gamma grad f(x)).
SolveResult fbs_solve(const CompositeProblem& prob, const SolverConfig& config, const Vector& x0);

/// Accelerated forward-backward splitting with Nesterov extrapolation
/// y = x + (k-1)/(k+2) (x - x_prev), constant stepsize. Trace rows carry
/// the envelope and residual at the extrapolated point; convergence is
/// certified at the returned iterate.
SolveResult afbs_solve(const CompositeProblem& prob, const SolverConfig& config, const Vector& x0);

struct ArmijoResult {
  double tau = 0.0;
  FbeEvaluation eval;  // at x + tau d
  bool ok = false;
  int backtracks = 0;
};

/// Largest tau in {1, 1/2, 1/4, ...} with
/// F_gamma(x + tau d) <= F_gamma(x) + sigma tau grad'd (plus a
/// machine-epsilon relative slack; exact descent drops below round-off
/// once the residual is small). Fails after 60 halvings.
ArmijoResult armijo_search(const CompositeProblem& prob, const FbeEvaluation& at_x,
                           const Vector& grad_fbe, const Vector& d, double sigma);

/// Truncated-Newton line-search method on the envelope: CG on the
/// regularized system (H + delta I) d = -grad to a forcing-term
/// residual, Armijo step, repeat.
SolveResult fbn_cg1_solve(const CompositeProblem& prob, const SolverConfig& config,
                          const Vector& x0);

/// Newton step interleaved with a forward-backward step: on scheduled
/// iterations (or after a full Newton step) the direction and step of
/// the line-search method are computed and the forward-backward step is
/// taken from there; otherwise a plain splitting step. Monotone in F,
/// requires x0 in dom g.
SolveResult fbn_cg2_solve(const CompositeProblem& prob, const SolverConfig& config,
                          const Vector& x0);

using SolverFn =
    std::function<SolveResult(const CompositeProblem&, const SolverConfig&, const Vector&)>;

/// Names: fbs, afbs, fbn_cg1, fbn_cg2. Throws on anything else.
SolverFn solver_by_name(const std::string& name);
bool is_solver_name(const std::string& name);

/// Warm-started continuation over a regularization path: stages
/// lambda_max 10^-1, 10^-2, ... down to lambda0 (ceil(log10) stages),
/// looser residual tolerance max(10 tol, 0.1 lambda) on all but the
/// final stage. Traces are concatenated with a per-row stage index.
SolveResult continuation_solve(const std::function<CompositeProblem(double)>& family,
                               double lambda_max, double lambda0, const SolverConfig& config,
                               const Vector& x0, const SolverFn& inner);

}  // namespace fbn

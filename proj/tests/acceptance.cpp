// Acceptance suite: runs every contract the library is expected to meet,
// one pass/fail line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fbn/problems.hpp"
#include "fbn/spectral.hpp"

using namespace fbn;

namespace {

using Clock = std::chrono::steady_clock;

double secs(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (log.tellp() > 0) log << "; ";
      log << what;
    }
  }
};

Vector random_point(int n, Rng& rng, double scale = 1.5) {
  Vector v(n);
  for (double& e : v) e = scale * rng.gaussian();
  return v;
}

std::vector<std::pair<std::string, ProblemInstance>> desk_family_instances(std::uint64_t seed) {
  std::vector<std::pair<std::string, ProblemInstance>> out;
  out.emplace_back("box_qp", gen_box_qp(20, 0.9, 50.0, seed));
  out.emplace_back("dual_qp", gen_dual_qp(15, 25, 20.0, seed + 1));
  out.emplace_back("lasso", gen_lasso(15, 40, 0.1, seed + 2));
  out.emplace_back("logreg", gen_logreg(40, 20, 6, seed + 3));
  out.emplace_back("matcomp", gen_matcomp(6, 8, 2, 0.6, 0.05, seed + 4));
  return out;
}

// Distance of the forward point from the nearest kink of the prox,
// normalized per family; used to sample differentiable points.
double kink_margin(const std::string& family, const ProblemInstance& inst,
                   const FbeEvaluation& ev) {
  double gamma = inst.problem.gamma;
  double margin = 1e300;
  if (family == "box_qp") {
    for (double t : ev.t_x)
      margin = std::min(margin, std::min(std::fabs(t - 1.0), std::fabs(t + 1.0)));
  } else if (family == "dual_qp") {
    for (double t : ev.t_x)
      margin = std::min(margin, std::min(std::fabs(t - gamma), std::fabs(t + gamma)));
  } else if (family == "lasso") {
    double thr = gamma * inst.lambda;
    for (double t : ev.t_x) margin = std::min(margin, std::fabs(std::fabs(t) - thr));
  } else if (family == "logreg") {
    double thr = gamma * inst.lambda;
    for (std::size_t i = 0; i + 1 < ev.t_x.size(); ++i)
      margin = std::min(margin, std::fabs(std::fabs(ev.t_x[i]) - thr));
  } else if (family == "matcomp") {
    double thr = gamma * inst.lambda;
    SvdDecomposition dec = svd(vec_to_mat(ev.t_x, 6, 8));
    for (double s : dec.sigma) margin = std::min(margin, std::fabs(s - thr));
  }
  return margin;
}

Vector fd_fbe_gradient(const CompositeProblem& prob, const Vector& x, double h) {
  Vector g(x.size());
  Vector p = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double xi = x[i];
    p[i] = xi + h;
    double fp = evaluate(prob, p).fbe;
    p[i] = xi - h;
    double fm = evaluate(prob, p).fbe;
    p[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// --------------------------------------------------------------------------

bool criterion_1(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  for (auto& [family, inst] : desk_family_instances(100)) {
    const CompositeProblem& prob = inst.problem;
    double gamma = prob.gamma;
    double lf = prob.f->curvature().L;
    Rng rng(11 + inst.seed);
    for (int t = 0; t < 1000; ++t) {
      Vector x = random_point(prob.dim(), rng);
      FbeEvaluation ev = evaluate(prob, x);
      double gg = dot(ev.g_x, ev.g_x);
      double fx = objective(prob, x);
      if (std::isfinite(fx)) {
        double slack14 = fx - 0.5 * gamma * gg - ev.fbe;
        c.expect(slack14 >= -1e-10 * (1.0 + std::fabs(fx)), family + ": upper bound violated");
      }
      {
        // indicators: also test from a feasible point so the upper bound
        // is exercised on every family
        Vector xf = ev.p_x;
        FbeEvaluation evf = evaluate(prob, xf);
        double fxf = objective(prob, xf);
        double ggf = dot(evf.g_x, evf.g_x);
        c.expect(std::isfinite(fxf), family + ": prox point infeasible");
        double slack14 = fxf - 0.5 * gamma * ggf - evf.fbe;
        c.expect(slack14 >= -1e-10 * (1.0 + std::fabs(fxf)),
                 family + ": upper bound violated at feasible point");
      }
      double fp = objective_at_prox_point(prob, ev);
      double slack15 = ev.fbe - 0.5 * gamma * (1.0 - gamma * lf) * gg - fp;
      c.expect(slack15 >= -1e-10 * (1.0 + std::fabs(fp)), family + ": lower bound violated");
    }
  }
  double el = secs(t0);
  c.expect(el < 10.0, "runtime budget exceeded");
  std::ostringstream os;
  os << "5 families x 1000 points, " << el << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_2(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  for (auto& [family, inst] : desk_family_instances(200)) {
    const CompositeProblem& prob = inst.problem;
    Rng rng(23 + inst.seed);
    int tested = 0;
    int attempts = 0;
    while (tested < 100 && attempts < 3000) {
      ++attempts;
      Vector x = random_point(prob.dim(), rng, 1.0);
      FbeEvaluation ev = evaluate(prob, x);
      if (kink_margin(family, inst, ev) < 1e-4) continue;  // perturb off kinks
      ++tested;
      Vector grad = fbe_gradient(prob, ev);
      Vector fd = fd_fbe_gradient(prob, x, 1e-5);
      double err = norm2(sub(grad, fd)) / (1.0 + norm2(fd));
      c.expect(err < 1e-6, family + ": gradient mismatch " + std::to_string(err));
    }
    c.expect(tested == 100, family + ": could not sample enough differentiable points");
  }
  double el = secs(t0);
  c.expect(el < 30.0, "runtime budget exceeded");
  std::ostringstream os;
  os << "5 families x 100 points, " << el << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_3(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  for (int i = 0; i < 10; ++i) {
    ProblemInstance inst = (i % 2 == 0) ? gen_box_qp(30, 1.0, 40.0, 300 + i)
                                        : gen_lasso(12, 30, 0.1, 300 + i);
    const CompositeProblem& prob = inst.problem;
    CurvatureBounds cb = prob.f->curvature();
    double gamma = prob.gamma;
    double xi1 = std::min((1.0 - gamma * cb.mu) * cb.mu, (1.0 - gamma * cb.L) * cb.L);
    double xi2 = (1.0 - gamma * cb.mu) / gamma;
    Rng rng(37 + i);
    Vector x = random_point(prob.dim(), rng);
    FbeEvaluation ev = evaluate(prob, x);
    LinOp h = lna_operator(prob, ev);
    for (int t = 0; t < 100; ++t) {
      Vector v = random_point(prob.dim(), rng, 1.0);
      Vector w = random_point(prob.dim(), rng, 1.0);
      Vector hv = h.apply(v);
      double sym_gap = std::fabs(dot(hv, w) - dot(v, h.apply(w)));
      c.expect(sym_gap <= 1e-10 * (1.0 + std::fabs(dot(hv, w))), "symmetry violated");
      double quad = dot(v, hv) / dot(v, v);
      c.expect(quad >= xi1 - 1e-9, "Rayleigh quotient below xi1");
      c.expect(quad <= xi2 + 1e-9, "Rayleigh quotient above xi2");
    }
  }
  std::ostringstream os;
  os << "10 instances x 100 directions, " << secs(t0) << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_4(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  Rng rng(41);

  std::vector<std::pair<std::string, std::shared_ptr<ProxOperator>>> catalog;
  catalog.emplace_back("zero", std::make_shared<ZeroProx>(5));
  catalog.emplace_back("box", std::make_shared<BoxIndicator>(5, -1.0, 1.0));
  {
    DenseMatrix a(2, 5);
    for (double& e : a.data) e = rng.gaussian();
    Vector b = {0.3, -0.2};
    catalog.emplace_back("affine", std::make_shared<AffineIndicator>(a, b));
  }
  catalog.emplace_back("halfspace", std::make_shared<Halfspace>(random_point(5, rng, 1.0), 0.4));
  catalog.emplace_back("simplex", std::make_shared<SimplexIndicator>(5));
  catalog.emplace_back("l2ball", std::make_shared<L2BallIndicator>(5));
  catalog.emplace_back("soc", std::make_shared<SocIndicator>(5));
  catalog.emplace_back("l2norm", std::make_shared<L2Norm>(5));
  catalog.emplace_back("l1norm", std::make_shared<L1Norm>(5, 0.6));
  catalog.emplace_back("group", std::make_shared<GroupL2Norm>(
                                    std::vector<std::vector<int>>{{0, 2}, {1, 3, 4}}, 0.5));
  catalog.emplace_back("partial_l1", std::make_shared<PartialL1>(5, 0.6));
  catalog.emplace_back("box_support", make_box_support(Vector(5, -1.0), Vector(5, 1.0)));
  catalog.emplace_back("max", make_pointwise_max(5));
  catalog.emplace_back("psd_cone", std::make_shared<PsdConeIndicator>(3));
  catalog.emplace_back("nuclear", std::make_shared<NuclearNorm>(3, 4, 0.4));

  for (auto& [name, g] : catalog) {
    double gamma = 0.8;
    for (int t = 0; t < 10; ++t) {
      Vector x = random_point(g->dim(), rng);
      LinOp p = g->jac_element(x, gamma);
      for (int vt = 0; vt < 10; ++vt) {
        Vector v = random_point(g->dim(), rng, 1.0);
        Vector w = random_point(g->dim(), rng, 1.0);
        if (name == "psd_cone") {
          v = mat_to_vec(symmetrized(vec_to_mat(v, 3, 3)));
          w = mat_to_vec(symmetrized(vec_to_mat(w, 3, 3)));
        }
        Vector pv = p.apply(v);
        double sym_gap = std::fabs(dot(pv, w) - dot(v, p.apply(w)));
        c.expect(sym_gap <= 1e-9 * (1.0 + std::fabs(dot(pv, w))), name + ": not symmetric");
        double quad = dot(v, pv);
        c.expect(quad >= -1e-9 * dot(v, v), name + ": not PSD");
        c.expect(quad <= dot(v, v) * (1.0 + 1e-9), name + ": norm above one");
      }
    }
  }

  // Moreau decomposition on independently implemented conjugate pairs
  {
    L1Norm l1(5, 1.0);
    BoxIndicator box(5, -1.0, 1.0);
    auto boxsup = make_box_support(Vector(5, -1.0), Vector(5, 1.0));
    auto pmax = make_pointwise_max(5);
    SimplexIndicator simplex(5);
    L2Norm l2(5);
    L2BallIndicator ball(5);
    for (int t = 0; t < 200; ++t) {
      Vector x = random_point(5, rng);
      double gamma = 0.4 + rng.uniform();
      auto check_pair = [&](const ProxOperator& g, const ProxOperator& gstar,
                            const std::string& label) {
        Vector left = g.prox(x, gamma);
        Vector right = scaled(gstar.prox(scaled(x, 1.0 / gamma), 1.0 / gamma), gamma);
        double err = norm2(sub(add(left, right), x)) / (1.0 + norm2(x));
        c.expect(err < 1e-12, label + ": Moreau identity off by " + std::to_string(err));
      };
      check_pair(l1, box, "l1/box");
      check_pair(*boxsup, box, "boxsup/box");
      check_pair(*pmax, simplex, "max/simplex");
      check_pair(l2, ball, "l2norm/l2ball");
    }
  }

  // finite-difference agreement at differentiable points
  for (auto& [name, g] : catalog) {
    double gamma = 0.8;
    auto map = [&, gp = g.get()](const Vector& q) { return gp->prox(q, gamma); };
    int passes = 0;
    for (int t = 0; t < 5; ++t) {
      Vector x = random_point(g->dim(), rng, 1.7);
      LinOp jac = g->jac_element(x, gamma);
      bool good = true;
      for (int vt = 0; vt < 3; ++vt) {
        Vector v = random_point(g->dim(), rng, 1.0);
        Vector fd(v.size());
        {
          Vector xp = x, xm = x;
          axpy(1e-6, v, xp);
          axpy(-1e-6, v, xm);
          Vector fp = map(xp), fm = map(xm);
          for (std::size_t i = 0; i < v.size(); ++i) fd[i] = (fp[i] - fm[i]) / 2e-6;
        }
        if (norm2(sub(jac.apply(v), fd)) / (1.0 + norm2(fd)) >= 1e-5) good = false;
      }
      if (good) ++passes;
    }
    // random points are differentiable almost surely; allow one tie hit
    c.expect(passes >= 4, name + ": finite-difference Jacobian mismatch");
  }

  // spectral prox Jacobians against finite differences at the stated shapes
  {
    DenseMatrix x6(6, 6);
    for (double& e : x6.data) e = 1.5 * rng.gaussian();
    x6 = symmetrized(x6);
    DenseMatrix s6(6, 6);
    for (double& e : s6.data) e = rng.gaussian();
    s6 = symmetrized(s6);
    Vector got = mat_to_vec(psd_jac_apply(x6, s6));
    Vector xv = mat_to_vec(x6), sv = mat_to_vec(s6);
    Vector fd(36);
    {
      Vector xp = xv, xm = xv;
      axpy(1e-6, sv, xp);
      axpy(-1e-6, sv, xm);
      Vector fp = mat_to_vec(psd_project(vec_to_mat(xp, 6, 6)));
      Vector fm = mat_to_vec(psd_project(vec_to_mat(xm, 6, 6)));
      for (int i = 0; i < 36; ++i) fd[i] = (fp[i] - fm[i]) / 2e-6;
    }
    c.expect(norm2(sub(got, fd)) / (1.0 + norm2(fd)) < 1e-5, "psd jacobian FD mismatch");

    DenseMatrix x46(4, 6);
    for (double& e : x46.data) e = 1.5 * rng.gaussian();
    DenseMatrix h46(4, 6);
    for (double& e : h46.data) e = rng.gaussian();
    double thr = 0.7;
    Vector got2 = mat_to_vec(nuclear_jac_apply(x46, h46, thr));
    Vector xv2 = mat_to_vec(x46), hv2 = mat_to_vec(h46);
    Vector fd2(24);
    {
      Vector xp = xv2, xm = xv2;
      axpy(1e-6, hv2, xp);
      axpy(-1e-6, hv2, xm);
      Vector fp = mat_to_vec(nuclear_prox(vec_to_mat(xp, 4, 6), thr));
      Vector fm = mat_to_vec(nuclear_prox(vec_to_mat(xm, 4, 6), thr));
      for (int i = 0; i < 24; ++i) fd2[i] = (fp[i] - fm[i]) / 2e-6;
    }
    c.expect(norm2(sub(got2, fd2)) / (1.0 + norm2(fd2)) < 1e-5, "nuclear jacobian FD mismatch");
  }

  std::ostringstream os;
  os << catalog.size() << " prox operators, " << secs(t0) << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_5(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ProblemInstance inst = gen_lasso(30, 100, 0.05, seed);
    if (!compute_reference(inst, 1e-12, 1000000)) {
      c.expect(false, "reference did not certify for seed " + std::to_string(seed));
      continue;
    }
    SolverConfig cfg;
    cfg.tol = 1e-9;
    cfg.max_iter = 300;
    cfg.record_iterates = true;
    SolveResult res = fbn_cg2_solve(inst.problem, cfg, zeros(100));
    c.expect(res.status == SolveStatus::converged, "solver did not converge");
    double gamma = res.trace.gamma;
    double fstar = *inst.f_star;
    double radius = 0.0;
    for (const auto& it : res.trace.iterates)
      radius = std::max(radius, norm2(sub(it, *inst.x_star)));
    for (const auto& row : res.trace.rows) {
      if (row.k < 1) continue;
      double bound = 2.0 * radius * radius / (gamma * (row.k + 2));
      c.expect(row.f_val - fstar <= bound + 1e-9 * (1.0 + std::fabs(fstar)),
               "sublinear bound violated at k=" + std::to_string(row.k) + " seed " +
                   std::to_string(seed));
    }
  }
  double el = secs(t0);
  c.expect(el < 60.0, "runtime budget exceeded");
  std::ostringstream os;
  os << "10 lasso instances (n=100), " << el << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_6(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ProblemInstance inst = gen_box_qp(100, 1.0, 1e3, seed);
    if (!compute_reference(inst, 1e-12, 1000000)) {
      c.expect(false, "reference did not certify for seed " + std::to_string(seed));
      continue;
    }
    SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 400;
    cfg.record_iterates = true;
    SolveResult res = fbn_cg2_solve(inst.problem, cfg, zeros(100));
    c.expect(res.status == SolveStatus::converged, "solver did not converge");
    double gamma = res.trace.gamma;
    double mu = inst.problem.f->curvature().mu;
    double fstar = *inst.f_star;
    double gap0 = res.trace.rows[0].f_val - fstar;
    double dist0 = dot(sub(res.trace.iterates[0], *inst.x_star),
                       sub(res.trace.iterates[0], *inst.x_star));
    for (const auto& row : res.trace.rows) {
      double bound = std::pow(1.0 + gamma * mu, -double(row.k)) * gap0;
      c.expect(row.f_val - fstar <= bound + 1e-9 * (1.0 + std::fabs(fstar)),
               "linear rate violated at k=" + std::to_string(row.k) + " seed " +
                   std::to_string(seed));
      if (row.k >= 1) {
        double d2 = dot(sub(res.trace.iterates[row.k], *inst.x_star),
                        sub(res.trace.iterates[row.k], *inst.x_star));
        double dist_bound = (1.0 - gamma * mu) /
                            (gamma * mu * std::pow(1.0 + gamma * mu, double(row.k - 1))) * dist0;
        c.expect(d2 <= dist_bound + 1e-9 * (1.0 + dist0),
                 "distance bound violated at k=" + std::to_string(row.k) + " seed " +
                     std::to_string(seed));
      }
    }
  }
  double el = secs(t0);
  c.expect(el < 60.0, "runtime budget exceeded");
  std::ostringstream os;
  os << "10 box QPs (n=100, kappa=1e3), " << el << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_7(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ProblemInstance inst = gen_box_qp(100, 1.0, 1e3, seed);
    if (!compute_reference(inst, 1e-12, 1000000)) {
      c.expect(false, "reference did not certify for seed " + std::to_string(seed));
      continue;
    }
    SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_iter = 400;
    cfg.zeta = 0.0;  // the pure-Newton regularization regime
    cfg.record_iterates = true;
    SolveResult res = fbn_cg1_solve(inst.problem, cfg, zeros(100));
    c.expect(res.status == SolveStatus::converged, "solver did not converge");

    const CompositeProblem& prob = inst.problem;
    CurvatureBounds cb = prob.f->curvature();
    double gamma = res.trace.gamma;
    double mu_env = std::min((1.0 - gamma * cb.mu) * cb.mu, (1.0 - gamma * cb.L) * cb.L);
    double lip_env = 2.0 * (1.0 - gamma * cb.mu) / gamma;
    double ratio = mu_env / lip_env;
    double rate = 1.0 - 2.0 * ratio * ratio * ratio * cfg.sigma * (1.0 - cfg.sigma) /
                            (1.0 + cfg.eta_bar);
    double fstar = *inst.f_star;
    double env0 = res.trace.rows[0].fbe - fstar;
    for (const auto& row : res.trace.rows) {
      FbeEvaluation ev = evaluate(prob, res.trace.iterates[row.k]);
      double fp = objective_at_prox_point(prob, ev);
      double bound = std::pow(rate, double(row.k)) * env0;
      c.expect(fp - fstar <= bound + 1e-9 * (1.0 + std::fabs(fstar)),
               "envelope rate violated at k=" + std::to_string(row.k) + " seed " +
                   std::to_string(seed));
    }
  }
  std::ostringstream os;
  os << "10 box QPs, zeta=0, " << secs(t0) << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_8(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  struct Run {
    std::string label;
    ProblemInstance inst;
    SolverFn solver;
  };
  std::vector<Run> runs;
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    runs.push_back({"box_qp_" + std::to_string(seed), gen_box_qp(200, 1.0, 100.0, seed),
                    fbn_cg1_solve});
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    runs.push_back({"lasso_" + std::to_string(seed), gen_lasso(100, 200, 0.05, seed),
                    fbn_cg2_solve});

  for (auto& run : runs) {
    if (!compute_reference(run.inst, 1e-13, 1000000)) {
      c.expect(false, run.label + ": reference did not certify");
      continue;
    }
    SolverConfig cfg;
    cfg.tol = 1e-12;
    cfg.max_iter = 40;
    cfg.record_iterates = true;
    SolveResult res = run.solver(run.inst.problem, cfg, zeros(200));
    c.expect(res.status == SolveStatus::converged,
             run.label + ": no convergence to 1e-12 within 40 iterations");
    if (res.status != SolveStatus::converged) continue;

    const Vector& xstar = *run.inst.x_star;
    int onset = -1;
    for (std::size_t i = 0; i + 1 < res.trace.rows.size(); ++i) {
      if (res.trace.rows[i].tau == 1.0 && res.trace.rows[i].g_norm < 1e-4) {
        onset = static_cast<int>(i);
        break;
      }
    }
    c.expect(onset >= 0, run.label + ": no unit step accepted in the small-residual tail");
    if (onset < 0) continue;
    // unit steps from the onset to termination (the terminal row takes none)
    for (std::size_t i = onset; i + 1 < res.trace.rows.size(); ++i)
      c.expect(res.trace.rows[i].tau == 1.0,
               run.label + ": non-unit step after the tail onset at k=" + std::to_string(i));

    double floor_eps = 1e-11 * (1.0 + norm2(xstar));
    double prev_ratio = 1e300;
    bool hit_small = false;
    int steps = 0;
    for (std::size_t i = onset; i + 1 < res.trace.iterates.size() && steps < 6; ++i, ++steps) {
      double ei = norm2(sub(res.trace.iterates[i], xstar));
      double ei1 = norm2(sub(res.trace.iterates[i + 1], xstar));
      if (ei <= floor_eps || ei1 <= floor_eps) {
        hit_small = true;  // already at the reference accuracy floor
        break;
      }
      double ratio = ei1 / ei;
      c.expect(ratio <= prev_ratio * (1.0 + 1e-6),
               run.label + ": error ratio not monotone at step " + std::to_string(steps));
      prev_ratio = ratio;
      if (ratio <= 0.05 && steps < 4) {
        hit_small = true;
        break;
      }
    }
    c.expect(hit_small, run.label + ": ratio did not fall below 0.05 within 4 iterations");
  }
  std::ostringstream os;
  os << "6 instances (n=200), " << secs(t0) << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

bool criterion_9(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  double sum_cg1 = 0.0, sum_cg2 = 0.0, sum_afbs = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ProblemInstance inst = gen_logreg(100, 1000, 50, seed);
    if (!compute_reference(inst, 1e-12, 400000)) {
      c.expect(false, "reference did not certify for seed " + std::to_string(seed));
      continue;
    }
    SolverConfig cfg;
    cfg.tol = 1e-15;
    cfg.max_iter = 100000;
    cfg.target_objective = *inst.f_star + 1e-8 * std::max(1.0, std::fabs(*inst.f_star));
    auto outer = [&](const SolverFn& s) -> double {
      SolveResult r = s(inst.problem, cfg, zeros(1000));
      c.expect(r.status == SolveStatus::converged, "run did not reach the target");
      return double(r.trace.rows.back().k);
    };
    sum_cg1 += outer(fbn_cg1_solve);
    sum_cg2 += outer(fbn_cg2_solve);
    sum_afbs += outer(afbs_solve);
  }
  double avg_cg1 = sum_cg1 / 5.0, avg_cg2 = sum_cg2 / 5.0, avg_afbs = sum_afbs / 5.0;
  c.expect(avg_cg1 <= avg_afbs / 5.0, "FBN-CG I average iterations above one fifth of AFBS");
  c.expect(avg_cg2 <= avg_afbs / 5.0, "FBN-CG II average iterations above one fifth of AFBS");
  std::ostringstream os;
  os << "avg outer iterations: fbn_cg1=" << avg_cg1 << " fbn_cg2=" << avg_cg2
     << " afbs=" << avg_afbs << ", " << secs(t0) << " s";
  detail = c.ok ? os.str() : (c.log.str() + " [" + os.str() + "]");
  return c.ok;
}

bool criterion_10(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  double sum_err = 0.0, sum_iters = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ProblemInstance inst = gen_matcomp(100, 100, 10, 0.56, 1e-2, seed);
    SolverConfig cfg;
    cfg.max_iter = 200;
    SolveResult res = fbn_cg1_solve(inst.problem, cfg, zeros(10000));
    c.expect(res.status == SolveStatus::converged, "solver did not converge");
    sum_iters += double(res.trace.rows.back().k);
    DenseMatrix got = vec_to_mat(res.x, 100, 100);
    double err = frob_norm(mat_sub(got, *inst.ground_truth)) / frob_norm(*inst.ground_truth);
    sum_err += err;
  }
  double avg_err = sum_err / 5.0, avg_iters = sum_iters / 5.0;
  c.expect(avg_err <= 2e-3, "average relative error above 2e-3");
  c.expect(avg_iters <= 150.0, "average outer iterations above 150");
  double el = secs(t0);
  c.expect(el < 300.0, "runtime budget exceeded");
  std::ostringstream os;
  os << "avg error=" << avg_err << " avg iters=" << avg_iters << ", " << el << " s";
  detail = c.ok ? os.str() : (c.log.str() + " [" + os.str() + "]");
  return c.ok;
}

bool criterion_11(std::string& detail) {
  auto t0 = Clock::now();
  Check c;
  std::vector<std::pair<std::string, ProblemInstance>> instances;
  instances.emplace_back("lasso", gen_lasso(8, 20, 0.1, 7));
  instances.emplace_back("box_qp", gen_box_qp(12, 1.0, 30.0, 8));
  instances.emplace_back("dual_qp", gen_dual_qp(10, 15, 10.0, 9));
  for (auto& [name, inst] : instances) {
    SolverConfig cfg;
    cfg.tol = 1e-9;
    cfg.max_iter = 400;
    cfg.record_iterates = true;
    cfg.newton_every = 0;  // empty Newton schedule
    SolveResult a = fbn_cg2_solve(inst.problem, cfg, zeros(inst.problem.dim()));
    SolverConfig plain = cfg;
    plain.newton_every = 1;
    SolveResult b = fbs_solve(inst.problem, plain, zeros(inst.problem.dim()));
    c.expect(a.trace.iterates.size() == b.trace.iterates.size(),
             name + ": iterate counts differ");
    for (std::size_t i = 0; i < a.trace.iterates.size() && i < b.trace.iterates.size(); ++i)
      c.expect(a.trace.iterates[i] == b.trace.iterates[i],
               name + ": iterates diverge at k=" + std::to_string(i));
  }
  std::ostringstream os;
  os << "3 instances bit-identical, " << secs(t0) << " s";
  detail = c.ok ? os.str() : c.log.str();
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* label;
    bool (*run)(std::string&);
  };
  std::vector<Criterion> criteria = {
      {1, "envelope upper/lower bounds at random points", criterion_1},
      {2, "envelope gradient vs central finite differences", criterion_2},
      {3, "generalized Hessian symmetry and spectral bounds", criterion_3},
      {4, "prox/Jacobian suite: contraction bounds, Moreau pairs, FD agreement", criterion_4},
      {5, "global sublinear rate on lasso traces", criterion_5},
      {6, "global linear rate and distance bound on strongly convex QPs", criterion_6},
      {7, "quadratic-case decay envelope in the zeta=0 regime", criterion_7},
      {8, "superlinear tail and fast high-accuracy convergence", criterion_8},
      {9, "newton solvers dominate accelerated splitting on logistic regression", criterion_9},
      {10, "matrix completion recovery at the benchmark scale", criterion_10},
      {11, "empty Newton schedule degenerates to forward-backward splitting", criterion_11},
  };

  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const auto& cr : criteria) {
    if (only > 0 && cr.id != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = cr.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", cr.id, cr.label,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}

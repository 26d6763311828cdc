#include "fbn/linops.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fbn {

Vector LinOp::apply(const Vector& v) const {
  require_dim(v, in_dim, "LinOp::apply (input)");
  require_finite(v, "LinOp::apply (input)");
  Vector out = fn(v);
  require_dim(out, out_dim, "LinOp::apply (output)");
  require_finite(out, "LinOp::apply (output)");
  return out;
}

LinOp identity_op(int n) {
  return LinOp(n, n, [](const Vector& v) { return v; });
}

LinOp diag_op(Vector d) {
  int n = static_cast<int>(d.size());
  return LinOp(n, n, [d = std::move(d)](const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = d[i] * v[i];
    return out;
  });
}

LinOp dense_op(DenseMatrix a) {
  int r = a.rows, c = a.cols;
  auto m = std::make_shared<DenseMatrix>(std::move(a));
  return LinOp(r, c, [m](const Vector& v) { return matvec(*m, v); });
}

LinOp scale_op(double alpha, LinOp a) {
  return LinOp(a.out_dim, a.in_dim,
               [alpha, a = std::move(a)](const Vector& v) { return scaled(a.apply(v), alpha); });
}

LinOp add_op(LinOp a, LinOp b) {
  if (a.in_dim != b.in_dim || a.out_dim != b.out_dim)
    throw std::invalid_argument("add_op: dimension mismatch");
  return LinOp(a.out_dim, a.in_dim, [a = std::move(a), b = std::move(b)](const Vector& v) {
    return add(a.apply(v), b.apply(v));
  });
}

LinOp compose_op(LinOp a, LinOp b) {
  if (a.in_dim != b.out_dim) throw std::invalid_argument("compose_op: dimension mismatch");
  return LinOp(a.out_dim, b.in_dim,
               [a = std::move(a), b = std::move(b)](const Vector& v) { return a.apply(b.apply(v)); });
}

LinOp shift_op(LinOp a, double delta) {
  if (a.in_dim != a.out_dim) throw std::invalid_argument("shift_op: operator not square");
  return LinOp(a.out_dim, a.in_dim, [delta, a = std::move(a)](const Vector& v) {
    Vector out = a.apply(v);
    axpy(delta, v, out);
    return out;
  });
}

CGReport cg_solve(const LinOp& a, const Vector& b, double target_residual, int max_iter) {
  if (a.in_dim != a.out_dim) throw std::invalid_argument("cg_solve: operator not square");
  require_dim(b, a.in_dim, "cg_solve");
  require_finite(b, "cg_solve");
  if (target_residual < 0.0) throw std::invalid_argument("cg_solve: negative target residual");

  const int n = a.in_dim;
  CGReport rep;
  rep.solution = zeros(n);

  auto finish = [&](int iters) {
    Vector res = sub(a.apply(rep.solution), b);
    rep.residual_norm = norm2(res);
    rep.iterations = iters;
    rep.converged = rep.residual_norm <= target_residual;
  };

  double bnorm = norm2(b);
  if (bnorm == 0.0) {
    finish(0);
    return rep;
  }

  Vector r = b;  // residual of the zero start
  Vector p = r;
  double rho = dot(r, r);
  int k = 0;
  while (k < max_iter) {
    Vector ap = a.apply(p);
    double pap = dot(p, ap);
    if (pap <= 0.0) break;  // round-off breakdown on a PSD system
    double alpha = rho / pap;
    axpy(alpha, p, rep.solution);
    axpy(-alpha, ap, r);
    ++k;
    if (k % 50 == 0) r = sub(b, a.apply(rep.solution));
    double rho_next = dot(r, r);
    if (std::sqrt(rho_next) <= target_residual) {
      // certify against the recomputed residual before declaring victory
      Vector exact = sub(b, a.apply(rep.solution));
      double exact_norm = norm2(exact);
      if (exact_norm <= target_residual) {
        rep.residual_norm = exact_norm;
        rep.iterations = k;
        rep.converged = true;
        return rep;
      }
      r = exact;
      rho_next = dot(r, r);
      p = r;  // restart the direction after the correction
      rho = rho_next;
      continue;
    }
    double beta = rho_next / rho;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    rho = rho_next;
  }
  finish(k);
  return rep;
}

double power_method(const LinOp& a, int iters, std::uint64_t seed) {
  if (a.in_dim != a.out_dim) throw std::invalid_argument("power_method: operator not square");
  Rng rng(seed);
  Vector v(a.in_dim);
  for (double& e : v) e = rng.gaussian();
  double nv = norm2(v);
  if (nv == 0.0) v[0] = 1.0;
  else for (double& e : v) e /= nv;

  Vector w = a.apply(v);
  for (int it = 1; it < iters; ++it) {
    double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
    w = a.apply(v);
  }
  double nw = norm2(w);
  if (nw == 0.0) return 0.0;
  return dot(v, w);  // Rayleigh quotient at the final unit iterate
}

}  // namespace fbn

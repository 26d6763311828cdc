#include "fbn/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fbn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void ProxOperator::check_point(const Vector& x, const char* where) const {
  require_dim(x, dim(), where);
  require_finite(x, where);
}

void ProxOperator::check_gamma(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be positive");
}

std::pair<Vector, double> ProxOperator::prox_and_value(const Vector& x, double gamma) const {
  Vector p = prox(x, gamma);
  double v = value(p);
  return {std::move(p), v};
}

double moreau_envelope(const ProxOperator& g, const Vector& x, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("moreau_envelope: gamma must be positive");
  auto [p, gp] = g.prox_and_value(x, gamma);
  Vector d = sub(p, x);
  return gp + dot(d, d) / (2.0 * gamma);
}

double feasibility_tol(const Vector& x) { return 1e-9 * (1.0 + norm2(x)); }

// ---------------------------------------------------------------------------
// ZeroProx

double ZeroProx::value(const Vector& x) const {
  check_point(x, "ZeroProx");
  return 0.0;
}

Vector ZeroProx::prox(const Vector& x, double gamma) const {
  check_point(x, "ZeroProx");
  check_gamma(gamma);
  return x;
}

LinOp ZeroProx::jac_element(const Vector& x, double gamma) const {
  check_point(x, "ZeroProx");
  check_gamma(gamma);
  return identity_op(n_);
}

// ---------------------------------------------------------------------------
// BoxIndicator

BoxIndicator::BoxIndicator(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw std::invalid_argument("BoxIndicator: bound sizes differ");
  for (std::size_t i = 0; i < lower_.size(); ++i)
    if (lower_[i] > upper_[i]) throw std::invalid_argument("BoxIndicator: empty box");
}

BoxIndicator::BoxIndicator(int n, double lower, double upper)
    : BoxIndicator(Vector(n, lower), Vector(n, upper)) {}

double BoxIndicator::value(const Vector& x) const {
  check_point(x, "BoxIndicator");
  double tol = feasibility_tol(x);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return kInf;
  return 0.0;
}

Vector BoxIndicator::prox(const Vector& x, double gamma) const {
  check_point(x, "BoxIndicator");
  check_gamma(gamma);
  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::min(std::max(x[i], lower_[i]), upper_[i]);
  return p;
}

LinOp BoxIndicator::jac_element(const Vector& x, double gamma) const {
  check_point(x, "BoxIndicator");
  check_gamma(gamma);
  Vector d(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    d[i] = (x[i] > lower_[i] && x[i] < upper_[i]) ? 1.0 : 0.0;
  return diag_op(std::move(d));
}

// ---------------------------------------------------------------------------
// AffineIndicator

AffineIndicator::AffineIndicator(DenseMatrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows != static_cast<int>(b_.size()))
    throw std::invalid_argument("AffineIndicator: dimension mismatch");
  if (a_.rows > a_.cols) throw std::invalid_argument("AffineIndicator: A must have full row rank");
  ThinQR qr = thin_qr(transpose(a_));  // A' = Q R, so A^dagger = Q R^{-T}
  q_ = std::move(qr.q);
  r_ = std::move(qr.r);
}

Vector AffineIndicator::multiplier_step(const Vector& x) const {
  Vector res = sub(matvec(a_, x), b_);
  Vector z = solve_upper_t(r_, res);
  return matvec(q_, z);
}

double AffineIndicator::value(const Vector& x) const {
  check_point(x, "AffineIndicator");
  Vector res = sub(matvec(a_, x), b_);
  return norm2(res) <= feasibility_tol(x) ? 0.0 : kInf;
}

Vector AffineIndicator::prox(const Vector& x, double gamma) const {
  check_point(x, "AffineIndicator");
  check_gamma(gamma);
  return sub(x, multiplier_step(x));
}

LinOp AffineIndicator::jac_element(const Vector& x, double gamma) const {
  check_point(x, "AffineIndicator");
  check_gamma(gamma);
  // constant projector onto null(A): I - QQ'
  DenseMatrix q = q_;
  return LinOp(dim(), dim(), [q](const Vector& v) {
    Vector out = v;
    axpy(-1.0, matvec(q, matvec_t(q, v)), out);
    return out;
  });
}

// ---------------------------------------------------------------------------
// Halfspace

Halfspace::Halfspace(Vector a, double b) : a_(std::move(a)), b_(b), a_sq_(dot(a_, a_)) {
  if (a_sq_ <= 0.0) throw std::invalid_argument("Halfspace: normal must be nonzero");
}

double Halfspace::value(const Vector& x) const {
  check_point(x, "Halfspace");
  return dot(a_, x) - b_ <= feasibility_tol(x) * std::sqrt(a_sq_) ? 0.0 : kInf;
}

Vector Halfspace::prox(const Vector& x, double gamma) const {
  check_point(x, "Halfspace");
  check_gamma(gamma);
  double viol = dot(a_, x) - b_;
  if (viol <= 0.0) return x;
  Vector p = x;
  axpy(-viol / a_sq_, a_, p);
  return p;
}

LinOp Halfspace::jac_element(const Vector& x, double gamma) const {
  check_point(x, "Halfspace");
  check_gamma(gamma);
  if (dot(a_, x) < b_) return identity_op(dim());
  // on and outside the boundary: the projecting-side limit I - aa'/||a||^2
  Vector a = a_;
  double asq = a_sq_;
  return LinOp(dim(), dim(), [a, asq](const Vector& v) {
    Vector out = v;
    axpy(-dot(a, v) / asq, a, out);
    return out;
  });
}

// ---------------------------------------------------------------------------
// SimplexIndicator

double SimplexIndicator::value(const Vector& x) const {
  check_point(x, "SimplexIndicator");
  double tol = feasibility_tol(x);
  double s = 0.0;
  for (double xi : x) {
    if (xi < -tol) return kInf;
    s += xi;
  }
  return std::fabs(s - 1.0) <= tol * n_ ? 0.0 : kInf;
}

Vector SimplexIndicator::prox(const Vector& x, double gamma) const {
  check_point(x, "SimplexIndicator");
  check_gamma(gamma);
  Vector u = x;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, lambda = 0.0;
  for (int j = 0; j < n_; ++j) {
    css += u[j];
    double cand = (css - 1.0) / (j + 1);
    if (u[j] - cand > 0.0) lambda = cand;
  }
  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::max(x[i] - lambda, 0.0);
  return p;
}

LinOp SimplexIndicator::jac_element(const Vector& x, double gamma) const {
  Vector p = prox(x, gamma);
  std::vector<int> free_idx;
  for (int i = 0; i < n_; ++i)
    if (p[i] > 0.0) free_idx.push_back(i);
  double inv = 1.0 / static_cast<double>(free_idx.size());
  // P v = v_Jc - mean(v_Jc) on the free block, 0 on the active block
  return LinOp(n_, n_, [free_idx, inv](const Vector& v) {
    Vector out(v.size(), 0.0);
    double s = 0.0;
    for (int i : free_idx) s += v[i];
    s *= inv;
    for (int i : free_idx) out[i] = v[i] - s;
    return out;
  });
}

// ---------------------------------------------------------------------------
// L2BallIndicator

double L2BallIndicator::value(const Vector& x) const {
  check_point(x, "L2BallIndicator");
  return norm2(x) <= 1.0 + feasibility_tol(x) ? 0.0 : kInf;
}

Vector L2BallIndicator::prox(const Vector& x, double gamma) const {
  check_point(x, "L2BallIndicator");
  check_gamma(gamma);
  double nx = norm2(x);
  if (nx <= 1.0) return x;
  return scaled(x, 1.0 / nx);
}

LinOp L2BallIndicator::jac_element(const Vector& x, double gamma) const {
  check_point(x, "L2BallIndicator");
  check_gamma(gamma);
  double nx = norm2(x);
  if (nx < 1.0) return identity_op(n_);
  // boundary and beyond: (1/||x||)(I - ww') with w = x/||x||
  Vector w = scaled(x, 1.0 / nx);
  return LinOp(n_, n_, [w, nx](const Vector& v) {
    Vector out = v;
    axpy(-dot(w, v), w, out);
    return scaled(out, 1.0 / nx);
  });
}

// ---------------------------------------------------------------------------
// SocIndicator

SocIndicator::SocIndicator(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("SocIndicator: needs dimension >= 2");
}

double SocIndicator::value(const Vector& x) const {
  check_point(x, "SocIndicator");
  double nbar = 0.0;
  for (int i = 1; i < n_; ++i) nbar += x[i] * x[i];
  return std::sqrt(nbar) <= x[0] + feasibility_tol(x) ? 0.0 : kInf;
}

Vector SocIndicator::prox(const Vector& x, double gamma) const {
  check_point(x, "SocIndicator");
  check_gamma(gamma);
  double nbar = 0.0;
  for (int i = 1; i < n_; ++i) nbar += x[i] * x[i];
  nbar = std::sqrt(nbar);
  if (nbar <= x[0]) return x;                      // inside the cone
  if (nbar <= -x[0]) return Vector(x.size(), 0.0); // inside the polar cone
  double coef = 0.5 * (x[0] + nbar);
  Vector p(x.size());
  p[0] = coef;
  for (int i = 1; i < n_; ++i) p[i] = coef * x[i] / nbar;
  return p;
}

LinOp SocIndicator::jac_element(const Vector& x, double gamma) const {
  check_point(x, "SocIndicator");
  check_gamma(gamma);
  double nbar = 0.0;
  for (int i = 1; i < n_; ++i) nbar += x[i] * x[i];
  nbar = std::sqrt(nbar);
  if (nbar == 0.0) {
    if (x[0] > 0.0) return identity_op(n_);
    if (x[0] < 0.0) return scale_op(0.0, identity_op(n_));
    return identity_op(n_);  // apex: any element is admissible, identity is cheapest
  }
  if (x[0] > nbar) return identity_op(n_);
  if (x[0] < -nbar) return scale_op(0.0, identity_op(n_));
  // V = 1/2 [[1, w'], [w, (1+alpha) I - alpha ww']], alpha = x0/||xbar||
  double alpha = std::min(std::max(x[0] / nbar, -1.0), 1.0);
  Vector w(n_ - 1);
  for (int i = 1; i < n_; ++i) w[i - 1] = x[i] / nbar;
  return LinOp(n_, n_, [w, alpha, n = n_](const Vector& v) {
    Vector out(v.size(), 0.0);
    double wv = 0.0;
    for (int i = 1; i < n; ++i) wv += w[i - 1] * v[i];
    out[0] = 0.5 * (v[0] + wv);
    for (int i = 1; i < n; ++i)
      out[i] = 0.5 * (w[i - 1] * v[0] + (1.0 + alpha) * v[i] - alpha * w[i - 1] * wv);
    return out;
  });
}

// ---------------------------------------------------------------------------
// L2Norm

double L2Norm::value(const Vector& x) const {
  check_point(x, "L2Norm");
  return norm2(x);
}

Vector L2Norm::prox(const Vector& x, double gamma) const {
  check_point(x, "L2Norm");
  check_gamma(gamma);
  double nx = norm2(x);
  if (nx <= gamma) return Vector(x.size(), 0.0);
  return scaled(x, 1.0 - gamma / nx);
}

LinOp L2Norm::jac_element(const Vector& x, double gamma) const {
  check_point(x, "L2Norm");
  check_gamma(gamma);
  double nx = norm2(x);
  if (nx <= gamma) return scale_op(0.0, identity_op(n_));  // zero-side limit at the tie
  Vector w = scaled(x, 1.0 / nx);
  double ratio = gamma / nx;
  // I - (gamma/||x||)(I - ww')
  return LinOp(n_, n_, [w, ratio](const Vector& v) {
    double wv = dot(w, v);
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = v[i] - ratio * (v[i] - wv * w[i]);
    return out;
  });
}

// ---------------------------------------------------------------------------
// L1Norm

L1Norm::L1Norm(int n, double lambda) : n_(n), lambda_(lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("L1Norm: lambda must be positive");
}

double L1Norm::value(const Vector& x) const {
  check_point(x, "L1Norm");
  double s = 0.0;
  for (double xi : x) s += std::fabs(xi);
  return lambda_ * s;
}

Vector L1Norm::prox(const Vector& x, double gamma) const {
  check_point(x, "L1Norm");
  check_gamma(gamma);
  double t = gamma * lambda_;
  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mag = std::fabs(x[i]) - t;
    p[i] = mag > 0.0 ? (x[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return p;
}

LinOp L1Norm::jac_element(const Vector& x, double gamma) const {
  check_point(x, "L1Norm");
  check_gamma(gamma);
  double t = gamma * lambda_;
  Vector d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = std::fabs(x[i]) > t ? 1.0 : 0.0;
  return diag_op(std::move(d));
}

// ---------------------------------------------------------------------------
// GroupL2Norm

GroupL2Norm::GroupL2Norm(std::vector<std::vector<int>> groups, double lambda)
    : groups_(std::move(groups)), lambda_(lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("GroupL2Norm: lambda must be positive");
  int count = 0;
  for (const auto& g : groups_) count += static_cast<int>(g.size());
  n_ = count;
  std::vector<bool> seen(n_, false);
  for (const auto& g : groups_) {
    if (g.empty()) throw std::invalid_argument("GroupL2Norm: empty group");
    for (int i : g) {
      if (i < 0 || i >= n_ || seen[i]) throw std::invalid_argument("GroupL2Norm: invalid partition");
      seen[i] = true;
    }
  }
}

double GroupL2Norm::value(const Vector& x) const {
  check_point(x, "GroupL2Norm");
  double s = 0.0;
  for (const auto& g : groups_) {
    double ns = 0.0;
    for (int i : g) ns += x[i] * x[i];
    s += std::sqrt(ns);
  }
  return lambda_ * s;
}

Vector GroupL2Norm::prox(const Vector& x, double gamma) const {
  check_point(x, "GroupL2Norm");
  check_gamma(gamma);
  double t = gamma * lambda_;
  Vector p(x.size(), 0.0);
  for (const auto& g : groups_) {
    double ns = 0.0;
    for (int i : g) ns += x[i] * x[i];
    ns = std::sqrt(ns);
    if (ns > t) {
      double shrink = 1.0 - t / ns;
      for (int i : g) p[i] = shrink * x[i];
    }
  }
  return p;
}

LinOp GroupL2Norm::jac_element(const Vector& x, double gamma) const {
  check_point(x, "GroupL2Norm");
  check_gamma(gamma);
  double t = gamma * lambda_;
  // per-block data: indices, shrink ratio, unit direction (empty block list for thresholded groups)
  struct Block {
    std::vector<int> idx;
    double ratio;
    Vector w;
  };
  auto blocks = std::make_shared<std::vector<Block>>();
  for (const auto& g : groups_) {
    double ns = 0.0;
    for (int i : g) ns += x[i] * x[i];
    ns = std::sqrt(ns);
    if (ns <= t) continue;  // prox constant 0 on this block
    Block b;
    b.idx = g;
    b.ratio = t / ns;
    b.w.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) b.w[k] = x[g[k]] / ns;
    blocks->push_back(std::move(b));
  }
  return LinOp(n_, n_, [blocks](const Vector& v) {
    Vector out(v.size(), 0.0);
    for (const auto& b : *blocks) {
      double wv = 0.0;
      for (std::size_t k = 0; k < b.idx.size(); ++k) wv += b.w[k] * v[b.idx[k]];
      for (std::size_t k = 0; k < b.idx.size(); ++k) {
        double vi = v[b.idx[k]];
        out[b.idx[k]] = vi - b.ratio * (vi - wv * b.w[k]);
      }
    }
    return out;
  });
}

// ---------------------------------------------------------------------------
// PartialL1

PartialL1::PartialL1(int n, double lambda) : n_(n), lambda_(lambda) {
  if (n < 2) throw std::invalid_argument("PartialL1: needs dimension >= 2");
  if (lambda <= 0.0) throw std::invalid_argument("PartialL1: lambda must be positive");
}

double PartialL1::value(const Vector& x) const {
  check_point(x, "PartialL1");
  double s = 0.0;
  for (int i = 0; i + 1 < n_; ++i) s += std::fabs(x[i]);
  return lambda_ * s;
}

Vector PartialL1::prox(const Vector& x, double gamma) const {
  check_point(x, "PartialL1");
  check_gamma(gamma);
  double t = gamma * lambda_;
  Vector p(x.size());
  for (int i = 0; i + 1 < n_; ++i) {
    double mag = std::fabs(x[i]) - t;
    p[i] = mag > 0.0 ? (x[i] > 0.0 ? mag : -mag) : 0.0;
  }
  p[n_ - 1] = x[n_ - 1];
  return p;
}

LinOp PartialL1::jac_element(const Vector& x, double gamma) const {
  check_point(x, "PartialL1");
  check_gamma(gamma);
  double t = gamma * lambda_;
  Vector d(x.size(), 0.0);
  for (int i = 0; i + 1 < n_; ++i) d[i] = std::fabs(x[i]) > t ? 1.0 : 0.0;
  d[n_ - 1] = 1.0;
  return diag_op(std::move(d));
}

// ---------------------------------------------------------------------------
// ConjugateProx

ConjugateProx::ConjugateProx(std::shared_ptr<const ProxOperator> base,
                             std::function<double(const Vector&)> value_fn)
    : base_(std::move(base)), value_fn_(std::move(value_fn)) {
  if (!base_) throw std::invalid_argument("ConjugateProx: null base");
}

double ConjugateProx::value(const Vector& x) const {
  check_point(x, "ConjugateProx");
  if (value_fn_) return value_fn_(x);
  // Fenchel lower bound at u = prox_{g/t}(x/t); exact as t -> 0
  const double t = 1e-10;
  Vector u = base_->prox(scaled(x, 1.0 / t), 1.0 / t);
  return dot(u, x) - base_->value(u);
}

Vector ConjugateProx::prox(const Vector& x, double gamma) const {
  check_point(x, "ConjugateProx");
  check_gamma(gamma);
  Vector u = base_->prox(scaled(x, 1.0 / gamma), 1.0 / gamma);
  Vector p = x;
  axpy(-gamma, u, p);
  return p;
}

std::pair<Vector, double> ConjugateProx::prox_and_value(const Vector& x, double gamma) const {
  check_point(x, "ConjugateProx");
  check_gamma(gamma);
  Vector u = base_->prox(scaled(x, 1.0 / gamma), 1.0 / gamma);
  Vector p = x;
  axpy(-gamma, u, p);
  // (x - p)/gamma = u is a subgradient of g* at p, so the Fenchel
  // inequality is tight and g*(p) = u'p - g(u) exactly.
  double v = dot(u, p) - base_->value(u);
  return {std::move(p), v};
}

LinOp ConjugateProx::jac_element(const Vector& x, double gamma) const {
  check_point(x, "ConjugateProx");
  check_gamma(gamma);
  LinOp q = base_->jac_element(scaled(x, 1.0 / gamma), 1.0 / gamma);
  return LinOp(dim(), dim(), [q](const Vector& v) {
    Vector out = v;
    axpy(-1.0, q.apply(v), out);
    return out;
  });
}

std::shared_ptr<ProxOperator> conjugate(std::shared_ptr<const ProxOperator> g) {
  return std::make_shared<ConjugateProx>(std::move(g));
}

std::shared_ptr<ProxOperator> make_box_support(Vector lower, Vector upper) {
  auto box = std::make_shared<BoxIndicator>(std::move(lower), std::move(upper));
  auto value = [box](const Vector& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += std::max(box->lower()[i] * x[i], box->upper()[i] * x[i]);
    return s;
  };
  return std::make_shared<ConjugateProx>(box, value);
}

std::shared_ptr<ProxOperator> make_pointwise_max(int n) {
  auto simplex = std::make_shared<SimplexIndicator>(n);
  auto value = [](const Vector& x) { return *std::max_element(x.begin(), x.end()); };
  return std::make_shared<ConjugateProx>(simplex, value);
}

}  // namespace fbn

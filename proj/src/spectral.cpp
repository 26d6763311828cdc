#include "fbn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fbn {

namespace {

double offdiag_frob(const DenseMatrix& a) {
  double s = 0.0;
  for (int j = 0; j < a.cols; ++j)
    for (int i = 0; i < a.rows; ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigDecomposition sym_eig(const DenseMatrix& x) {
  if (x.rows != x.cols) throw std::invalid_argument("sym_eig: matrix not square");
  const int n = x.rows;
  double scale = max_abs(x);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (std::fabs(x(i, j) - x(j, i)) > 1e-12 * (1.0 + scale))
        throw std::invalid_argument("sym_eig: matrix not symmetric");

  DenseMatrix a = symmetrized(x);
  DenseMatrix q = DenseMatrix::identity(n);
  const double tol = 1e-12 * std::max(frob_norm(a), 1e-300);
  const int max_sweeps = 60;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_frob(a) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        double apr = a(p, r);
        if (std::fabs(apr) <= tol / (double(n) * n)) continue;
        double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        // A <- G' A G on rows/columns p, r
        for (int k = 0; k < n; ++k) {
          double akp = a(k, p), akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a(p, k), ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

  EigDecomposition out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = q(i, order[j]);
  }
  return out;
}

DenseMatrix SvdDecomposition::v1() const {
  int k = std::min(m, n);
  DenseMatrix b(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) b(i, j) = v(i, j);
  return b;
}

DenseMatrix SvdDecomposition::v2() const {
  int k = std::min(m, n);
  DenseMatrix b(n, n - k);
  for (int j = 0; j < n - k; ++j)
    for (int i = 0; i < n; ++i) b(i, j) = v(i, j + k);
  return b;
}

SvdDecomposition svd(const DenseMatrix& x) {
  if (x.rows > x.cols) {
    // full factors swap roles under transposition
    SvdDecomposition t = svd(transpose(x));
    SvdDecomposition out;
    out.m = t.n;
    out.n = t.m;
    out.u = t.v;
    out.v = t.u;
    out.sigma = t.sigma;
    return out;
  }
  const int m = x.rows, n = x.cols;
  SvdDecomposition out;
  out.m = m;
  out.n = n;

  DenseMatrix b = symmetrized(matmul(x, transpose(x)));
  EigDecomposition eig = sym_eig(b);
  out.u = eig.vectors;
  out.sigma.assign(m, 0.0);
  for (int i = 0; i < m; ++i) out.sigma[i] = std::sqrt(std::max(eig.values[i], 0.0));
  double smax = out.sigma.empty() ? 0.0 : out.sigma[0];
  // rank cutoff at the noise floor of the Gram-matrix route: eigenvalues
  // carry O(m eps ||X||^2) error, so singular values below ~sqrt(eps)||X||
  // are indistinguishable from zero and must not define V directions
  double cutoff =
      smax * 16.0 * std::sqrt(static_cast<double>(m)) *
      std::sqrt(std::numeric_limits<double>::epsilon());

  out.v = DenseMatrix(n, n);
  int filled = 0;
  std::vector<bool> column_set(n, false);
  for (int i = 0; i < m; ++i) {
    if (out.sigma[i] <= cutoff) {
      out.sigma[i] = 0.0;
      continue;
    }
    Vector ui(m);
    for (int k = 0; k < m; ++k) ui[k] = out.u(k, i);
    Vector vi = matvec_t(x, ui);
    for (double& e : vi) e /= out.sigma[i];
    // modified Gram-Schmidt polish against earlier columns
    for (int j = 0; j < i; ++j) {
      if (!column_set[j]) continue;
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += out.v(k, j) * vi[k];
      for (int k = 0; k < n; ++k) vi[k] -= s * out.v(k, j);
    }
    double nv = norm2(vi);
    if (nv > 0.0)
      for (double& e : vi) e /= nv;
    for (int k = 0; k < n; ++k) out.v(k, i) = vi[k];
    column_set[i] = true;
    ++filled;
  }

  // complete the orthonormal basis (remaining v1 columns, then v2)
  auto orthogonalize = [&](Vector w) {
    for (int j = 0; j < n; ++j) {
      if (!column_set[j]) continue;
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += out.v(k, j) * w[k];
      for (int k = 0; k < n; ++k) w[k] -= s * out.v(k, j);
    }
    return w;
  };
  int basis_probe = 0;
  Rng rng(0x5eedu);
  for (int j = 0; j < n && filled < n; ++j) {
    if (column_set[j]) continue;
    Vector w;
    double nw = 0.0;
    while (true) {
      if (basis_probe < n) {
        w.assign(n, 0.0);
        w[basis_probe++] = 1.0;
      } else {
        w.resize(n);
        for (double& e : w) e = rng.gaussian();
      }
      w = orthogonalize(w);
      w = orthogonalize(w);  // twice for stability
      nw = norm2(w);
      if (nw > 0.1) break;
    }
    for (int k = 0; k < n; ++k) out.v(k, j) = w[k] / nw;
    column_set[j] = true;
    ++filled;
  }
  return out;
}

DenseMatrix psd_project(const DenseMatrix& x) {
  EigDecomposition eig = sym_eig(x);
  const int n = x.rows;
  DenseMatrix scaled_q(n, n);
  for (int j = 0; j < n; ++j) {
    double lp = std::max(eig.values[j], 0.0);
    for (int i = 0; i < n; ++i) scaled_q(i, j) = eig.vectors(i, j) * lp;
  }
  return symmetrized(matmul(scaled_q, transpose(eig.vectors)));
}

namespace {

DenseMatrix columns(const DenseMatrix& a, const std::vector<int>& idx) {
  DenseMatrix b(a.rows, static_cast<int>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (int i = 0; i < a.rows; ++i) b(i, static_cast<int>(j)) = a(i, idx[j]);
  return b;
}

// H + H' with H = Qa (1/2 (U Qa) Qa' + (K o (U Qb)) Qb'), U = Qa' S,
// K_ij = la_i / (la_i - lb_j). This touches only |a| rows of the basis.
DenseMatrix psd_lowrank_part(const DenseMatrix& qa, const DenseMatrix& qb, const Vector& la,
                             const Vector& lb, const DenseMatrix& s) {
  DenseMatrix u = matmul(transpose(qa), s);              // |a| x n
  DenseMatrix uqa = matmul(u, qa);                       // |a| x |a|
  DenseMatrix uqb = matmul(u, qb);                       // |a| x |b|
  for (int j = 0; j < uqb.cols; ++j)
    for (int i = 0; i < uqb.rows; ++i) uqb(i, j) *= la[i] / (la[i] - lb[j]);
  DenseMatrix h = matmul(qa, mat_add(matmul(mat_scaled(uqa, 0.5), transpose(qa)),
                                     matmul(uqb, transpose(qb))));
  return mat_add(h, transpose(h));
}

}  // namespace

DenseMatrix psd_jac_apply(const DenseMatrix& x, const DenseMatrix& s) {
  if (x.rows != x.cols || s.rows != s.cols || x.rows != s.rows)
    throw std::invalid_argument("psd_jac_apply: shape mismatch");
  return psd_jac_apply(sym_eig(x), s);
}

DenseMatrix psd_jac_apply(const EigDecomposition& eig, const DenseMatrix& s) {
  DenseMatrix ssym = symmetrized(s);
  const int n = s.rows;

  std::vector<int> pos, nonpos;
  for (int i = 0; i < n; ++i) (eig.values[i] > 0.0 ? pos : nonpos).push_back(i);
  if (nonpos.empty()) return ssym;           // all-ones Hadamard mask: identity action
  if (pos.empty()) return DenseMatrix(n, n);  // projection locally constant at 0

  Vector lpos(pos.size()), lneg(nonpos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) lpos[i] = eig.values[pos[i]];
  for (std::size_t i = 0; i < nonpos.size(); ++i) lneg[i] = eig.values[nonpos[i]];
  DenseMatrix qpos = columns(eig.vectors, pos);
  DenseMatrix qneg = columns(eig.vectors, nonpos);

  if (pos.size() <= nonpos.size()) {
    return psd_lowrank_part(qpos, qneg, lpos, lneg, ssym);
  }
  // complement form: P(S) = S - [mirrored low-rank part], where the mirror
  // weights are 1 - la/(la - lb) = -lb/(la - lb), i.e. the same kernel with
  // the sign groups swapped on the negated spectrum.
  Vector lneg_flip(lneg.size()), lpos_flip(lpos.size());
  for (std::size_t i = 0; i < lneg.size(); ++i) lneg_flip[i] = -lneg[i];
  for (std::size_t i = 0; i < lpos.size(); ++i) lpos_flip[i] = -lpos[i];
  DenseMatrix rest = psd_lowrank_part(qneg, qpos, lneg_flip, lpos_flip, ssym);
  return mat_sub(ssym, rest);
}

DenseMatrix nuclear_prox(const DenseMatrix& x, double t) {
  if (t <= 0.0) throw std::invalid_argument("nuclear_prox: threshold must be positive");
  if (x.rows > x.cols) return transpose(nuclear_prox(transpose(x), t));
  SvdDecomposition dec = svd(x);
  const int m = x.rows;
  DenseMatrix us(m, m);
  for (int j = 0; j < m; ++j) {
    double sv = std::max(dec.sigma[j] - t, 0.0);
    for (int i = 0; i < m; ++i) us(i, j) = dec.u(i, j) * sv;
  }
  return matmul(us, transpose(dec.v1()));
}

DenseMatrix nuclear_jac_apply(const DenseMatrix& x, const DenseMatrix& h, double t) {
  if (x.rows != h.rows || x.cols != h.cols)
    throw std::invalid_argument("nuclear_jac_apply: shape mismatch");
  if (x.rows > x.cols) return transpose(nuclear_jac_apply(transpose(x), transpose(h), t));
  return nuclear_jac_apply(svd(x), h, t);
}

DenseMatrix nuclear_jac_apply(const SvdDecomposition& dec, const DenseMatrix& h, double t) {
  if (t <= 0.0) throw std::invalid_argument("nuclear_jac_apply: threshold must be positive");
  if (dec.m > dec.n) throw std::invalid_argument("nuclear_jac_apply: decomposition needs m <= n");
  if (dec.m != h.rows || dec.n != h.cols)
    throw std::invalid_argument("nuclear_jac_apply: shape mismatch");

  const int m = dec.m, n = dec.n;
  const Vector& sg = dec.sigma;
  auto soft = [t](double s) { return std::max(s - t, 0.0); };
  auto dsoft = [t](double s) { return s > t ? 1.0 : 0.0; };  // zero-side limit at the tie

  DenseMatrix v1 = dec.v1();
  DenseMatrix h1 = matmul(transpose(dec.u), matmul(h, v1));  // m x m

  DenseMatrix block1(m, m);  // acts on the symmetric part of h1
  DenseMatrix block2(m, m);  // acts on the skew part of h1
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      double num1 = soft(sg[i]) - soft(sg[j]);
      double den1 = sg[i] - sg[j];
      double w1 = (den1 != 0.0) ? num1 / den1 : dsoft(sg[i]);
      double num2 = soft(sg[i]) + soft(sg[j]);
      double den2 = sg[i] + sg[j];
      double w2 = (den2 != 0.0) ? num2 / den2 : 0.0;
      double sym = 0.5 * (h1(i, j) + h1(j, i));
      double skew = 0.5 * (h1(i, j) - h1(j, i));
      block1(i, j) = w1 * sym;
      block2(i, j) = w2 * skew;
    }
  }
  DenseMatrix left = mat_add(block1, block2);

  DenseMatrix result(m, n);
  DenseMatrix part1 = matmul(matmul(dec.u, left), transpose(v1));
  if (n > m) {
    DenseMatrix v2 = dec.v2();
    DenseMatrix h2 = matmul(transpose(dec.u), matmul(h, v2));  // m x (n-m)
    for (int j = 0; j < n - m; ++j)
      for (int i = 0; i < m; ++i) h2(i, j) *= (sg[i] > 0.0) ? soft(sg[i]) / sg[i] : 0.0;
    DenseMatrix part2 = matmul(matmul(dec.u, h2), transpose(v2));
    result = mat_add(part1, part2);
  } else {
    result = part1;
  }
  return result;
}

}  // namespace fbn

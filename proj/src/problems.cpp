#include "fbn/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fbn/spectral.hpp"

namespace fbn {

namespace {

/// Symmetric matrix with the given spectrum, mixed by `rotations` random
/// Givens planes. The eigenvalues are exact whatever the mixing.
DenseMatrix rotated_spectrum(const Vector& eigs, long rotations, Rng& rng) {
  int n = static_cast<int>(eigs.size());
  DenseMatrix q(n, n);
  for (int i = 0; i < n; ++i) q(i, i) = eigs[i];
  for (long r = 0; r < rotations; ++r) {
    int p = rng.uniform_int(0, n - 1);
    int s = rng.uniform_int(0, n - 2);
    if (s >= p) ++s;
    double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    double c = std::cos(theta), sn = std::sin(theta);
    for (int k = 0; k < n; ++k) {
      double akp = q(k, p), aks = q(k, s);
      q(k, p) = c * akp - sn * aks;
      q(k, s) = sn * akp + c * aks;
    }
    for (int k = 0; k < n; ++k) {
      double apk = q(p, k), ask = q(s, k);
      q(p, k) = c * apk - sn * ask;
      q(s, k) = sn * apk + c * ask;
    }
  }
  return symmetrized(q);
}

Vector log_spaced(int n, double kappa) {
  Vector eigs(n);
  for (int i = 0; i < n; ++i)
    eigs[i] = n > 1 ? std::pow(kappa, static_cast<double>(i) / (n - 1)) : 1.0;
  return eigs;
}

}  // namespace

ProblemInstance gen_box_qp(int n, double density, double cond_kappa, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_box_qp: n must be >= 2");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("gen_box_qp: bad density");
  if (cond_kappa < 1.0) throw std::invalid_argument("gen_box_qp: kappa must be >= 1");
  Rng rng(seed * 0x100001b3ull + 17);

  Vector eigs = log_spaced(n, cond_kappa);
  long max_rot = static_cast<long>(n) * (n - 1) / 2;
  long rotations = static_cast<long>(std::ceil(density * static_cast<double>(max_rot)));
  DenseMatrix q_mat = rotated_spectrum(eigs, rotations, rng);

  // plant the unconstrained optimum so a controllable share of the box
  // becomes active: q = -Q z with z ~ N(0, 1.5^2)
  Vector z(n);
  for (double& e : z) e = 1.5 * rng.gaussian();
  Vector q_lin = scaled(matvec(q_mat, z), -1.0);

  auto f = std::make_shared<Quadratic>(q_mat, q_lin, CurvatureBounds{1.0, cond_kappa});
  auto g = std::make_shared<BoxIndicator>(n, -1.0, 1.0);

  ProblemInstance inst;
  inst.problem = make_problem(f, g);
  inst.family = "box_qp";
  inst.seed = seed;
  inst.params = {{"n", double(n)}, {"density", density}, {"kappa", cond_kappa}};
  return inst;
}

ProblemInstance gen_dual_qp(int n, int m, double cond_kappa, std::uint64_t seed) {
  if (n < 2 || m < 1) throw std::invalid_argument("gen_dual_qp: bad dimensions");
  if (cond_kappa < 1.0) throw std::invalid_argument("gen_dual_qp: kappa must be >= 1");
  Rng rng(seed * 0x100001b3ull + 41);

  Vector eigs = log_spaced(n, cond_kappa);
  DenseMatrix q_mat = rotated_spectrum(eigs, static_cast<long>(n) * (n - 1) / 2, rng);
  DenseMatrix a(m, n);
  for (double& e : a.data) e = rng.gaussian() / std::sqrt(static_cast<double>(n));
  Vector q_lin(n);
  for (double& e : q_lin) e = rng.gaussian();

  auto f = std::make_shared<DualQuadratic>(a, q_mat, q_lin);
  auto g = make_box_support(Vector(m, -1.0), Vector(m, 1.0));

  ProblemInstance inst;
  inst.problem = make_problem(f, std::move(g));
  inst.family = "dual_qp";
  inst.seed = seed;
  inst.params = {{"n", double(n)}, {"m", double(m)}, {"kappa", cond_kappa}};
  return inst;
}

ProblemInstance gen_lasso(int m, int n, double sparsity, std::uint64_t seed, double noise_scale) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_lasso: bad dimensions");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) throw std::invalid_argument("gen_lasso: bad sparsity");
  Rng rng(seed * 0x100001b3ull + 97);

  DenseMatrix a(m, n);
  for (double& e : a.data) e = rng.gaussian() / std::sqrt(static_cast<double>(m));

  int k = std::max(1, static_cast<int>(std::lround(sparsity * n)));
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.uniform_int(0, i)]);
  Vector x0(n, 0.0);
  for (int j = 0; j < k; ++j) x0[idx[j]] = rng.gaussian();

  Vector b = matvec(a, x0);
  double scale = noise_scale * norm2(b) / std::sqrt(static_cast<double>(m));
  for (double& e : b) e += scale * rng.gaussian();

  double lambda_max = norm_inf(matvec_t(a, b));
  double lambda = 0.1 * lambda_max;

  auto f = std::make_shared<LeastSquares>(a, b);
  auto family = [f, n](double lam) {
    return make_problem(f, std::make_shared<L1Norm>(n, lam));
  };

  ProblemInstance inst;
  inst.problem = family(lambda);
  inst.family = "lasso";
  inst.seed = seed;
  inst.params = {{"m", double(m)}, {"n", double(n)}, {"sparsity", sparsity},
                 {"noise_scale", noise_scale}};
  inst.lambda = lambda;
  inst.lambda_max = lambda_max;
  inst.lambda_family = family;
  inst.planted = x0;
  return inst;
}

ProblemInstance gen_logreg(int m, int n, int nnz_per_row, std::uint64_t seed) {
  if (m < 1 || n < 2) throw std::invalid_argument("gen_logreg: bad dimensions");
  int features = n - 1;  // trailing column is the bias
  nnz_per_row = std::min(nnz_per_row, features);
  if (nnz_per_row < 1) throw std::invalid_argument("gen_logreg: bad nnz_per_row");
  Rng rng(seed * 0x100001b3ull + 131);

  // planted weights on ~10% of the features
  Vector w(features, 0.0);
  int active = std::max(1, features / 10);
  std::vector<int> idx(features);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = features - 1; i > 0; --i) std::swap(idx[i], idx[rng.uniform_int(0, i)]);
  for (int j = 0; j < active; ++j) w[idx[j]] = rng.gaussian();
  double bias = 0.1 * rng.gaussian();

  SparseMatrix a(m, n);
  std::vector<int> cols(features);
  std::iota(cols.begin(), cols.end(), 0);
  for (int i = 0; i < m; ++i) {
    for (int c = features - 1; c > 0; --c) std::swap(cols[c], cols[rng.uniform_int(0, c)]);
    double margin = bias;
    // sorted feature indices keep the triplet layout deterministic and tidy
    std::vector<int> picked(cols.begin(), cols.begin() + nnz_per_row);
    std::sort(picked.begin(), picked.end());
    std::vector<double> vals(picked.size());
    for (std::size_t c = 0; c < picked.size(); ++c) {
      vals[c] = rng.uniform() < 0.5 ? -1.0 : 1.0;
      margin += vals[c] * w[picked[c]];
    }
    double label = (margin + 0.1 * rng.gaussian()) >= 0.0 ? 1.0 : -1.0;
    for (std::size_t c = 0; c < picked.size(); ++c) a.add(i, picked[c], label * vals[c]);
    a.add(i, n - 1, label);  // bias column, folded with the label
  }

  auto f = std::make_shared<Logistic>(a);
  // weight above which every regularized coordinate stays at zero
  Vector grad0 = f->gradient(Vector(n, 0.0));
  grad0[n - 1] = 0.0;
  double lambda_max = norm_inf(grad0);
  double lambda = 1.0;

  auto family = [f, n](double lam) {
    return make_problem(f, std::make_shared<PartialL1>(n, lam));
  };

  ProblemInstance inst;
  inst.problem = family(lambda);
  inst.family = "logreg";
  inst.seed = seed;
  inst.params = {{"m", double(m)}, {"n", double(n)}, {"nnz_per_row", double(nnz_per_row)}};
  inst.lambda = lambda;
  inst.lambda_max = lambda_max;
  inst.lambda_family = family;
  return inst;
}

ProblemInstance gen_matcomp(int m, int n, int rank, double density, double lambda,
                            std::uint64_t seed) {
  if (m < 1 || n < 1 || rank < 1) throw std::invalid_argument("gen_matcomp: bad dimensions");
  if (!(density > 0.0 && density <= 1.0)) throw std::invalid_argument("gen_matcomp: bad density");
  if (!(lambda > 0.0)) throw std::invalid_argument("gen_matcomp: lambda must be positive");
  Rng rng(seed * 0x100001b3ull + 173);

  DenseMatrix m1(m, rank), m2(n, rank);
  for (double& e : m1.data) e = rng.gaussian();
  for (double& e : m2.data) e = rng.gaussian();
  DenseMatrix truth = matmul(m1, transpose(m2));

  long total = static_cast<long>(m) * n;
  long k = std::max<long>(1, std::lround(density * static_cast<double>(total)));
  std::vector<int> perm(total);
  std::iota(perm.begin(), perm.end(), 0);
  for (long i = total - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.uniform_int(0, static_cast<int>(i))]);
  std::vector<int> observed(perm.begin(), perm.begin() + k);
  std::sort(observed.begin(), observed.end());

  Vector truth_vec = mat_to_vec(truth);
  Vector b(observed.size());
  for (std::size_t j = 0; j < observed.size(); ++j) b[j] = truth_vec[observed[j]];

  auto f = std::make_shared<SelectionLeastSquares>(observed, b, m * n);
  auto family = [f, m, n](double lam) {
    return make_problem(f, std::make_shared<NuclearNorm>(m, n, lam));
  };

  // spectral norm of the observed-entry matrix = weight above which 0 is optimal
  DenseMatrix b_mat(m, n);
  for (std::size_t j = 0; j < observed.size(); ++j) b_mat.data[observed[j]] = b[j];
  SvdDecomposition bsvd = svd(b_mat);
  double lambda_max = bsvd.sigma.empty() ? 0.0 : bsvd.sigma[0];

  ProblemInstance inst;
  inst.problem = family(lambda);
  inst.family = "matcomp";
  inst.seed = seed;
  inst.params = {{"m", double(m)}, {"n", double(n)}, {"rank", double(rank)},
                 {"density", density}};
  inst.lambda = lambda;
  inst.lambda_max = lambda_max;
  inst.lambda_family = family;
  inst.ground_truth = truth;
  inst.low_density_warning =
      density < static_cast<double>(rank) * (m + n) / static_cast<double>(total);
  return inst;
}

bool compute_reference(ProblemInstance& instance, double tol, int max_iter) {
  SolverConfig config;
  config.tol = tol;
  config.max_iter = max_iter;
  SolveResult res = afbs_solve(instance.problem, config, zeros(instance.problem.dim()));
  FbeEvaluation check = evaluate(instance.problem, res.x);
  if (check.residual_inf > 1e-10) return false;
  instance.x_star = res.x;
  instance.f_star = res.f_final;
  instance.problem.x_star = res.x;
  instance.problem.f_star = res.f_final;
  return true;
}

}  // namespace fbn

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "fbn/fbe.hpp"
#include "fbn/matrixprox.hpp"
#include "fbn/solvers.hpp"
#include "fbn/sparse.hpp"

namespace fbn {

/// A generated benchmark instance: the composite problem, the generator
/// fingerprint (family, parameters, seed), and optional extras —
/// regularization path hooks, a high-accuracy reference solution and the
/// generator's ground truth. Generators are pure functions of
/// (parameters, seed).
struct ProblemInstance {
  CompositeProblem problem;
  std::string family;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;

  double lambda = 0.0;      // regularization weight in use (0 for QP families)
  double lambda_max = 0.0;  // weight above which the null solution is optimal
  /// Rebuilds the composite at another weight (set for lasso/logreg/matcomp).
  std::function<CompositeProblem(double)> lambda_family;

  std::optional<Vector> x_star;
  std::optional<double> f_star;
  std::optional<DenseMatrix> ground_truth;  // matcomp: the planted low-rank matrix
  std::optional<Vector> planted;            // lasso: the planted sparse vector
  bool low_density_warning = false;

  bool has_reference() const { return x_star.has_value() && f_star.has_value(); }
};

/// Box QP: f = 1/2 x'Qx + q'x with a log-spaced spectrum on [1, kappa]
/// rotated by random Givens planes (density scales how many), g the
/// indicator of [-1, 1]^n. Curvature bounds are exact by construction.
ProblemInstance gen_box_qp(int n, double density, double cond_kappa, std::uint64_t seed);

/// Fenchel dual of a QP with constraint l <= Ax <= u: the smooth part is
/// w -> 1/2 (A'w+q)'Q^{-1}(A'w+q) over the m dual variables, the
/// nonsmooth part the support function of the box.
ProblemInstance gen_dual_qp(int n, int m, double cond_kappa, std::uint64_t seed);

/// l1-regularized least squares with a planted sparse solution;
/// noise_scale is relative to ||Ax0||/sqrt(m). lambda defaults to
/// 0.1 lambda_max; use lambda_family for other weights.
ProblemInstance gen_lasso(int m, int n, double sparsity, std::uint64_t seed,
                          double noise_scale = 0.01);

/// l1-regularized logistic regression with sparse +-1 features, a bias
/// column, and labels from a planted weight vector. nnz_per_row counts
/// the nonzero features per sample.
ProblemInstance gen_logreg(int m, int n, int nnz_per_row, std::uint64_t seed);

/// Matrix completion: observe density*m*n entries of a planted rank-r
/// matrix, g = lambda * nuclear norm over vec(X). Flags instances whose
/// sample budget is below rank*(m+n) observations.
ProblemInstance gen_matcomp(int m, int n, int rank, double density, double lambda,
                            std::uint64_t seed);

/// Runs accelerated forward-backward splitting from zero until
/// ||G_gamma||_inf <= tol (default 1e-14, capped at max_iter) and stores
/// (x*, F*) on the instance when the residual certifies below 1e-10.
/// Returns whether a reference was attached.
bool compute_reference(ProblemInstance& instance, double tol = 1e-14, int max_iter = 1000000);

}  // namespace fbn

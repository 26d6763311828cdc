#pragma once

#include "fbn/dense.hpp"

namespace fbn {

struct EigDecomposition {
  DenseMatrix vectors;  // orthogonal, one eigenvector per column
  Vector values;        // nonincreasing
};

/// Dense symmetric eigendecomposition by cyclic Jacobi rotations, run to
/// off-diagonal Frobenius norm <= 1e-12 * ||X||_F. Input must be
/// symmetric to 1e-12 relative; anything else throws.
EigDecomposition sym_eig(const DenseMatrix& x);

struct SvdDecomposition {
  int m = 0;
  int n = 0;
  DenseMatrix u;       // m-by-m orthogonal
  Vector sigma;        // min(m,n) singular values, nonincreasing, >= 0
  DenseMatrix v;       // n-by-n orthogonal, columns [v1 | v2]
  DenseMatrix v1() const;  // n-by-m
  DenseMatrix v2() const;  // n-by-(n-m), trailing null directions
};

/// Full SVD via the eigendecomposition of X X'. Handles m > n through a
/// transpose wrapper. The full V (including the basis of the trailing
/// null space) is kept because the generalized Jacobian of spectral
/// proximal mappings acts on it.
SvdDecomposition svd(const DenseMatrix& x);

/// Projection onto the positive semidefinite cone.
DenseMatrix psd_project(const DenseMatrix& x);

/// Action S -> P(S) of one element of the B-subdifferential of the PSD
/// projection at x. Uses the low-rank form that touches only the rows
/// and columns of the smaller of the two eigenvalue-sign groups.
DenseMatrix psd_jac_apply(const DenseMatrix& x, const DenseMatrix& s);
/// Same action with the eigendecomposition of x already in hand (one
/// factorization shared across the many products of a CG solve).
DenseMatrix psd_jac_apply(const EigDecomposition& eig, const DenseMatrix& s);

/// Singular value soft-thresholding with threshold t > 0.
DenseMatrix nuclear_prox(const DenseMatrix& x, double t);

/// Action H -> P(H) of one element of the B-subdifferential of the
/// singular-value soft-thresholding map at x. At threshold ties the
/// zero-side limit is selected, matching the vector prox policy.
DenseMatrix nuclear_jac_apply(const DenseMatrix& x, const DenseMatrix& h, double t);
/// Same action from a precomputed SVD (requires dec.m <= dec.n).
DenseMatrix nuclear_jac_apply(const SvdDecomposition& dec, const DenseMatrix& h, double t);

}  // namespace fbn

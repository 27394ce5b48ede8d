#pragma once

#include "torth/matrix.hpp"

namespace torth {

/// Thin QR factors: q is p x m with orthonormal columns, r is m x m upper
/// triangular with non-negative diagonal. The sign convention makes the
/// factorization unique for full-rank input.
struct QRFactors {
    Matrix q;
    Matrix r;
};

/// Householder QR of a p x m matrix, p >= m. Throws RankDeficient (with the
/// offending column index) when |r(i,i)| < 1e-14 * ||input||_F.
QRFactors householder_qr(const Matrix& m);

struct SVD {
    Matrix u;                 // rows x k, orthonormal columns
    std::vector<double> s;    // k singular values, non-increasing
    Matrix v;                 // cols x k, orthonormal columns
};

/// One-sided Jacobi SVD for dense matrices (k = min(rows, cols)).
SVD svd_small(const Matrix& m);

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // columns are eigenvectors, same order
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
EigenDecomposition sym_eig(const SymMatrix& a);

/// Largest singular value. Dense SVD for small inputs, power iteration on
/// M^T M otherwise.
double spectral_norm(const Matrix& m);

/// Upper-triangular Cholesky factor R with R^T R = a. Throws
/// std::runtime_error when a is not positive definite.
Matrix cholesky_upper(const SymMatrix& a);

}  // namespace torth

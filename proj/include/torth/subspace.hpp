#pragma once

#include "torth/linalg.hpp"
#include "torth/matrix.hpp"

namespace torth {

/// A p x m basis. Orthonormal-flavored bases (QR output) satisfy
/// ||Q^T Q - I||_F <= 1e-10 sqrt(m); sparse-unit-flavored bases (post
/// truncation) only promise unit-norm columns.
struct Basis {
    Matrix cols;

    index_t p() const { return cols.rows(); }
    index_t m() const { return cols.cols(); }
};

/// Canonical angles in [0, pi/2], ascending.
struct AngleSpectrum {
    std::vector<double> thetas;
};

/// arccos of the singular values of X^T Y.
AngleSpectrum canonical_angles(const Basis& x, const Basis& y);

/// sqrt(m - ||X^T Y||_F^2), clamped at zero. Equals
/// (1/sqrt(2)) ||XX^T - YY^T||_F for orthonormal bases.
double sin_theta_fro(const Basis& x, const Basis& y);

/// Sine of the largest canonical angle, computed as the largest singular
/// value of (I - XX^T) Y without materializing the complement.
double sin_theta_two(const Basis& x, const Basis& y);

/// ||I - Q^T Q||_F^2
double orthogonality_loss(const Basis& q);

}  // namespace torth

#include "torth/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace torth {

namespace {
void check_pair(const Basis& x, const Basis& y) {
    if (x.p() != y.p() || x.m() != y.m())
        throw DimensionMismatch("subspace bases must share p and m");
}
}  // namespace

AngleSpectrum canonical_angles(const Basis& x, const Basis& y) {
    check_pair(x, y);
    SVD d = svd_small(matmul(x.cols.transposed(), y.cols));
    AngleSpectrum out;
    out.thetas.reserve(d.s.size());
    // Singular values descending -> angles ascending. Clamp before arccos,
    // rounding can push a cosine past 1.
    for (double sigma : d.s) out.thetas.push_back(std::acos(std::clamp(sigma, 0.0, 1.0)));
    return out;
}

double sin_theta_fro(const Basis& x, const Basis& y) {
    check_pair(x, y);
    // sum of sin^2 equals ||(I - XX^T) Y||_F^2; the residual form keeps full
    // precision near zero, where m - ||X^T Y||_F^2 cancels catastrophically
    const Matrix residual = y.cols - matmul(x.cols, matmul(x.cols.transposed(), y.cols));
    return std::min(frobenius_norm(residual), std::sqrt(static_cast<double>(x.m())));
}

double sin_theta_two(const Basis& x, const Basis& y) {
    check_pair(x, y);
    // (I - XX^T) Y = Y - X (X^T Y)
    const Matrix residual = y.cols - matmul(x.cols, matmul(x.cols.transposed(), y.cols));
    SVD d = svd_small(residual);
    return d.s.empty() ? 0.0 : std::min(1.0, d.s.front());
}

double orthogonality_loss(const Basis& q) {
    const Matrix g = matmul(q.cols.transposed(), q.cols);
    double s = 0.0;
    for (index_t i = 0; i < g.rows(); ++i)
        for (index_t j = 0; j < g.cols(); ++j) {
            const double d = (i == j ? 1.0 : 0.0) - g(i, j);
            s += d * d;
        }
    return s;
}

}  // namespace torth

#include "torth/matrix.hpp"

#include <cmath>
#include <utility>

namespace torth {

Matrix::Matrix(index_t rows, index_t cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), fill) {
    if (rows < 1 || cols < 1) throw DimensionMismatch("matrix dimensions must be >= 1");
    if (!std::isfinite(fill)) throw NonFiniteEntry("non-finite matrix entry");
}

Matrix::Matrix(index_t rows, index_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows < 1 || cols < 1) throw DimensionMismatch("matrix dimensions must be >= 1");
    if (data_.size() != static_cast<size_t>(rows * cols))
        throw DimensionMismatch("entry count does not match rows*cols");
    check_finite();
}

Matrix Matrix::identity(index_t n) {
    Matrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(std::span<const double> values) {
    auto n = static_cast<index_t>(values.size());
    Matrix m(n, n);
    for (index_t i = 0; i < n; ++i) m(i, i) = values[i];
    return m;
}

std::vector<double> Matrix::col(index_t j) const {
    std::vector<double> v(static_cast<size_t>(rows_));
    for (index_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_col(index_t j, std::span<const double> v) {
    if (static_cast<index_t>(v.size()) != rows_)
        throw DimensionMismatch("column length mismatch");
    for (index_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::columns(index_t first, index_t count) const {
    Matrix out(rows_, count);
    for (index_t i = 0; i < rows_; ++i)
        for (index_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
    return out;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (index_t i = 0; i < rows_; ++i)
        for (index_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator+(const Matrix& other) const {
    if (!same_shape(other)) throw DimensionMismatch("shape mismatch in +");
    Matrix out = *this;
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
    if (!same_shape(other)) throw DimensionMismatch("shape mismatch in -");
    Matrix out = *this;
    for (size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
}

Matrix& Matrix::operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
}

void Matrix::check_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) throw NonFiniteEntry("non-finite matrix entry");
}

SymMatrix::SymMatrix(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("SymMatrix requires a square input");
    a.check_finite();
    Matrix s(a.rows(), a.cols());
    for (index_t i = 0; i < a.rows(); ++i) {
        s(i, i) = a(i, i);
        for (index_t j = i + 1; j < a.cols(); ++j) {
            double v = 0.5 * (a(i, j) + a(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    m_ = std::move(s);
}

SymMatrix SymMatrix::from_symmetric_parts(Matrix a) {
    SymMatrix s;
    s.m_ = std::move(a);
    return s;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (index_t i = 0; i < dim(); ++i) t += m_(i, i);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    const index_t n = a.rows(), k = a.cols(), m = b.cols();
    if (m <= 4) {
        // Skinny b: gather its columns contiguously and stream each row of a
        // exactly once, accumulating all output columns in registers.  The
        // per-column accumulation order over l matches the general path.
        std::vector<double> bt(static_cast<size_t>(m * k));
        for (index_t j = 0; j < m; ++j)
            for (index_t l = 0; l < k; ++l) bt[static_cast<size_t>(j * k + l)] = b(l, j);
        for (index_t i = 0; i < n; ++i) {
            const double* ai = a.data().data() + i * k;
            double* ci = c.data().data() + i * m;
            if (m == 1) {
                double s0 = 0.0;
                for (index_t l = 0; l < k; ++l) s0 += ai[l] * bt[static_cast<size_t>(l)];
                ci[0] = s0;
            } else if (m == 2) {
                const double* b0 = bt.data();
                const double* b1 = b0 + k;
                double s0 = 0.0, s1 = 0.0;
                for (index_t l = 0; l < k; ++l) {
                    s0 += ai[l] * b0[l];
                    s1 += ai[l] * b1[l];
                }
                ci[0] = s0;
                ci[1] = s1;
            } else if (m == 3) {
                const double* b0 = bt.data();
                const double* b1 = b0 + k;
                const double* b2 = b1 + k;
                double s0 = 0.0, s1 = 0.0, s2 = 0.0;
                for (index_t l = 0; l < k; ++l) {
                    s0 += ai[l] * b0[l];
                    s1 += ai[l] * b1[l];
                    s2 += ai[l] * b2[l];
                }
                ci[0] = s0;
                ci[1] = s1;
                ci[2] = s2;
            } else {
                const double* b0 = bt.data();
                const double* b1 = b0 + k;
                const double* b2 = b1 + k;
                const double* b3 = b2 + k;
                double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
                for (index_t l = 0; l < k; ++l) {
                    s0 += ai[l] * b0[l];
                    s1 += ai[l] * b1[l];
                    s2 += ai[l] * b2[l];
                    s3 += ai[l] * b3[l];
                }
                ci[0] = s0;
                ci[1] = s1;
                ci[2] = s2;
                ci[3] = s3;
            }
        }
        return c;
    }
    // i-k-j order keeps the inner loop contiguous over rows of b and c.
    for (index_t i = 0; i < n; ++i) {
        double* ci = c.data().data() + i * m;
        for (index_t l = 0; l < k; ++l) {
            const double ail = a(i, l);
            if (ail == 0.0) continue;
            const double* bl = b.data().data() + l * m;
            for (index_t j = 0; j < m; ++j) ci[j] += ail * bl[j];
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (static_cast<index_t>(x.size()) != a.cols())
        throw DimensionMismatch("matvec: length mismatch");
    std::vector<double> y(static_cast<size_t>(a.rows()), 0.0);
    for (index_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        auto r = a.row(i);
        for (index_t j = 0; j < a.cols(); ++j) s += r[j] * x[j];
        y[static_cast<size_t>(i)] = s;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double x : m.data()) s += x * x;
    return std::sqrt(s);
}

}  // namespace torth

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace torth {

using index_t = std::ptrdiff_t;

/// Thrown when operand shapes are incompatible.
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown by QR when a diagonal entry of R collapses; carries the column.
struct RankDeficient : std::runtime_error {
    index_t column;
    explicit RankDeficient(index_t col)
        : std::runtime_error("rank-deficient input at column " + std::to_string(col)),
          column(col) {}
};

struct NonFiniteEntry : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of doubles. Entries are validated finite at
/// construction; all operations on it are pure.
class Matrix {
public:
    Matrix() = default;
    Matrix(index_t rows, index_t cols, double fill = 0.0);
    Matrix(index_t rows, index_t cols, std::vector<double> entries);

    static Matrix identity(index_t n);
    static Matrix diag(std::span<const double> values);

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }

    double& operator()(index_t i, index_t j) { return data_[i * cols_ + j]; }
    double operator()(index_t i, index_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(index_t i) const {
        return {data_.data() + i * cols_, static_cast<size_t>(cols_)};
    }
    std::span<double> row(index_t i) {
        return {data_.data() + i * cols_, static_cast<size_t>(cols_)};
    }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    std::vector<double> col(index_t j) const;
    void set_col(index_t j, std::span<const double> v);
    Matrix columns(index_t first, index_t count) const;

    Matrix transposed() const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix& operator*=(double s);
    friend Matrix operator*(double s, Matrix m) { m *= s; return m; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    /// Throws NonFiniteEntry if any entry is NaN or Inf.
    void check_finite() const;

private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<double> data_;
};

/// Symmetric matrix. Symmetrized exactly at construction via (A+A^T)/2.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& a);
    static SymMatrix from_symmetric_parts(Matrix a);  // trusts a == a^T already

    index_t dim() const { return m_.rows(); }
    double operator()(index_t i, index_t j) const { return m_(i, j); }
    const Matrix& as_matrix() const { return m_; }

    double trace() const;

private:
    Matrix m_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double frobenius_norm(const Matrix& m);

}  // namespace torth

#pragma once

#include <memory>
#include <vector>

#include "torth/matrix.hpp"

namespace torth {

/// Symmetric PSD operator accessed only through products, so that
/// covariance matrices (X^T X) and deflated operators never need
/// materializing.
class SymOperator {
public:
    virtual ~SymOperator() = default;
    virtual index_t dim() const = 0;
    virtual Matrix apply(const Matrix& q) const = 0;

    std::vector<double> apply_vec(std::span<const double> v) const;

    /// Dense p x p realization; intended for p small enough to afford it.
    Matrix materialize() const;
};

class DenseOperator final : public SymOperator {
public:
    explicit DenseOperator(SymMatrix a) : a_(std::move(a)) {}
    index_t dim() const override { return a_.dim(); }
    Matrix apply(const Matrix& q) const override { return matmul(a_.as_matrix(), q); }
    const SymMatrix& matrix() const { return a_; }

private:
    SymMatrix a_;
};

/// A = X^T X applied lazily as X^T (X q); O(npm) per block product.
class GramOperator final : public SymOperator {
public:
    explicit GramOperator(Matrix data) : x_(std::move(data)) {}
    index_t dim() const override { return x_.cols(); }
    Matrix apply(const Matrix& q) const override {
        return matmul(x_.transposed(), matmul(x_, q));
    }
    const Matrix& data() const { return x_; }

private:
    Matrix x_;
};

/// Projection deflation: v -> prod(I - u_i u_i^T) A prod(I - u_i u_i^T) v,
/// with the projectors applied vector by vector.
class DeflationState {
public:
    explicit DeflationState(std::shared_ptr<const SymOperator> base)
        : base_(std::move(base)) {}

    /// Returns a new state with u appended to the deflated directions.
    DeflationState deflate(std::vector<double> u) const;

    index_t dim() const { return base_->dim(); }
    const std::vector<std::vector<double>>& found() const { return found_; }

    std::shared_ptr<const SymOperator> as_operator() const;

private:
    std::shared_ptr<const SymOperator> base_;
    std::vector<std::vector<double>> found_;
};

}  // namespace torth

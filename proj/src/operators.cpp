#include "torth/operators.hpp"

#include <cmath>

namespace torth {

std::vector<double> SymOperator::apply_vec(std::span<const double> v) const {
    Matrix q(dim(), 1);
    for (index_t i = 0; i < dim(); ++i) q(i, 0) = v[static_cast<size_t>(i)];
    Matrix r = apply(q);
    return r.col(0);
}

Matrix SymOperator::materialize() const {
    return apply(Matrix::identity(dim()));
}

namespace {

class DeflatedOperator final : public SymOperator {
public:
    DeflatedOperator(std::shared_ptr<const SymOperator> base,
                     std::vector<std::vector<double>> found)
        : base_(std::move(base)), found_(std::move(found)) {}

    index_t dim() const override { return base_->dim(); }

    Matrix apply(const Matrix& q) const override {
        Matrix w = project(q);
        w = base_->apply(w);
        return project(w);
    }

private:
    Matrix project(const Matrix& q) const {
        Matrix w = q;
        for (const auto& u : found_) {
            for (index_t j = 0; j < w.cols(); ++j) {
                double s = 0.0;
                for (index_t i = 0; i < w.rows(); ++i)
                    s += u[static_cast<size_t>(i)] * w(i, j);
                for (index_t i = 0; i < w.rows(); ++i)
                    w(i, j) -= s * u[static_cast<size_t>(i)];
            }
        }
        return w;
    }

    std::shared_ptr<const SymOperator> base_;
    std::vector<std::vector<double>> found_;
};

}  // namespace

DeflationState DeflationState::deflate(std::vector<double> u) const {
    const double n = norm2(u);
    if (std::abs(n - 1.0) > 1e-8)
        throw DimensionMismatch("deflate: direction must be unit norm");
    DeflationState next = *this;
    next.found_.push_back(std::move(u));
    return next;
}

std::shared_ptr<const SymOperator> DeflationState::as_operator() const {
    if (found_.empty()) return base_;
    return std::make_shared<DeflatedOperator>(base_, found_);
}

}  // namespace torth

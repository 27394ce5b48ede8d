#include "torth/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace torth {

bool SupportSet::contains(index_t i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

index_t CardinalityProfile::min() const {
    return *std::min_element(k.begin(), k.end());
}

index_t CardinalityProfile::max() const {
    return *std::max_element(k.begin(), k.end());
}

SupportSet supp(std::span<const double> v, index_t k) {
    const auto p = static_cast<index_t>(v.size());
    if (k < 1 || k > p) throw DimensionMismatch("supp: k out of range");

    std::vector<index_t> idx(static_cast<size_t>(p));
    std::iota(idx.begin(), idx.end(), index_t{0});
    auto larger = [&](index_t a, index_t b) {
        const double va = std::abs(v[static_cast<size_t>(a)]);
        const double vb = std::abs(v[static_cast<size_t>(b)]);
        if (va != vb) return va > vb;
        return a < b;  // deterministic tie-break
    };
    std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), larger);
    idx.resize(static_cast<size_t>(k));
    std::sort(idx.begin(), idx.end());
    return {std::move(idx)};
}

std::vector<double> truncate(std::span<const double> v, const SupportSet& f) {
    std::vector<double> out(v.size(), 0.0);
    for (index_t i : f.indices) {
        if (i < 0 || i >= static_cast<index_t>(v.size()))
            throw DimensionMismatch("truncate: support index out of bounds");
        out[static_cast<size_t>(i)] = v[static_cast<size_t>(i)];
    }
    return out;
}

Matrix truncate_columns(const Matrix& m, const CardinalityProfile& k) {
    if (static_cast<index_t>(k.k.size()) != m.cols())
        throw DimensionMismatch("truncate_columns: profile length mismatch");
    Matrix out(m.rows(), m.cols());
    for (index_t j = 0; j < m.cols(); ++j) {
        const auto c = m.col(j);
        const auto f = supp(c, k.k[static_cast<size_t>(j)]);
        for (index_t i : f.indices) out(i, j) = c[static_cast<size_t>(i)];
    }
    return out;
}

std::vector<double> threshold(std::span<const double> v, const ThresholdRule& rule) {
    if (rule.level < 0.0) throw DimensionMismatch("threshold: negative level");
    std::vector<double> out(v.size(), 0.0);
    const double t = rule.level;
    for (size_t i = 0; i < v.size(); ++i) {
        const double y = v[i];
        if (rule.kind == ThresholdKind::hard) {
            out[i] = std::abs(y) >= t ? y : 0.0;
        } else {
            const double mag = std::abs(y) - t;
            out[i] = mag > 0.0 ? (y > 0 ? mag : -mag) : 0.0;
        }
    }
    return out;
}

double truncation_error_bound(index_t k_bar_max, index_t k_min, index_t p, index_t m) {
    if (k_min < 1 || k_min > p || k_bar_max > p)
        throw DimensionMismatch("truncation_error_bound: counts out of range");
    const index_t inner = std::min(k_bar_max, p - k_min);
    return 2.0 * static_cast<double>(m) *
           std::sqrt(static_cast<double>(inner) / static_cast<double>(p));
}

}  // namespace torth

#pragma once

#include "torth/matrix.hpp"

namespace torth {

/// Strictly increasing index set, |indices| = k.
struct SupportSet {
    std::vector<index_t> indices;

    index_t k() const { return static_cast<index_t>(indices.size()); }
    bool contains(index_t i) const;
};

/// Per-column sparsity budgets K = [k_1 .. k_m].
struct CardinalityProfile {
    std::vector<index_t> k;

    static CardinalityProfile uniform(index_t m, index_t level) {
        return {std::vector<index_t>(static_cast<size_t>(m), level)};
    }
    index_t min() const;
    index_t max() const;
    bool operator==(const CardinalityProfile&) const = default;
};

enum class ThresholdKind { hard, soft };

struct ThresholdRule {
    ThresholdKind kind = ThresholdKind::hard;
    double level = 0.0;  // >= 0
};

/// Indices of the k largest |v_i|; ties broken by smaller index.
SupportSet supp(std::span<const double> v, index_t k);

/// Keep entries in f, zero elsewhere.
std::vector<double> truncate(std::span<const double> v, const SupportSet& f);

/// Column i of the result is truncate(col_i, supp(col_i, k_i)).
Matrix truncate_columns(const Matrix& m, const CardinalityProfile& k);

/// Entrywise hard or soft thresholding at rule.level.
std::vector<double> threshold(std::span<const double> v, const ThresholdRule& rule);

/// delta_Truncate = 2 m sqrt(min{k_bar_max, p - k_min} / p)
double truncation_error_bound(index_t k_bar_max, index_t k_min, index_t p, index_t m);

}  // namespace torth

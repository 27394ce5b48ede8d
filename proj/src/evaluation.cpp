#include "torth/evaluation.hpp"

#include "torth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace torth {

namespace {

double sum_sq_diag(const Matrix& r) {
    double s = 0.0;
    for (index_t i = 0; i < std::min(r.rows(), r.cols()); ++i) s += r(i, i) * r(i, i);
    return s;
}

SymMatrix projected_cov(const SymMatrix& cov, const Basis& v) {
    const Matrix av = matmul(cov.as_matrix(), v.cols);
    return SymMatrix(matmul(v.cols.transposed(), av));
}

}  // namespace

double adjusted_variance(const Matrix& data, const Basis& v) {
    const Matrix y = matmul(data, v.cols);
    try {
        return sum_sq_diag(householder_qr(y).r);
    } catch (const RankDeficient&) {
        throw DegenerateLoadings("component scores are rank deficient");
    }
}

double adjusted_variance(const SymMatrix& cov, const Basis& v) {
    try {
        return sum_sq_diag(cholesky_upper(projected_cov(cov, v)));
    } catch (const std::runtime_error& e) {
        throw DegenerateLoadings(e.what());
    }
}

namespace {

double cpev_cov(const SymMatrix& cov, const Basis& v) {
    const SymMatrix vav = projected_cov(cov, v);
    const SymMatrix vtv(matmul(v.cols.transposed(), v.cols));
    Matrix r;
    try {
        r = cholesky_upper(vtv);
    } catch (const std::runtime_error&) {
        throw DegenerateLoadings("loading matrix is rank deficient");
    }
    // Trace((V^T V)^{-1} V^T A V) via two triangular solves.
    const index_t m = vtv.dim();
    double trace = 0.0;
    for (index_t col = 0; col < m; ++col) {
        std::vector<double> y(static_cast<size_t>(m));
        for (index_t i = 0; i < m; ++i) {  // R^T y = (V^T A V) e_col
            double s = vav(i, col);
            for (index_t k = 0; k < i; ++k) s -= r(k, i) * y[static_cast<size_t>(k)];
            y[static_cast<size_t>(i)] = s / r(i, i);
        }
        std::vector<double> x(static_cast<size_t>(m));
        for (index_t i = m - 1; i >= 0; --i) {  // R x = y
            double s = y[static_cast<size_t>(i)];
            for (index_t k = i + 1; k < m; ++k) s -= r(i, k) * x[static_cast<size_t>(k)];
            x[static_cast<size_t>(i)] = s / r(i, i);
        }
        trace += x[static_cast<size_t>(col)];
    }
    return trace / cov.trace();
}

}  // namespace

double cpev(const SymMatrix& cov, const Basis& v) { return cpev_cov(cov, v); }

double cpev(const Matrix& data, const Basis& v) {
    return cpev_cov(SymMatrix(matmul(data.transposed(), data)), v);
}

namespace {

// lambda_max(G, k) by support enumeration: max over |F| = k of the largest
// eigenvalue of the principal submatrix G[F, F].
double lambda_max_sparse_exact(const SymMatrix& g, index_t k) {
    const index_t p = g.dim();
    std::vector<index_t> comb(static_cast<size_t>(k));
    for (index_t i = 0; i < k; ++i) comb[static_cast<size_t>(i)] = i;
    double best = -std::numeric_limits<double>::infinity();
    for (;;) {
        Matrix sub(k, k);
        for (index_t i = 0; i < k; ++i)
            for (index_t j = 0; j < k; ++j)
                sub(i, j) = g(comb[static_cast<size_t>(i)], comb[static_cast<size_t>(j)]);
        const auto eig = sym_eig(SymMatrix::from_symmetric_parts(std::move(sub)));
        best = std::max(best, eig.values.front());

        // next combination
        index_t i = k - 1;
        while (i >= 0 && comb[static_cast<size_t>(i)] == p - k + i) --i;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (index_t j = i + 1; j < k; ++j)
            comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    return best;
}

// Restricted two-column ascent on f(Q) = lambda_max(Q^T G Q) for a fixed
// support pair.  The columns are parameterized by their coefficients on the
// supports, q1 = embed(a, f1), q2 = embed(b, f2), with unit a, b and the
// orthogonality constraint a^T M b = 0 where M marks shared coordinates.
// The repair step keeps every iterate exactly feasible, so the reported
// value is always attained by an admissible column pair.
double two_column_restricted(const SymMatrix& g, const SupportSet& f1, const SupportSet& f2) {
    const index_t p = g.dim();
    const index_t k1 = f1.k();
    const index_t k2 = f2.k();
    if (k1 == 1 && k2 == 1 && f1.indices == f2.indices)
        return -std::numeric_limits<double>::infinity();  // no orthonormal pair exists

    // overlap[i] = position of f1.indices[i] inside f2, or -1
    std::vector<index_t> overlap(static_cast<size_t>(k1), -1);
    for (index_t i = 0; i < k1; ++i)
        for (index_t j = 0; j < k2; ++j)
            if (f1.indices[static_cast<size_t>(i)] == f2.indices[static_cast<size_t>(j)])
                overlap[static_cast<size_t>(i)] = j;

    auto normalize = [](std::vector<double>& v) {
        double n = 0.0;
        for (double x : v) n += x * x;
        n = std::sqrt(n);
        if (n > 0.0)
            for (double& x : v) x /= n;
        return n;
    };
    // c = M^T a in the coordinates of b
    auto coupling = [&](const std::vector<double>& a) {
        std::vector<double> c(static_cast<size_t>(k2), 0.0);
        for (index_t i = 0; i < k1; ++i)
            if (overlap[static_cast<size_t>(i)] >= 0)
                c[static_cast<size_t>(overlap[static_cast<size_t>(i)])] =
                    a[static_cast<size_t>(i)];
        return c;
    };
    auto embed = [&](const std::vector<double>& a, const std::vector<double>& b) {
        Matrix q(p, 2);
        for (index_t i = 0; i < k1; ++i) q(f1.indices[static_cast<size_t>(i)], 0) = a[static_cast<size_t>(i)];
        for (index_t j = 0; j < k2; ++j) q(f2.indices[static_cast<size_t>(j)], 1) = b[static_cast<size_t>(j)];
        return q;
    };
    // Make (a, b) feasible: unit norms and b orthogonal to M^T a.  If b is
    // annihilated by the projection, zero a on the shared coordinates
    // instead so the constraint holds with a nonzero b.
    auto repair = [&](std::vector<double>& a, std::vector<double>& b) -> bool {
        if (normalize(a) == 0.0) return false;
        std::vector<double> c = coupling(a);
        double cc = 0.0, cb = 0.0;
        for (index_t j = 0; j < k2; ++j) {
            cc += c[static_cast<size_t>(j)] * c[static_cast<size_t>(j)];
            cb += c[static_cast<size_t>(j)] * b[static_cast<size_t>(j)];
        }
        if (cc > 0.0)
            for (index_t j = 0; j < k2; ++j) b[static_cast<size_t>(j)] -= (cb / cc) * c[static_cast<size_t>(j)];
        if (normalize(b) < 1e-12) {
            for (index_t i = 0; i < k1; ++i)
                if (overlap[static_cast<size_t>(i)] >= 0) a[static_cast<size_t>(i)] = 0.0;
            if (normalize(a) == 0.0) return false;
            if (normalize(b) == 0.0) return false;  // b was entirely in span(c)
        }
        return true;
    };
    auto objective = [&](const std::vector<double>& a, const std::vector<double>& b) {
        const Matrix q = embed(a, b);
        const SymMatrix small(matmul(q.transposed(), matmul(g.as_matrix(), q)));
        return sym_eig(small).values.front();
    };

    double best = -std::numeric_limits<double>::infinity();
    Rng rng(0x5eedULL + static_cast<uint64_t>(f1.indices.front() * 131 + f2.indices.front()));
    const int restarts = 24;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> a(static_cast<size_t>(k1));
        std::vector<double> b(static_cast<size_t>(k2));
        for (double& x : a) x = rng.gaussian();
        for (double& x : b) x = rng.gaussian();
        if (!repair(a, b)) continue;
        double cur = objective(a, b);
        for (int it = 0; it < 300; ++it) {
            // gradient of lambda_max(Q^T G Q) in Q is 2 G Q w w^T, w the top
            // eigenvector; pull it back onto the support coefficients
            const Matrix q = embed(a, b);
            const Matrix gq = matmul(g.as_matrix(), q);
            const SymMatrix small(matmul(q.transposed(), gq));
            const auto eig = sym_eig(small);
            Matrix w(2, 1);
            w(0, 0) = eig.vectors(0, 0);
            w(1, 0) = eig.vectors(1, 0);
            const Matrix grad = matmul(gq, matmul(w, w.transposed()));
            const double step = 0.5 / std::max(1e-12, eig.values.front());
            std::vector<double> a_next = a, b_next = b;
            for (index_t i = 0; i < k1; ++i)
                a_next[static_cast<size_t>(i)] += step * grad(f1.indices[static_cast<size_t>(i)], 0);
            for (index_t j = 0; j < k2; ++j)
                b_next[static_cast<size_t>(j)] += step * grad(f2.indices[static_cast<size_t>(j)], 1);
            if (!repair(a_next, b_next)) break;
            const double val = objective(a_next, b_next);
            double delta = 0.0;
            for (index_t i = 0; i < k1; ++i)
                delta = std::max(delta, std::abs(a_next[static_cast<size_t>(i)] - a[static_cast<size_t>(i)]));
            for (index_t j = 0; j < k2; ++j)
                delta = std::max(delta, std::abs(b_next[static_cast<size_t>(j)] - b[static_cast<size_t>(j)]));
            a = std::move(a_next);
            b = std::move(b_next);
            cur = std::max(cur, val);
            if (delta < 1e-13) break;
        }
        best = std::max(best, cur);
    }
    return best;
}

std::vector<SupportSet> all_supports(index_t p, index_t k) {
    std::vector<SupportSet> out;
    std::vector<index_t> comb(static_cast<size_t>(k));
    for (index_t i = 0; i < k; ++i) comb[static_cast<size_t>(i)] = i;
    for (;;) {
        out.push_back(SupportSet{comb});
        index_t i = k - 1;
        while (i >= 0 && comb[static_cast<size_t>(i)] == p - k + i) --i;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (index_t j = i + 1; j < k; ++j)
            comb[static_cast<size_t>(j)] = comb[static_cast<size_t>(j - 1)] + 1;
    }
    return out;
}

}  // namespace

double rho_sparse(const SymMatrix& e, const CardinalityProfile& k, RhoMode mode) {
    const index_t p = e.dim();
    const auto m = static_cast<index_t>(k.k.size());

    if (mode == RhoMode::upper_bound) {
        const double rho_full = spectral_norm(e.as_matrix());
        // ||E x|| <= ||x||_1 max_j ||E e_j|| <= sqrt(k) max_j ||E e_j||
        double max_col = 0.0;
        for (index_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (index_t i = 0; i < p; ++i) s += e(i, j) * e(i, j);
            max_col = std::max(max_col, std::sqrt(s));
        }
        double per_col = 0.0;
        for (index_t ki : k.k)
            per_col = std::max(per_col, std::sqrt(static_cast<double>(ki)) * max_col);
        return std::min(rho_full, std::sqrt(static_cast<double>(m)) * per_col);
    }

    if (p > 12 || m > 2)
        throw DimensionMismatch("rho_sparse exact mode limited to p <= 12, m <= 2");

    const SymMatrix g(matmul(e.as_matrix().transposed(), e.as_matrix()));
    if (m == 1) return std::sqrt(std::max(0.0, lambda_max_sparse_exact(g, k.k.front())));

    double best = 0.0;
    const auto f1s = all_supports(p, k.k[0]);
    const auto f2s = all_supports(p, k.k[1]);
    for (const auto& f1 : f1s)
        for (const auto& f2 : f2s)
            best = std::max(best, two_column_restricted(g, f1, f2));
    return std::sqrt(std::max(0.0, best));
}

double delta_e(const BoundInputs& b, double sin_theta_2_prev) {
    const double gap = 1.0 - sin_theta_2_prev * sin_theta_2_prev;
    if (gap <= 0.0) return std::numeric_limits<double>::infinity();
    return 4.0 * b.rho_ek / (b.lambda_m * b.lambda_m * gap);
}

double thm31_rhs(const BoundInputs& b, double pq_prev_fro_sq, double sin_theta_2_prev) {
    const double g2 = b.gamma * b.gamma;
    const double progress =
        pq_prev_fro_sq / ((1.0 - g2) * pq_prev_fro_sq + static_cast<double>(b.m) * g2);
    const double de = delta_e(b, sin_theta_2_prev);
    const double dt = truncation_error_bound(b.k_bar_max, b.k_min, b.p, b.m);
    return progress - de - dt;
}

TrialOutcome classify_trial(const Basis& truth, const std::vector<SupportSet>& true_supports,
                            const Basis& estimate, double threshold) {
    TrialOutcome out;
    const index_t m = truth.m();
    out.success = true;
    out.recovered = true;
    for (index_t j = 0; j < m; ++j) {
        double ip = 0.0;
        for (index_t i = 0; i < truth.p(); ++i) ip += truth.cols(i, j) * estimate.cols(i, j);
        ip = std::abs(ip);
        out.inner_products.push_back(ip);
        if (!(ip > threshold)) out.success = false;

        std::vector<index_t> nonzeros;
        for (index_t i = 0; i < estimate.p(); ++i)
            if (std::abs(estimate.cols(i, j)) > kSupportEps) nonzeros.push_back(i);
        if (nonzeros != true_supports[static_cast<size_t>(j)].indices) out.recovered = false;
    }
    return out;
}

TrialStats trial_stats(const std::vector<TrialOutcome>& outcomes) {
    if (outcomes.empty()) throw DimensionMismatch("trial_stats: empty outcome list");
    TrialStats s;
    const auto n = static_cast<double>(outcomes.size());
    s.mean_inner_products.assign(outcomes.front().inner_products.size(), 0.0);
    for (const auto& o : outcomes) {
        s.success_rate += o.success ? 1.0 : 0.0;
        s.recovery_rate += o.recovered ? 1.0 : 0.0;
        for (size_t j = 0; j < s.mean_inner_products.size(); ++j)
            s.mean_inner_products[j] += o.inner_products[j];
    }
    s.success_rate /= n;
    s.recovery_rate /= n;
    for (auto& v : s.mean_inner_products) v /= n;
    return s;
}

}  // namespace torth

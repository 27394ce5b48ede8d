#include "torth/solvers.hpp"

#include <cmath>
#include <limits>

namespace torth {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxRestarts = 3;

double sigma_max(const Matrix& m) {
    SVD d = svd_small(m);
    return d.s.empty() ? 0.0 : d.s.front();
}

void record_reference(IterRecord& rec, const Basis* ref, const Basis& q) {
    if (ref == nullptr) {
        rec.sin_f = rec.sin_2 = rec.pq_fro_sq = rec.pq_two_sq = kNaN;
        return;
    }
    rec.sin_f = sin_theta_fro(*ref, q);
    rec.sin_2 = sin_theta_two(*ref, q);
    const Matrix pq = matmul(ref->cols.transposed(), q.cols);
    double fro = 0.0;
    for (double v : pq.data()) fro += v * v;
    rec.pq_fro_sq = fro;
    const double s = sigma_max(pq);
    rec.pq_two_sq = s * s;
}

double consecutive_sin_sq(const Matrix& prev, const Matrix& next) {
    const Matrix g = matmul(prev.transposed(), next);
    double c2 = 0.0;
    for (double v : g.data()) c2 += v * v;
    return std::max(0.0, static_cast<double>(prev.cols()) - c2);
}

// Orthogonalize, replacing columns flagged rank-deficient with fresh random
// directions. Returns false once the restart budget is exhausted.
bool orthogonalize(Matrix& m, Ortho ortho, Rng& rng, int& restarts) {
    for (;;) {
        try {
            if (ortho == Ortho::qr) {
                m = householder_qr(m).q;
            } else {
                SVD d = svd_small(m);
                if (d.s.back() < 1e-14 * frobenius_norm(m)) throw RankDeficient(m.cols() - 1);
                m = matmul(d.u, d.v.transposed());
            }
            return true;
        } catch (const RankDeficient& e) {
            if (restarts >= kMaxRestarts) return false;
            ++restarts;
            for (index_t i = 0; i < m.rows(); ++i) m(i, e.column) = rng.gaussian();
        }
    }
}

struct LevelOutcome {
    Termination termination = Termination::max_iter;
};

LevelOutcome run_block_level(const SymOperator& a, Matrix& q, const CardinalityProfile& profile,
                             const SolverConfig& cfg, Method method, index_t level_index,
                             const Basis* reference, Rng& rng, RunReport& report) {
    const bool truncating = method != Method::standard;
    const bool post_truncating = method == Method::torth_t;

    for (index_t it = 0; it < cfg.max_iter; ++it) {
        const Matrix product = a.apply(q);
        Matrix candidate =
            (post_truncating && cfg.qr_on_untruncated) || !truncating
                ? product
                : truncate_columns(product, profile);

        if (!orthogonalize(candidate, cfg.ortho, rng, report.restarts))
            return {Termination::rank_deficient_recovered};

        IterRecord rec;
        rec.level = level_index;

        if (post_truncating) {
            const Matrix q_tilde = candidate;
            Matrix q_trunc = truncate_columns(q_tilde, profile);
            for (index_t j = 0; j < q_trunc.cols(); ++j) {
                auto c = q_trunc.col(j);
                bool changed = false;
                for (index_t i = 0; i < q_tilde.rows(); ++i)
                    changed |= c[static_cast<size_t>(i)] != q_tilde(i, j);
                if (!changed) continue;  // column already unit norm; keep it bit-exact
                const double n = norm2(c);
                if (n == 0.0) {
                    if (report.restarts >= kMaxRestarts)
                        return {Termination::rank_deficient_recovered};
                    ++report.restarts;
                    for (auto& e : c) e = rng.gaussian();
                    const double rn = norm2(c);
                    for (auto& e : c) e /= rn;
                } else {
                    for (auto& e : c) e /= n;
                }
                q_trunc.set_col(j, c);
            }
            rec.trunc_gap = frobenius_norm(q_trunc - q_tilde);
            rec.trunc_gap *= rec.trunc_gap;
            candidate = std::move(q_trunc);
        }

        rec.residual = sigma_max(candidate - q);
        rec.consec_sin_sq = consecutive_sin_sq(q, candidate);
        q = std::move(candidate);
        rec.ortho_loss = orthogonality_loss(Basis{q});
        record_reference(rec, reference, Basis{q});
        report.per_iter.push_back(rec);
        ++report.iterations;

        if (rec.residual < cfg.tol) return {Termination::converged};
    }
    return {Termination::max_iter};
}

std::vector<CardinalityProfile> effective_schedule(const SolverConfig& cfg,
                                                   const CardinalityProfile& k, index_t p) {
    if (!cfg.schedule.empty()) return cfg.schedule;
    if (cfg.warm_start) return warm_start_schedule(k, p);
    return {k};
}

RunReport run_block(Method method, const SymOperator& a, const Basis& q0,
                    const CardinalityProfile& k, const SolverConfig& cfg,
                    const Basis* reference) {
    RunReport report;
    Matrix q = q0.cols;
    Rng rng(Rng::derive(cfg.seed, 0xb10c));

    if (reference != nullptr) {
        report.initial_sin_f = sin_theta_fro(*reference, q0);
        report.initial_sin_2 = sin_theta_two(*reference, q0);
        const Matrix pq = matmul(reference->cols.transposed(), q0.cols);
        double fro = 0.0;
        for (double v : pq.data()) fro += v * v;
        report.initial_pq_fro_sq = fro;
    } else {
        report.initial_sin_f = report.initial_sin_2 = report.initial_pq_fro_sq = kNaN;
    }

    report.levels = method == Method::standard
                        ? std::vector<CardinalityProfile>{CardinalityProfile::uniform(q0.m(), a.dim())}
                        : effective_schedule(cfg, k, a.dim());

    for (size_t li = 0; li < report.levels.size(); ++li) {
        const LevelOutcome out = run_block_level(a, q, report.levels[li], cfg, method,
                                                 static_cast<index_t>(li), reference, rng, report);
        report.termination = out.termination;
        if (out.termination == Termination::rank_deficient_recovered) break;
    }
    report.final = Basis{std::move(q)};
    return report;
}

}  // namespace

Basis random_basis(index_t p, index_t m, Rng& rng) {
    for (;;) {
        Matrix g = rng.gaussian_matrix(p, m);
        try {
            return Basis{householder_qr(g).q};
        } catch (const RankDeficient&) {
            // astronomically unlikely; redraw
        }
    }
}

RunReport torth(const SymOperator& a, const Basis& q0, const CardinalityProfile& k,
                const SolverConfig& cfg, const Basis* reference) {
    return run_block(Method::torth, a, q0, k, cfg, reference);
}

RunReport torth_t(const SymOperator& a, const Basis& q0, const CardinalityProfile& k,
                  const SolverConfig& cfg, const Basis* reference) {
    return run_block(Method::torth_t, a, q0, k, cfg, reference);
}

RunReport standard_orth_iter(const SymOperator& a, const Basis& q0, const SolverConfig& cfg,
                             const Basis* reference) {
    return run_block(Method::standard, a, q0,
                     CardinalityProfile::uniform(q0.m(), a.dim()), cfg, reference);
}

RunReport tpower(const SymOperator& a, std::span<const double> v0, index_t k,
                 const SolverConfig& cfg, const Basis* reference) {
    const index_t p = a.dim();
    RunReport report;
    Rng rng(Rng::derive(cfg.seed, 0x1f0e));

    std::vector<double> v(v0.begin(), v0.end());
    {
        const double n = norm2(v);
        for (auto& e : v) e /= n;
    }

    Basis vb{Matrix(p, 1)};
    auto to_basis = [&](const std::vector<double>& x) {
        Matrix m(p, 1);
        for (index_t i = 0; i < p; ++i) m(i, 0) = x[static_cast<size_t>(i)];
        return Basis{std::move(m)};
    };

    if (reference != nullptr) {
        const Basis b = to_basis(v);
        report.initial_sin_f = sin_theta_fro(*reference, b);
        report.initial_sin_2 = sin_theta_two(*reference, b);
        double d = 0.0;
        for (index_t i = 0; i < p; ++i) d += reference->cols(i, 0) * v[static_cast<size_t>(i)];
        report.initial_pq_fro_sq = d * d;
    } else {
        report.initial_sin_f = report.initial_sin_2 = report.initial_pq_fro_sq = kNaN;
    }

    const auto levels = effective_schedule(cfg, CardinalityProfile::uniform(1, k), p);
    report.levels = levels;

    for (size_t li = 0; li < levels.size(); ++li) {
        const index_t klevel = levels[li].k.front();
        report.termination = Termination::max_iter;
        for (index_t it = 0; it < cfg.max_iter; ++it) {
            std::vector<double> w = a.apply_vec(v);
            const SupportSet f = supp(w, klevel);
            std::vector<double> vt = truncate(w, f);
            double n = norm2(vt);
            if (n == 0.0) {
                if (report.restarts >= kMaxRestarts) {
                    report.termination = Termination::rank_deficient_recovered;
                    break;
                }
                ++report.restarts;
                for (auto& e : vt) e = rng.gaussian();
                n = norm2(vt);
            }
            for (auto& e : vt) e /= n;
            if (dot(vt, v) < 0.0)
                for (auto& e : vt) e = -e;

            IterRecord rec;
            rec.level = static_cast<index_t>(li);
            double r2 = 0.0, c = 0.0;
            for (size_t i = 0; i < vt.size(); ++i) {
                const double d = vt[i] - v[i];
                r2 += d * d;
                c += vt[i] * v[i];
            }
            rec.residual = std::sqrt(r2);
            rec.consec_sin_sq = std::max(0.0, 1.0 - c * c);
            v = std::move(vt);
            rec.ortho_loss = 0.0;
            record_reference(rec, reference, to_basis(v));
            report.per_iter.push_back(rec);
            ++report.iterations;
            if (rec.residual < cfg.tol) {
                report.termination = Termination::converged;
                break;
            }
        }
        if (report.termination == Termination::rank_deficient_recovered) break;
    }
    report.final = to_basis(v);
    return report;
}

std::vector<CardinalityProfile> warm_start_schedule(const CardinalityProfile& k, index_t p) {
    // Each level is [min(8k_i,p), min(4k_i,p), min(2k_i,p), k_i] per column;
    // levels that repeat the previous one (every column clamped at p, or a
    // single column that reached k early alone) are collapsed.
    std::vector<CardinalityProfile> levels;
    for (index_t factor : {index_t{8}, index_t{4}, index_t{2}, index_t{1}}) {
        CardinalityProfile level;
        level.k.reserve(k.k.size());
        for (index_t ki : k.k) level.k.push_back(std::min(factor * ki, p));
        if (levels.empty() || !(levels.back() == level)) levels.push_back(std::move(level));
    }
    return levels;
}

std::optional<CardinalityProfile> adaptive_halving(const CardinalityProfile& current,
                                                   const CardinalityProfile& floor) {
    if (current.k.size() != floor.k.size())
        throw DimensionMismatch("adaptive_halving: profile length mismatch");
    bool at_floor = true;
    CardinalityProfile next;
    next.k.reserve(current.k.size());
    for (size_t i = 0; i < current.k.size(); ++i) {
        const index_t halved = std::max((current.k[i] + 1) / 2, floor.k[i]);
        if (halved != current.k[i]) at_floor = false;
        next.k.push_back(halved);
    }
    if (at_floor) return std::nullopt;
    return next;
}

RunReport run_method(Method method, const SymOperator& a, const Basis& q0,
                     const CardinalityProfile& k, const SolverConfig& cfg,
                     const Basis* reference) {
    if (method != Method::tpower) return run_block(method, a, q0, k, cfg, reference);

    // Deflation scheme: recover columns one at a time, projecting each found
    // direction out of the operator.
    const index_t m = q0.m();
    std::shared_ptr<const SymOperator> base(std::shared_ptr<void>(), &a);
    DeflationState state(base);

    RunReport report;
    Matrix final(a.dim(), m);
    report.termination = Termination::converged;
    for (index_t j = 0; j < m; ++j) {
        Basis ref_j;
        const Basis* refp = nullptr;
        if (reference != nullptr && reference->m() > j) {
            ref_j = Basis{reference->cols.columns(j, 1)};
            refp = &ref_j;
        }
        auto op = state.as_operator();
        RunReport sub = tpower(*op, q0.cols.col(j), k.k[static_cast<size_t>(j)], cfg, refp);
        for (auto& rec : sub.per_iter) rec.level = j;
        report.per_iter.insert(report.per_iter.end(), sub.per_iter.begin(), sub.per_iter.end());
        report.iterations += sub.iterations;
        report.restarts += sub.restarts;
        if (sub.termination != Termination::converged) report.termination = sub.termination;
        if (j == 0) {
            report.initial_sin_f = sub.initial_sin_f;
            report.initial_sin_2 = sub.initial_sin_2;
            report.initial_pq_fro_sq = sub.initial_pq_fro_sq;
        }
        const auto u = sub.final.cols.col(0);
        final.set_col(j, u);
        state = state.deflate(u);
    }
    report.levels = {k};
    report.final = Basis{std::move(final)};
    return report;
}

}  // namespace torth

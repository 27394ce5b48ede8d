#pragma once

#include <optional>

#include "torth/operators.hpp"
#include "torth/rng.hpp"
#include "torth/subspace.hpp"
#include "torth/truncation.hpp"

namespace torth {

enum class Method { torth, torth_t, tpower, standard };
enum class Ortho { qr, polar_svd };
enum class Termination { converged, max_iter, rank_deficient_recovered };

struct SolverConfig {
    Ortho ortho = Ortho::qr;
    double tol = 1e-12;
    index_t max_iter = 200;
    bool warm_start = true;
    // Default re-orthogonalizes the truncated product, so the pre-truncation
    // step feeds the QR. Set to run QR on the raw product instead and apply
    // truncation only afterwards.
    bool qr_on_untruncated = false;
    uint64_t seed = 0;
    std::vector<CardinalityProfile> schedule;  // overrides warm_start when set
};

struct IterRecord {
    double residual = 0.0;       // ||Q_t - Q_{t-1}||_2 after sign alignment
    index_t level = 0;           // index into RunReport::levels
    double ortho_loss = 0.0;     // ||I - Q_t^T Q_t||_F^2
    double consec_sin_sq = 0.0;  // ||sin Theta(Q_t, Q_{t-1})||_F^2, the halving jump statistic
    double trunc_gap = 0.0;      // ||Q_truncate - Q_tilde||_F^2 (torth_t only)
    // Diagnostics against a caller-supplied reference basis (NaN when absent):
    double sin_f = 0.0;
    double sin_2 = 0.0;
    double pq_fro_sq = 0.0;  // ||P^T Q_t||_F^2
    double pq_two_sq = 0.0;  // ||P^T Q_t||_2^2
};

struct RunReport {
    Basis final;
    index_t iterations = 0;
    std::vector<IterRecord> per_iter;
    std::vector<CardinalityProfile> levels;
    Termination termination = Termination::max_iter;
    int restarts = 0;
    // Diagnostics for the starting iterate (NaN when no reference given).
    double initial_sin_f = 0.0;
    double initial_sin_2 = 0.0;
    double initial_pq_fro_sq = 0.0;
};

/// Orthonormal p x m basis from an i.i.d. gaussian draw.
Basis random_basis(index_t p, index_t m, Rng& rng);

/// Truncated orthogonal iteration: Q_t = orth(truncate_columns(A Q_{t-1}, K)).
/// Runs the warm-start schedule {8k,4k,2k,k} (or cfg.schedule) level by level.
RunReport torth(const SymOperator& a, const Basis& q0, const CardinalityProfile& k,
                const SolverConfig& cfg, const Basis* reference = nullptr);

/// TOrth plus per-iteration post truncation of the orthogonal factor to k_i
/// entries per column, renormalized to unit norm. Output columns satisfy
/// ||q_i||_0 <= k_i.
RunReport torth_t(const SymOperator& a, const Basis& q0, const CardinalityProfile& k,
                  const SolverConfig& cfg, const Basis* reference = nullptr);

/// Orthogonal iteration with no truncation.
RunReport standard_orth_iter(const SymOperator& a, const Basis& q0,
                             const SolverConfig& cfg, const Basis* reference = nullptr);

/// Single-vector truncated power method: update, keep top-k, renormalize.
RunReport tpower(const SymOperator& a, std::span<const double> v0, index_t k,
                 const SolverConfig& cfg, const Basis* reference = nullptr);

/// Per-column warm-start levels [min(8k,p), min(4k,p), min(2k,p), k] with
/// consecutive duplicates collapsed.
std::vector<CardinalityProfile> warm_start_schedule(const CardinalityProfile& k, index_t p);

/// Next halving level ceil(k/2) per column, clamped at floor; nullopt once
/// the floor is reached.
std::optional<CardinalityProfile> adaptive_halving(const CardinalityProfile& current,
                                                   const CardinalityProfile& floor);

/// Dispatch by method; for tpower the first column of q0 seeds the vector
/// iteration and deflation rounds recover m() components sequentially.
RunReport run_method(Method method, const SymOperator& a, const Basis& q0,
                     const CardinalityProfile& k, const SolverConfig& cfg,
                     const Basis* reference = nullptr);

}  // namespace torth

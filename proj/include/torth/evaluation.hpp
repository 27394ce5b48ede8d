#pragma once

#include "torth/linalg.hpp"
#include "torth/subspace.hpp"
#include "torth/truncation.hpp"

namespace torth {

/// Loadings whose Gram matrix is numerically singular (duplicated or
/// correlated columns) cannot be de-correlated.
struct DegenerateLoadings : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrialOutcome {
    std::vector<double> inner_products;  // |v_i^T u_i| per component
    bool success = false;                // all inner products > threshold
    bool recovered = false;              // every nonzero set equals the true support
};

struct TrialStats {
    double success_rate = 0.0;
    double recovery_rate = 0.0;
    std::vector<double> mean_inner_products;  // averaged over all trials
};

/// Inputs to the per-iteration convergence bound. Spectra are assumed
/// rescaled so lambda_1 = 1 before evaluation.
struct BoundInputs {
    double gamma = 0.0;     // lambda_{m+1} / lambda_m, in (0,1)
    double lambda_m = 0.0;
    double rho_ek = 0.0;    // rho(E, K) or an upper bound on it
    index_t k_bar_max = 0;  // max_i ||p_i||_0 over true eigenvectors
    index_t k_min = 0;      // min_i k_i over the truncation profile
    index_t p = 0;
    index_t m = 0;
};

/// Sum of squared diagonal entries of the triangular factor of the component
/// scores: qr_r(XV) in data form, chol(V^T A V) in covariance form.
double adjusted_variance(const Matrix& data, const Basis& v);
double adjusted_variance(const SymMatrix& cov, const Basis& v);

/// Trace ratio of the projection onto span(V):
/// Trace((V^T V)^{-1} V^T A V) / Trace(A).
double cpev(const Matrix& data, const Basis& v);
double cpev(const SymMatrix& cov, const Basis& v);

enum class RhoMode { exact_bruteforce, upper_bound };

/// rho(E, K) = max ||EQ||_2 over orthonormal Q with ||q_i||_0 <= k_i.
/// Exact mode enumerates supports (p <= 12, m <= 2); upper_bound is cheap
/// and always >= the exact value.
double rho_sparse(const SymMatrix& e, const CardinalityProfile& k, RhoMode mode);

/// delta_E = 4 rho(E,K) / (lambda_m^2 (1 - sin_theta_2_prev^2)).
/// Returns +infinity when sin_theta_2_prev >= 1 (bound vacuous).
double delta_e(const BoundInputs& b, double sin_theta_2_prev);

/// Full right-hand side of the per-iteration bound on ||P^T Q_t||_2^2.
double thm31_rhs(const BoundInputs& b, double pq_prev_fro_sq, double sin_theta_2_prev);

/// Success threshold fixed to match the experimental protocol; exposed for
/// sensitivity studies.
constexpr double kSuccessThreshold = 0.99;

/// Numerical-zero cutoff when reading a support off a dense column.
constexpr double kSupportEps = 1e-6;

/// Classify one trial against planted truth (columns matched in order).
TrialOutcome classify_trial(const Basis& truth, const std::vector<SupportSet>& true_supports,
                            const Basis& estimate, double threshold = kSuccessThreshold);

TrialStats trial_stats(const std::vector<TrialOutcome>& outcomes);

}  // namespace torth

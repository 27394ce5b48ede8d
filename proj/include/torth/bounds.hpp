#pragma once

#include <string>

#include "torth/matrix.hpp"

namespace torth {

struct SuiteResult {
    std::string name;
    index_t trials = 0;
    index_t violations = 0;
    double worst_margin = 0.0;  // most negative slack observed (>= 0 means clean)
    std::vector<uint64_t> violation_seeds;
};

struct SuiteOptions {
    index_t trials = 10000;
    uint64_t seed = 7;
    // Self-test of the harness: truncates one entry short of the budget the
    // penalty term assumes, which must produce violations.
    bool inject_truncation_fault = false;
};

/// Randomized inequality suites: vector truncation, matrix truncation,
/// thresholding, exact-iteration progress, the perturbation bound with exact
/// sparse rho, and the one-step Frobenius contraction.
std::vector<SuiteResult> run_bound_suites(const SuiteOptions& opt);

}  // namespace torth

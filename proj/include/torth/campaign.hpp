#pragma once

#include "torth/datagen.hpp"
#include "torth/evaluation.hpp"
#include "torth/solvers.hpp"

namespace torth {

struct CampaignSpec {
    OverlapCase overlap = OverlapCase::identical;
    index_t p = 1000;
    index_t m = 3;
    index_t k_bar = 10;
    double rho_e = 0.22;
    uint64_t seed = 1;
    index_t trials = 1000;
    std::vector<Method> methods = {Method::standard, Method::tpower, Method::torth,
                                   Method::torth_t};
    SolverConfig cfg;
    index_t threads = 0;  // 0: SPARSE_SUBSPACE_THREADS or hardware concurrency
};

struct MethodCampaign {
    Method method;
    std::vector<TrialOutcome> outcomes;  // indexed by trial
    TrialStats stats;
};

struct CampaignResult {
    PlantedInstance instance;
    std::vector<MethodCampaign> per_method;
};

/// One fixed instance per campaign; trials differ only in their random
/// initialization. Per-trial seeds derive from (campaign seed, trial index),
/// so the result is independent of the worker count.
CampaignResult run_campaign(const CampaignSpec& spec);

index_t worker_count(index_t requested);

const char* method_name(Method m);

}  // namespace torth

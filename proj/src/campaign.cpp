#include "torth/campaign.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace torth {

index_t worker_count(index_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPARSE_SUBSPACE_THREADS")) {
        const long n = std::atol(env);
        if (n > 0) return static_cast<index_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<index_t>(hw);
}

const char* method_name(Method m) {
    switch (m) {
        case Method::torth: return "torth";
        case Method::torth_t: return "torth_t";
        case Method::tpower: return "tpower";
        case Method::standard: return "standard";
    }
    return "?";
}

CampaignResult run_campaign(const CampaignSpec& spec) {
    CampaignResult result;
    result.instance = planted_instance(spec.p, spec.m, spec.overlap,
                                       default_spectrum(spec.p, spec.m), spec.rho_e,
                                       spec.seed, spec.k_bar);
    const DenseOperator op(result.instance.a);
    const CardinalityProfile k = CardinalityProfile::uniform(spec.m, spec.k_bar);

    for (Method method : spec.methods) {
        MethodCampaign mc;
        mc.method = method;
        mc.outcomes.resize(static_cast<size_t>(spec.trials));

        std::atomic<index_t> next{0};
        auto work = [&]() {
            for (;;) {
                const index_t t = next.fetch_add(1);
                if (t >= spec.trials) return;
                const uint64_t trial_seed =
                    Rng::derive(spec.seed, static_cast<uint64_t>(t) * 4 +
                                               static_cast<uint64_t>(method));
                Rng rng(trial_seed);
                const Basis q0 = random_basis(spec.p, spec.m, rng);
                SolverConfig cfg = spec.cfg;
                cfg.seed = trial_seed;
                const RunReport report = run_method(method, op, q0, k, cfg);
                mc.outcomes[static_cast<size_t>(t)] =
                    classify_trial(result.instance.truth, result.instance.supports,
                                   report.final);
            }
        };

        const index_t workers = std::min(worker_count(spec.threads), spec.trials);
        std::vector<std::thread> pool;
        for (index_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();

        mc.stats = trial_stats(mc.outcomes);
        result.per_method.push_back(std::move(mc));
    }
    return result;
}

}  // namespace torth

#include "torth/report_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace torth {

namespace {

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iter: return "max_iter";
        case Termination::rank_deficient_recovered: return "rank_deficient_recovered";
    }
    return "?";
}

nlohmann::json profile_to_json(const CardinalityProfile& k) {
    return nlohmann::json(k.k);
}

double json_safe(double v) {
    // JSON has no NaN/Inf; keep the schema loadable everywhere.
    return std::isfinite(v) ? v : -1.0;
}

}  // namespace

nlohmann::json report_to_json(const RunReport& report) {
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& r : report.per_iter) {
        iters.push_back({{"residual", r.residual},
                         {"level", r.level},
                         {"ortho_loss", r.ortho_loss},
                         {"consec_sin_sq", r.consec_sin_sq},
                         {"trunc_gap", r.trunc_gap},
                         {"sin_f", json_safe(r.sin_f)},
                         {"sin_2", json_safe(r.sin_2)},
                         {"pq_fro_sq", json_safe(r.pq_fro_sq)},
                         {"pq_two_sq", json_safe(r.pq_two_sq)}});
    }
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : report.levels) levels.push_back(profile_to_json(l));
    return {{"schema", 1},
            {"iterations", report.iterations},
            {"termination", termination_name(report.termination)},
            {"restarts", report.restarts},
            {"levels", levels},
            {"initial_sin_f", json_safe(report.initial_sin_f)},
            {"initial_sin_2", json_safe(report.initial_sin_2)},
            {"per_iter", iters}};
}

nlohmann::json campaign_to_json(const CampaignSpec& spec, const CampaignResult& result) {
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& mc : result.per_method) {
        nlohmann::json trials = nlohmann::json::array();
        for (const auto& o : mc.outcomes)
            trials.push_back({{"inner_products", o.inner_products},
                              {"success", o.success},
                              {"recovered", o.recovered}});
        methods.push_back({{"method", method_name(mc.method)},
                           {"success_rate", mc.stats.success_rate},
                           {"recovery_rate", mc.stats.recovery_rate},
                           {"mean_inner_products", mc.stats.mean_inner_products},
                           {"trials", trials}});
    }
    return {{"schema", 1},
            {"p", spec.p},
            {"m", spec.m},
            {"k_bar", spec.k_bar},
            {"rho_e", spec.rho_e},
            {"seed", spec.seed},
            {"trials", spec.trials},
            {"case", spec.overlap == OverlapCase::identical  ? 1
                     : spec.overlap == OverlapCase::partial ? 2
                                                            : 3},
            {"methods", methods}};
}

nlohmann::json suites_to_json(const std::vector<SuiteResult>& suites) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : suites)
        arr.push_back({{"name", s.name},
                       {"trials", s.trials},
                       {"violations", s.violations},
                       {"worst_margin", s.worst_margin},
                       {"violation_seeds", s.violation_seeds}});
    return {{"schema", 1}, {"suites", arr}};
}

void write_trace_csv(const std::filesystem::path& path, const RunReport& report) {
    std::ofstream out(path);
    out.precision(17);
    out << "iter,level,residual,consec_sin_sq,ortho_loss,trunc_gap,sin_f,sin_2\n";
    index_t i = 1;
    for (const auto& r : report.per_iter) {
        out << i++ << ',' << r.level << ',' << r.residual << ',' << r.consec_sin_sq << ','
            << r.ortho_loss << ',' << r.trunc_gap << ',' << json_safe(r.sin_f) << ','
            << json_safe(r.sin_2) << '\n';
    }
}

}  // namespace torth

// Command-line front end: solve a single instance, run a trial campaign, or
// run the randomized bound-verification suites. All randomness is seeded, so
// repeated invocations with the same flags produce identical files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "torth/bounds.hpp"
#include "torth/campaign.hpp"
#include "torth/datagen.hpp"
#include "torth/report_io.hpp"
#include "torth/solvers.hpp"

namespace fs = std::filesystem;
using namespace torth;

namespace {

Method parse_method(const std::string& s) {
    if (s == "standard") return Method::standard;
    if (s == "tpower") return Method::tpower;
    if (s == "torth") return Method::torth;
    if (s == "torth_t") return Method::torth_t;
    throw CLI::ValidationError("--method", "unknown method '" + s + "'");
}

CardinalityProfile parse_k(const std::vector<index_t>& ks, index_t m) {
    if (ks.empty()) throw CLI::ValidationError("--k", "at least one cardinality required");
    std::vector<index_t> k = ks;
    if (k.size() == 1 && m > 1) k.assign(static_cast<size_t>(m), k[0]);
    if (static_cast<index_t>(k.size()) != m)
        throw CLI::ValidationError("--k", "expected " + std::to_string(m) + " entries");
    return CardinalityProfile{std::move(k)};
}

OverlapCase parse_case(int c) {
    switch (c) {
        case 1: return OverlapCase::identical;
        case 2: return OverlapCase::partial;
        case 3: return OverlapCase::disjoint;
    }
    throw CLI::ValidationError("--case", "must be 1, 2, or 3");
}

void write_loadings_csv(const fs::path& path, const Basis& basis) {
    save_matrix(path, basis.cols);
}

struct SolveOptions {
    std::string method = "torth";
    std::vector<index_t> k;
    index_t m = 1;
    double tol = 1e-12;
    index_t max_iter = 200;
    uint64_t seed = 1;
    bool warm_start = true;
    std::string ortho = "qr";
    bool qr_on_untruncated = false;
    std::string input;
    std::string output_dir = ".";
    bool pitprops_input = false;
    index_t identity_n = 0;
    bool denoising_input = false;
    int toy_overlap = 0;
    bool covariance = false;
    bool center = false;
    bool header = false;
};

SymMatrix solve_input_matrix(const SolveOptions& opt) {
    int sources = (opt.input.empty() ? 0 : 1) + (opt.pitprops_input ? 1 : 0) +
                  (opt.identity_n > 0 ? 1 : 0) + (opt.denoising_input ? 1 : 0) +
                  (opt.toy_overlap > 0 ? 1 : 0);
    if (sources != 1)
        throw CLI::ValidationError(
            "input", "exactly one of --input, --pitprops, --identity, --denoising, "
                     "--toy-overlap is required");
    if (opt.pitprops_input) return pitprops();
    if (opt.identity_n > 0) {
        Matrix id(opt.identity_n, opt.identity_n);
        for (index_t i = 0; i < opt.identity_n; ++i) id(i, i) = 1.0;
        return SymMatrix(id);
    }
    if (opt.denoising_input) {
        DenoisingData dd = denoising_signals(250, kDefaultDenoisingSigma, opt.seed);
        Matrix data = dd.data;
        if (opt.center) center_columns(data);
        return gram_matrix(data);
    }
    if (opt.toy_overlap > 0) {
        PlantedInstance inst =
            planted_instance(100, 3, parse_case(opt.toy_overlap),
                             default_spectrum(100, 3), 0.21, opt.seed);
        return inst.a;
    }
    Matrix raw = load_matrix(opt.input, opt.header);
    bool treat_as_cov = opt.covariance;
    if (!treat_as_cov && raw.rows() == raw.cols()) {
        double asym = 0.0, scale = 1e-300;
        for (index_t i = 0; i < raw.rows(); ++i)
            for (index_t j = 0; j < raw.cols(); ++j) {
                asym = std::max(asym, std::abs(raw(i, j) - raw(j, i)));
                scale = std::max(scale, std::abs(raw(i, j)));
            }
        treat_as_cov = asym <= 1e-12 * scale;
    }
    if (treat_as_cov) {
        if (raw.rows() != raw.cols())
            throw ParseError("--covariance input must be square");
        return SymMatrix(raw);
    }
    if (opt.center) center_columns(raw);
    return gram_matrix(raw);
}

int cmd_solve(const SolveOptions& opt) {
    const SymMatrix a = solve_input_matrix(opt);
    const index_t p = a.dim();
    if (opt.m < 1 || opt.m > p) throw CLI::ValidationError("--m", "must be in [1, p]");
    CardinalityProfile k = parse_k(opt.k, opt.m);
    for (index_t ki : k.k)
        if (ki < 1 || ki > p)
            throw CLI::ValidationError("--k", "cardinalities must be in [1, p]");

    SolverConfig cfg;
    cfg.tol = opt.tol;
    cfg.max_iter = opt.max_iter;
    cfg.warm_start = opt.warm_start;
    cfg.qr_on_untruncated = opt.qr_on_untruncated;
    cfg.seed = opt.seed;
    if (opt.ortho == "qr")
        cfg.ortho = Ortho::qr;
    else if (opt.ortho == "polar")
        cfg.ortho = Ortho::polar_svd;
    else
        throw CLI::ValidationError("--ortho", "must be qr or polar");

    Rng rng(opt.seed);
    const Basis q0 = random_basis(p, opt.m, rng);
    DenseOperator op(a);
    const RunReport report = run_method(parse_method(opt.method), op, q0, k, cfg);

    fs::create_directories(opt.output_dir);
    const fs::path dir(opt.output_dir);
    nlohmann::json j = report_to_json(report);
    j["method"] = opt.method;
    j["p"] = p;
    j["m"] = opt.m;
    j["k"] = k.k;
    j["seed"] = opt.seed;
    std::ofstream(dir / "run_report.json") << j.dump(2) << '\n';
    write_loadings_csv(dir / "loadings.csv", report.final);
    write_trace_csv(dir / "trace.csv", report);

    std::cout << opt.method << ": " << report.iterations << " iterations, "
              << (report.termination == Termination::max_iter ? "max_iter"
                                                              : "converged")
              << ", reports in " << dir.string() << '\n';
    return report.termination == Termination::max_iter ? 2 : 0;
}

int cmd_campaign(CampaignSpec spec, const std::string& output_dir) {
    const CampaignResult result = run_campaign(spec);
    fs::create_directories(output_dir);
    const fs::path dir(output_dir);

    std::ofstream(dir / "campaign.json") << campaign_to_json(spec, result).dump(2) << '\n';

    std::ofstream trials(dir / "trials.csv");
    trials.precision(17);
    trials << "method,trial,success,recovered";
    for (index_t i = 0; i < spec.m; ++i) trials << ",inner_" << i;
    trials << '\n';
    for (const auto& mc : result.per_method)
        for (size_t t = 0; t < mc.outcomes.size(); ++t) {
            const auto& o = mc.outcomes[t];
            trials << method_name(mc.method) << ',' << t << ',' << o.success << ','
                   << o.recovered;
            for (double ip : o.inner_products) trials << ',' << ip;
            trials << '\n';
        }

    std::ofstream summary(dir / "summary.csv");
    summary.precision(17);
    summary << "method,success_rate,recovery_rate";
    for (index_t i = 0; i < spec.m; ++i) summary << ",mean_inner_" << i;
    summary << '\n';
    std::cout << "method          success  recovery\n";
    for (const auto& mc : result.per_method) {
        summary << method_name(mc.method) << ',' << mc.stats.success_rate << ','
                << mc.stats.recovery_rate;
        for (double ip : mc.stats.mean_inner_products) summary << ',' << ip;
        summary << '\n';
        std::printf("%-15s %7.1f%% %8.1f%%\n", method_name(mc.method),
                    100.0 * mc.stats.success_rate, 100.0 * mc.stats.recovery_rate);
    }
    std::cout << "reports in " << output_dir << '\n';
    return 0;
}

int cmd_verify_bounds(const SuiteOptions& opt, const std::string& output_dir) {
    if (opt.trials == 0)
        std::cout << "warning: trials=0, every suite passes vacuously\n";
    const std::vector<SuiteResult> suites = run_bound_suites(opt);
    fs::create_directories(output_dir);
    std::ofstream(fs::path(output_dir) / "bounds.json")
        << suites_to_json(suites).dump(2) << '\n';

    index_t total_violations = 0;
    for (const auto& s : suites) {
        total_violations += s.violations;
        std::printf("%-28s trials=%-6lld violations=%-4lld worst_margin=%.3e\n",
                    s.name.c_str(), static_cast<long long>(s.trials),
                    static_cast<long long>(s.violations), s.worst_margin);
        for (uint64_t seed : s.violation_seeds)
            std::cout << "  violation seed: " << seed << '\n';
    }
    std::cout << (total_violations == 0 ? "all suites passed\n"
                                        : "violations detected\n");
    return total_violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse eigenvector estimation via truncated orthogonal iteration"};
    app.require_subcommand(1);

    SolveOptions sopt;
    CLI::App* solve = app.add_subcommand("solve", "run one solver on one matrix");
    solve->add_option("--method", sopt.method, "standard | tpower | torth | torth_t");
    solve->add_option("--k", sopt.k, "per-column cardinalities (comma list)")
        ->delimiter(',')
        ->required();
    solve->add_option("--m", sopt.m, "number of components");
    solve->add_option("--tol", sopt.tol, "convergence tolerance");
    solve->add_option("--max-iter", sopt.max_iter, "iteration cap per level");
    solve->add_option("--seed", sopt.seed, "RNG seed");
    solve->add_flag("--warm-start,!--no-warm-start", sopt.warm_start,
                    "cardinality warm-start schedule");
    solve->add_option("--ortho", sopt.ortho, "qr | polar");
    solve->add_flag("--qr-on-untruncated", sopt.qr_on_untruncated,
                    "orthogonalize the raw product, truncate afterwards");
    solve->add_option("--input", sopt.input, "CSV matrix (data, or covariance)");
    solve->add_option("--output-dir", sopt.output_dir, "report directory");
    solve->add_flag("--pitprops", sopt.pitprops_input, "built-in 13x13 correlation matrix");
    solve->add_option("--identity", sopt.identity_n, "identity matrix of given size");
    solve->add_flag("--denoising", sopt.denoising_input,
                    "built-in 400-dim image denoising signals");
    solve->add_option("--toy-overlap", sopt.toy_overlap,
                      "built-in p=100 planted instance, overlap case 1|2|3");
    solve->add_flag("--covariance", sopt.covariance, "treat --input as a covariance matrix");
    solve->add_flag("--center", sopt.center, "subtract column means from data input");
    solve->add_flag("--header", sopt.header, "skip the first line of --input");

    CampaignSpec cspec;
    int overlap_case = 1;
    std::string campaign_dir = ".";
    std::vector<std::string> method_names;
    CLI::App* campaign = app.add_subcommand("campaign", "multi-trial recovery study");
    campaign->add_option("--case", overlap_case, "support overlap case 1|2|3");
    campaign->add_option("--trials", cspec.trials, "trials per method");
    campaign->add_option("--seed", cspec.seed, "RNG seed");
    campaign->add_option("--p", cspec.p, "ambient dimension");
    campaign->add_option("--m", cspec.m, "number of components");
    campaign->add_option("--k-bar", cspec.k_bar, "true support size per component");
    campaign->add_option("--rho-e", cspec.rho_e, "spectral norm of the perturbation");
    campaign->add_option("--threads", cspec.threads, "worker cap (0: auto)");
    campaign->add_option("--methods", method_names, "subset of methods to run")
        ->delimiter(',');
    campaign->add_option("--output-dir", campaign_dir, "report directory");

    SuiteOptions bopt;
    std::string bounds_dir = ".";
    CLI::App* bounds = app.add_subcommand("verify-bounds", "randomized inequality suites");
    bounds->add_option("--trials", bopt.trials, "trials per suite");
    bounds->add_option("--seed", bopt.seed, "RNG seed");
    bounds->add_flag("--inject-fault", bopt.inject_truncation_fault,
                     "deliberately under-truncate to self-test the harness");
    bounds->add_option("--output-dir", bounds_dir, "report directory");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return cmd_solve(sopt);
        if (campaign->parsed()) {
            cspec.overlap = parse_case(overlap_case);
            if (!method_names.empty()) {
                cspec.methods.clear();
                for (const auto& name : method_names)
                    cspec.methods.push_back(parse_method(name));
            }
            return cmd_campaign(cspec, campaign_dir);
        }
        return cmd_verify_bounds(bopt, bounds_dir);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

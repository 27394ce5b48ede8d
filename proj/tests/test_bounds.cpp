#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torth/bounds.hpp"

using namespace torth;

TEST_CASE("all suites are clean on a reduced trial budget") {
    SuiteOptions opt;
    opt.trials = 400;
    std::vector<SuiteResult> suites = run_bound_suites(opt);
    REQUIRE(suites.size() == 6);
    for (const SuiteResult& s : suites) {
        INFO(s.name);
        CHECK(s.violations == 0);
        CHECK(s.trials > 0);
        CHECK(s.worst_margin >= 0.0);
        CHECK(s.violation_seeds.empty());
    }
}

TEST_CASE("an injected truncation fault is detected") {
    SuiteOptions opt;
    opt.trials = 400;
    opt.inject_truncation_fault = true;
    std::vector<SuiteResult> suites = run_bound_suites(opt);
    index_t total = 0;
    for (const SuiteResult& s : suites) {
        total += s.violations;
        CHECK(s.violation_seeds.size() ==
              std::min<size_t>(static_cast<size_t>(s.violations), s.violation_seeds.size()));
        if (s.violations > 0) CHECK(!s.violation_seeds.empty());
    }
    CHECK(total > 0);
}

TEST_CASE("zero trials pass vacuously") {
    SuiteOptions opt;
    opt.trials = 0;
    for (const SuiteResult& s : run_bound_suites(opt)) {
        CHECK(s.trials == 0);
        CHECK(s.violations == 0);
    }
}

TEST_CASE("suites are deterministic in the seed") {
    SuiteOptions opt;
    opt.trials = 100;
    std::vector<SuiteResult> a = run_bound_suites(opt);
    std::vector<SuiteResult> b = run_bound_suites(opt);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].worst_margin == b[i].worst_margin);
        CHECK(a[i].violations == b[i].violations);
    }
}

// Exercises the installed CLI binary end to end. The binary path arrives as
// argv[1] from ctest.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ostringstream out;
    out << std::ifstream(p).rdbuf();
    return out.str();
}

fs::path temp_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("torth_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("identity instance converges in one iteration with exit 0") {
    fs::path dir = temp_dir("identity");
    CHECK(run("solve --identity 5 --method torth --m 2 --k 5,5 --output-dir " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "run_report.json"));
    CHECK(fs::exists(dir / "loadings.csv"));
    CHECK(fs::exists(dir / "trace.csv"));
    CHECK(slurp(dir / "run_report.json").find("\"iterations\": 1") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run("solve --identity 5 --method torth --m 2 --k 5,5,5") == 1);  // K length
    CHECK(run("solve --method torth --k 5") == 1);                         // no input
    CHECK(run("solve --input /nonexistent.csv --k 2") == 1);
    CHECK(run("nonsense") == 1);
}

TEST_CASE("max-iter termination exits with 2") {
    fs::path dir = temp_dir("maxiter");
    CHECK(run("solve --toy-overlap 1 --method torth --m 3 --k 10,10,10 --max-iter 1 "
              "--no-warm-start --output-dir " +
              dir.string()) == 2);
}

TEST_CASE("solve output is a pure function of flags and seed") {
    fs::path a = temp_dir("det_a");
    fs::path b = temp_dir("det_b");
    const std::string flags =
        "solve --toy-overlap 3 --method torth_t --m 3 --k 10,10,10 --seed 5 --output-dir ";
    CHECK(run(flags + a.string()) == 0);
    CHECK(run(flags + b.string()) == 0);
    CHECK(slurp(a / "run_report.json") == slurp(b / "run_report.json"));
    CHECK(slurp(a / "loadings.csv") == slurp(b / "loadings.csv"));
}

TEST_CASE("campaign writes per-trial and summary files deterministically") {
    fs::path a = temp_dir("camp_a");
    fs::path b = temp_dir("camp_b");
    const std::string flags =
        "campaign --case 1 --p 60 --m 2 --k-bar 6 --trials 4 --seed 3 "
        "--methods torth --output-dir ";
    CHECK(run(flags + a.string()) == 0);
    CHECK(run(flags + b.string()) == 0);
    for (const char* f : {"campaign.json", "trials.csv", "summary.csv"}) {
        CHECK(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
}

TEST_CASE("verify-bounds passes, detects injected faults, and warns on zero trials") {
    fs::path dir = temp_dir("bounds");
    CHECK(run("verify-bounds --trials 200 --output-dir " + dir.string()) == 0);
    CHECK(slurp(dir / "bounds.json").find("\"violations\": 0") != std::string::npos);
    CHECK(run("verify-bounds --trials 200 --inject-fault --output-dir " + dir.string()) !=
          0);
    CHECK(run("verify-bounds --trials 0 --output-dir " + dir.string()) == 0);
}

int main(int argc, char** argv) {
    if (argc < 2) return 1;
    g_cli = argv[1];
    doctest::Context ctx;
    return ctx.run();
}

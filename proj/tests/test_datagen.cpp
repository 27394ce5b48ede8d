#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "torth/datagen.hpp"
#include "torth/evaluation.hpp"
#include "torth/rng.hpp"

using namespace torth;

namespace {

double support_overlap(const SupportSet& a, const SupportSet& b) {
    index_t common = 0;
    for (index_t i : a.indices) common += b.contains(i);
    return static_cast<double>(common);
}

}  // namespace

TEST_CASE("planted instance invariants across overlap cases") {
    for (OverlapCase oc :
         {OverlapCase::identical, OverlapCase::partial, OverlapCase::disjoint}) {
        PlantedInstance inst = planted_instance(80, 3, oc, default_spectrum(80, 3), 0.22, 7);
        // exact decomposition
        CHECK(frobenius_norm(inst.a.as_matrix() -
                             (inst.a_bar.as_matrix() + inst.e.as_matrix())) == 0.0);
        // planted eigenpairs
        Matrix av = matmul(inst.a_bar.as_matrix(), inst.truth.cols);
        Matrix vl = inst.truth.cols;
        for (index_t i = 0; i < 80; ++i)
            for (index_t j = 0; j < 3; ++j) vl(i, j) *= inst.spectrum[static_cast<size_t>(j)];
        CHECK(frobenius_norm(av - vl) <= 1e-10);
        // orthonormal sparse truth
        CHECK(orthogonality_loss(inst.truth) <= 1e-24);
        for (index_t j = 0; j < 3; ++j) {
            std::vector<double> col = inst.truth.cols.col(j);
            for (index_t i = 0; i < 80; ++i)
                if (col[static_cast<size_t>(i)] != 0.0)
                    CHECK(inst.supports[static_cast<size_t>(j)].contains(i));
        }
        // perturbation magnitude hits the target
        CHECK(spectral_norm(inst.e.as_matrix()) == doctest::Approx(0.22).epsilon(1e-10));
        // spectrum sorted descending
        for (size_t i = 1; i < inst.spectrum.size(); ++i)
            CHECK(inst.spectrum[i] <= inst.spectrum[i - 1]);
    }
}

TEST_CASE("support layout per overlap case") {
    PlantedInstance ident =
        planted_instance(50, 3, OverlapCase::identical, default_spectrum(50, 3), 0.1, 3);
    CHECK(ident.supports[0].indices == ident.supports[1].indices);
    CHECK(ident.supports[0].indices == ident.supports[2].indices);

    PlantedInstance part =
        planted_instance(50, 3, OverlapCase::partial, default_spectrum(50, 3), 0.1, 3);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i + 1; j < 3; ++j) {
            double common = support_overlap(part.supports[i], part.supports[j]);
            if (std::abs(static_cast<double>(i) - static_cast<double>(j)) == 1) {
                CHECK(common > 0);
                CHECK(common < part.supports[i].k());
            }
        }

    PlantedInstance disj =
        planted_instance(50, 3, OverlapCase::disjoint, default_spectrum(50, 3), 0.1, 3);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i + 1; j < 3; ++j)
            CHECK(support_overlap(disj.supports[i], disj.supports[j]) == 0);

    CHECK_THROWS(planted_instance(25, 3, OverlapCase::disjoint,
                                  default_spectrum(25, 3), 0.1, 3));
}

TEST_CASE("default spectrum matches the stated head and tail") {
    std::vector<double> s = default_spectrum(20, 3);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 0.9);
    CHECK(s[2] == 0.8);
    for (size_t i = 3; i < 20; ++i) CHECK(s[i] == 0.1);
}

TEST_CASE("planted instance is deterministic in the seed") {
    PlantedInstance a =
        planted_instance(40, 2, OverlapCase::partial, default_spectrum(40, 2), 0.2, 11);
    PlantedInstance b =
        planted_instance(40, 2, OverlapCase::partial, default_spectrum(40, 2), 0.2, 11);
    CHECK(a.a.as_matrix().data() == b.a.as_matrix().data());
    PlantedInstance c =
        planted_instance(40, 2, OverlapCase::partial, default_spectrum(40, 2), 0.2, 12);
    CHECK(a.a.as_matrix().data() != c.a.as_matrix().data());
}

TEST_CASE("zero perturbation leaves the planted operator intact") {
    PlantedInstance inst =
        planted_instance(30, 2, OverlapCase::disjoint, default_spectrum(30, 2), 0.0, 5);
    CHECK(frobenius_norm(inst.e.as_matrix()) == 0.0);
    CHECK(frobenius_norm(inst.a.as_matrix() - inst.a_bar.as_matrix()) == 0.0);
}

TEST_CASE("denoising dictionary structure") {
    DenoisingData dd = denoising_signals(250, kDefaultDenoisingSigma, 13);
    CHECK(dd.data.rows() == 250);
    CHECK(dd.data.cols() == 400);
    CHECK(dd.truth_dictionary.p() == 400);
    CHECK(dd.truth_dictionary.m() == 3);
    CHECK(orthogonality_loss(dd.truth_dictionary) <= 1e-24);
    // each column is a 10x10 block of constant magnitude on the 20x20 grid
    for (index_t j = 0; j < 3; ++j) {
        std::vector<double> col = dd.truth_dictionary.cols.col(j);
        index_t nnz = 0;
        double mag = 0.0;
        for (double x : col)
            if (x != 0.0) {
                ++nnz;
                mag = std::abs(x);
            }
        CHECK(nnz == 100);
        for (double x : col)
            if (x != 0.0) CHECK(std::abs(x) == doctest::Approx(mag));
    }
    // disjoint blocks
    for (index_t i = 0; i < 400; ++i) {
        int holders = 0;
        for (index_t j = 0; j < 3; ++j) holders += dd.truth_dictionary.cols(i, j) != 0.0;
        CHECK(holders <= 1);
    }
}

TEST_CASE("noiseless denoising signals live in the dictionary span") {
    DenoisingData dd = denoising_signals(4000, 0.0, 17);
    SymMatrix cov = gram_matrix(dd.data);
    EigenDecomposition e = sym_eig(cov);
    CHECK(e.values[2] > 1e-6 * e.values[0]);
    CHECK(e.values[3] <= 1e-8 * e.values[0]);
    Basis top;
    top.cols = e.vectors.columns(0, 3);
    CHECK(sin_theta_fro(dd.truth_dictionary, top) <= 1e-6);
}

TEST_CASE("embedded correlation matrix") {
    SymMatrix pp = pitprops();
    REQUIRE(pp.dim() == 13);
    for (index_t i = 0; i < 13; ++i) {
        CHECK(pp(i, i) == 1.0);
        for (index_t j = 0; j < 13; ++j) {
            CHECK(pp(i, j) == pp(j, i));
            CHECK(std::abs(pp(i, j)) <= 1.0);
        }
    }
    EigenDecomposition e = sym_eig(pp);
    double top6 = 0.0;
    for (size_t i = 0; i < 6; ++i) top6 += e.values[i];
    CHECK(top6 / 13.0 == doctest::Approx(0.87).epsilon(0.01));
}

TEST_CASE("matrix CSV round trip") {
    Rng rng(19);
    Matrix m = rng.gaussian_matrix(7, 4);
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "torth_roundtrip.csv";
    save_matrix(path, m);
    Matrix back = load_matrix(path);
    CHECK(back.data() == m.data());
    std::filesystem::remove(path);
}

TEST_CASE("CSV parsing basics and errors") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();

    const fs::path ok = dir / "torth_ok.csv";
    std::ofstream(ok) << "1,2\n3,4\n";
    Matrix m = load_matrix(ok);
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 3.0);

    const fs::path hdr = dir / "torth_hdr.csv";
    std::ofstream(hdr) << "a,b\n1,2\n";
    CHECK_THROWS_AS(load_matrix(hdr), ParseError);
    Matrix h = load_matrix(hdr, true);
    CHECK(h.rows() == 1);

    const fs::path ragged = dir / "torth_ragged.csv";
    std::ofstream(ragged) << "1,2\n3\n";
    CHECK_THROWS_AS(load_matrix(ragged), ParseError);

    CHECK_THROWS_AS(load_matrix(dir / "torth_missing_file.csv"), ParseError);
    for (const fs::path& p : {ok, hdr, ragged}) fs::remove(p);
}

TEST_CASE("column centering") {
    Matrix m(3, 2, {1, 10, 2, 20, 3, 30});
    center_columns(m);
    for (index_t j = 0; j < 2; ++j) {
        double s = 0.0;
        for (index_t i = 0; i < 3; ++i) s += m(i, j);
        CHECK(s == doctest::Approx(0.0));
    }
    CHECK(m(0, 0) == doctest::Approx(-1.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torth/linalg.hpp"
#include "torth/rng.hpp"

using namespace torth;

namespace {

Matrix random_psd(index_t p, Rng& rng) {
    Matrix g = rng.gaussian_matrix(p, p);
    return matmul(g.transposed(), g);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double d = 0.0;
    for (index_t i = 0; i < a.rows(); ++i)
        for (index_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

}  // namespace

TEST_CASE("qr of identity columns") {
    Matrix in(4, 2);
    in(0, 0) = 1.0;
    in(1, 1) = 1.0;
    QRFactors f = householder_qr(in);
    CHECK(max_abs_diff(f.q, in) < 1e-15);
    CHECK(max_abs_diff(f.r, Matrix::identity(2)) < 1e-15);
}

TEST_CASE("qr of a single pythagorean column") {
    Matrix in(2, 1, {3.0, 4.0});
    QRFactors f = householder_qr(in);
    CHECK(f.q(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(f.q(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(f.r(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("qr reconstruction and orthonormality on random 20x5") {
    Rng rng(42);
    Matrix in = rng.gaussian_matrix(20, 5);
    QRFactors f = householder_qr(in);
    CHECK(frobenius_norm(matmul(f.q, f.r) - in) <= 1e-12 * frobenius_norm(in));
    CHECK(frobenius_norm(matmul(f.q.transposed(), f.q) - Matrix::identity(5)) <= 1e-12);
    for (index_t i = 0; i < 5; ++i) {
        CHECK(f.r(i, i) >= 0.0);
        for (index_t j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
    }
}

TEST_CASE("qr is deterministic (bit-identical)") {
    Rng rng(7);
    Matrix in = rng.gaussian_matrix(12, 4);
    QRFactors a = householder_qr(in);
    QRFactors b = householder_qr(in);
    CHECK(a.q.data() == b.q.data());
    CHECK(a.r.data() == b.r.data());
}

TEST_CASE("qr rank-deficiency carries the offending column") {
    Matrix in(3, 2);
    in(0, 0) = 1.0;
    in(0, 1) = 1.0;  // col 1 is a copy of col 0
    try {
        householder_qr(in);
        FAIL("expected RankDeficient");
    } catch (const RankDeficient& e) {
        CHECK(e.column == 1);
    }
}

TEST_CASE("svd of diagonal and zero matrices") {
    const double d[] = {3.0, 1.0};
    SVD f = svd_small(Matrix::diag(d));
    REQUIRE(f.s.size() == 2);
    CHECK(f.s[0] == doctest::Approx(3.0));
    CHECK(f.s[1] == doctest::Approx(1.0));

    SVD z = svd_small(Matrix(3, 2));
    for (double s : z.s) CHECK(s == 0.0);
    CHECK(frobenius_norm(matmul(z.u.transposed(), z.u) - Matrix::identity(2)) <= 1e-12);
}

TEST_CASE("svd singular values match eigenvalues of M^T M") {
    Rng rng(9);
    Matrix m = rng.gaussian_matrix(8, 3);
    SVD f = svd_small(m);
    EigenDecomposition e = sym_eig(SymMatrix(matmul(m.transposed(), m)));
    REQUIRE(f.s.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(f.s[i] * f.s[i] == doctest::Approx(e.values[i]).epsilon(1e-10));
        if (i > 0) CHECK(f.s[i] <= f.s[i - 1]);
    }
    // reconstruction
    Matrix us = f.u;
    for (index_t i = 0; i < us.rows(); ++i)
        for (index_t j = 0; j < us.cols(); ++j) us(i, j) *= f.s[static_cast<size_t>(j)];
    CHECK(frobenius_norm(matmul(us, f.v.transposed()) - m) <= 1e-10 * frobenius_norm(m));
}

TEST_CASE("svd of a wide matrix") {
    Rng rng(10);
    Matrix m = rng.gaussian_matrix(3, 8);
    SVD f = svd_small(m);
    Matrix us = f.u;
    for (index_t i = 0; i < us.rows(); ++i)
        for (index_t j = 0; j < us.cols(); ++j) us(i, j) *= f.s[static_cast<size_t>(j)];
    CHECK(frobenius_norm(matmul(us, f.v.transposed()) - m) <= 1e-10 * frobenius_norm(m));
}

TEST_CASE("sym_eig on diagonal input") {
    Matrix d(3, 3);
    d(0, 0) = 4.0;
    d(1, 1) = 3.0;
    d(2, 2) = 1.0;
    EigenDecomposition e = sym_eig(SymMatrix(d));
    CHECK(e.values[0] == doctest::Approx(4.0));
    CHECK(e.values[1] == doctest::Approx(3.0));
    CHECK(e.values[2] == doctest::Approx(1.0));
    for (index_t j = 0; j < 3; ++j)
        CHECK(std::abs(e.vectors(j, j)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig on the 2x2 exchange matrix") {
    Matrix x(2, 2, {0.0, 1.0, 1.0, 0.0});
    EigenDecomposition e = sym_eig(SymMatrix(x));
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(-1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(r));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(r));
}

TEST_CASE("sym_eig reconstructs random PSD 12x12") {
    Rng rng(13);
    SymMatrix a(random_psd(12, rng));
    EigenDecomposition e = sym_eig(a);
    Matrix vl = e.vectors;
    for (index_t i = 0; i < 12; ++i)
        for (index_t j = 0; j < 12; ++j) vl(i, j) *= e.values[static_cast<size_t>(j)];
    CHECK(frobenius_norm(matmul(vl, e.vectors.transposed()) - a.as_matrix()) <= 1e-9);
    CHECK(frobenius_norm(matmul(e.vectors.transposed(), e.vectors) - Matrix::identity(12)) <=
          1e-10);
}

TEST_CASE("sym_eig recovers a planted spectrum") {
    Rng rng(17);
    QRFactors f = householder_qr(rng.gaussian_matrix(9, 9));
    std::vector<double> lam = {9, 7, 5, 4, 3, 2.5, 1, 0.5, 0.1};
    Matrix vl = f.q;
    for (index_t i = 0; i < 9; ++i)
        for (index_t j = 0; j < 9; ++j) vl(i, j) *= lam[static_cast<size_t>(j)];
    EigenDecomposition e = sym_eig(SymMatrix(matmul(vl, f.q.transposed())));
    for (size_t i = 0; i < 9; ++i) CHECK(e.values[i] == doctest::Approx(lam[i]).epsilon(1e-9));
}

TEST_CASE("spectral norm basics") {
    const double d[] = {2.0, 5.0};
    CHECK(spectral_norm(Matrix::diag(d)) == doctest::Approx(5.0));
    CHECK(spectral_norm(Matrix(4, 3)) == 0.0);
    Rng rng(23);
    Matrix m = rng.gaussian_matrix(6, 6);
    CHECK(spectral_norm(m) == doctest::Approx(svd_small(m).s[0]).epsilon(1e-10));
}

TEST_CASE("spectral norm via power iteration matches svd on larger input") {
    Rng rng(29);
    Matrix m = rng.gaussian_matrix(90, 70);  // above the dense-SVD cutoff
    double lam = 0.0;
    EigenDecomposition e = sym_eig(SymMatrix(matmul(m.transposed(), m)));
    lam = std::sqrt(e.values[0]);
    CHECK(spectral_norm(m) == doctest::Approx(lam).epsilon(1e-9));
}

TEST_CASE("norm inequalities on random matrices") {
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        Matrix a = rng.gaussian_matrix(6, 5);
        Matrix b = rng.gaussian_matrix(5, 4);
        double a2 = spectral_norm(a), af = frobenius_norm(a);
        CHECK(a2 <= af + 1e-12);
        CHECK(af <= 5.0 * a2 + 1e-12);
        CHECK(frobenius_norm(matmul(a, b)) <= af * spectral_norm(b) + 1e-12);
    }
}

TEST_CASE("cholesky factor reconstructs") {
    Rng rng(37);
    Matrix g = rng.gaussian_matrix(6, 6);
    SymMatrix a(matmul(g.transposed(), g) + Matrix::identity(6));
    Matrix r = cholesky_upper(a);
    CHECK(frobenius_norm(matmul(r.transposed(), r) - a.as_matrix()) <=
          1e-10 * frobenius_norm(a.as_matrix()));
    for (index_t i = 0; i < 6; ++i)
        for (index_t j = 0; j < i; ++j) CHECK(r(i, j) == 0.0);
    SymMatrix indef(Matrix(2, 2, {1.0, 2.0, 2.0, 1.0}));
    CHECK_THROWS_AS(cholesky_upper(indef), std::runtime_error);
}

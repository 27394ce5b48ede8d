#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torth/rng.hpp"
#include "torth/subspace.hpp"

using namespace torth;

namespace {

Basis coordinate_basis(index_t p, std::initializer_list<index_t> axes) {
    Basis b;
    b.cols = Matrix(p, static_cast<index_t>(axes.size()));
    index_t j = 0;
    for (index_t ax : axes) b.cols(ax, j++) = 1.0;
    return b;
}

Basis random_orthonormal(index_t p, index_t m, Rng& rng) {
    return Basis{householder_qr(rng.gaussian_matrix(p, m)).q};
}

Matrix projector(const Basis& x) { return matmul(x.cols, x.cols.transposed()); }

}  // namespace

TEST_CASE("canonical angles of simple configurations") {
    Basis e12 = coordinate_basis(4, {0, 1});
    AngleSpectrum same = canonical_angles(e12, e12);
    CHECK(same.thetas[0] == doctest::Approx(0.0));
    CHECK(same.thetas[1] == doctest::Approx(0.0));

    Basis e1 = coordinate_basis(3, {0});
    Basis e2 = coordinate_basis(3, {1});
    CHECK(canonical_angles(e1, e2).thetas[0] == doctest::Approx(std::acos(0.0)));

    const double alpha = 0.3;
    Basis rot;
    rot.cols = Matrix(3, 1, {std::cos(alpha), std::sin(alpha), 0.0});
    CHECK(canonical_angles(e1, rot).thetas[0] == doctest::Approx(alpha).epsilon(1e-12));
}

TEST_CASE("canonical angles ascend and shape-check") {
    Rng rng(3);
    Basis x = random_orthonormal(8, 3, rng);
    Basis y = random_orthonormal(8, 3, rng);
    AngleSpectrum t = canonical_angles(x, y);
    REQUIRE(t.thetas.size() == 3);
    CHECK(t.thetas[0] <= t.thetas[1]);
    CHECK(t.thetas[1] <= t.thetas[2]);
    CHECK(t.thetas[2] <= std::acos(0.0) + 1e-12);
    Basis small = random_orthonormal(7, 3, rng);
    CHECK_THROWS_AS(canonical_angles(x, small), DimensionMismatch);
}

TEST_CASE("sin_theta_fro on simple configurations") {
    Basis e12 = coordinate_basis(5, {0, 1});
    CHECK(sin_theta_fro(e12, e12) == doctest::Approx(0.0));
    Basis e34 = coordinate_basis(5, {2, 3});
    CHECK(sin_theta_fro(e12, e34) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sin_theta_fro matches the projector-difference form") {
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
        Basis x = random_orthonormal(10, 3, rng);
        Basis y = random_orthonormal(10, 3, rng);
        double direct = sin_theta_fro(x, y);
        double via_proj = frobenius_norm(projector(x) - projector(y)) / std::sqrt(2.0);
        CHECK(direct == doctest::Approx(via_proj).epsilon(1e-10));
    }
}

TEST_CASE("sin_theta_two on simple configurations and the projector oracle") {
    Basis e1 = coordinate_basis(3, {0});
    Basis e2 = coordinate_basis(3, {1});
    CHECK(sin_theta_two(e1, e1) == doctest::Approx(0.0));
    CHECK(sin_theta_two(e1, e2) == doctest::Approx(1.0));

    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
        Basis x = random_orthonormal(9, 2, rng);
        Basis y = random_orthonormal(9, 2, rng);
        CHECK(sin_theta_two(x, y) ==
              doctest::Approx(spectral_norm(projector(x) - projector(y))).epsilon(1e-10));
        CHECK(sin_theta_two(x, y) ==
              doctest::Approx(std::sin(canonical_angles(x, y).thetas.back())).epsilon(1e-10));
    }
}

TEST_CASE("distances are symmetric, basis-invariant, and in range") {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        Basis x = random_orthonormal(12, 3, rng);
        Basis y = random_orthonormal(12, 3, rng);
        CHECK(sin_theta_fro(x, y) == doctest::Approx(sin_theta_fro(y, x)).epsilon(1e-12));
        CHECK(sin_theta_two(x, y) == doctest::Approx(sin_theta_two(y, x)).epsilon(1e-12));
        CHECK(sin_theta_two(x, y) >= 0.0);
        CHECK(sin_theta_two(x, y) <= 1.0 + 1e-12);
        CHECK(sin_theta_fro(x, y) <= std::sqrt(3.0) + 1e-12);

        Basis g = random_orthonormal(3, 3, rng);
        Basis h = random_orthonormal(3, 3, rng);
        Basis xg{matmul(x.cols, g.cols)};
        Basis yh{matmul(y.cols, h.cols)};
        CHECK(sin_theta_fro(xg, yh) == doctest::Approx(sin_theta_fro(x, y)).epsilon(1e-10));
        CHECK(sin_theta_two(xg, yh) == doctest::Approx(sin_theta_two(x, y)).epsilon(1e-10));
    }
}

TEST_CASE("per-angle sin/cos complement") {
    Rng rng(19);
    Basis x = random_orthonormal(10, 3, rng);
    Basis y = random_orthonormal(10, 3, rng);
    AngleSpectrum t = canonical_angles(x, y);
    // Independent sines: singular values of (I - XX^T) Y, descending.
    Matrix res = y.cols - matmul(projector(x), y.cols);
    SVD f = svd_small(res);
    for (size_t j = 0; j < 3; ++j) {
        double s = std::sin(t.thetas[2 - j]);
        CHECK(s == doctest::Approx(f.s[j]).epsilon(1e-9));
    }
}

TEST_CASE("orthogonality loss") {
    Rng rng(23);
    Basis q = random_orthonormal(8, 3, rng);
    CHECK(orthogonality_loss(q) <= 1e-24);
    Basis dup;
    dup.cols = Matrix(4, 2);
    dup.cols(0, 0) = 1.0;
    dup.cols(0, 1) = 1.0;
    CHECK(orthogonality_loss(dup) == doctest::Approx(2.0));
}

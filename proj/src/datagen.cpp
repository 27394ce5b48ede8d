#include "torth/datagen.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "torth/linalg.hpp"
#include "torth/rng.hpp"

namespace torth {

std::vector<double> default_spectrum(index_t p, index_t m) {
    std::vector<double> s(static_cast<size_t>(p), 0.1);
    for (index_t j = 0; j < m; ++j) s[static_cast<size_t>(j)] = 1.0 - 0.1 * static_cast<double>(j);
    return s;
}

namespace {

std::vector<SupportSet> layout_supports(index_t p, index_t m, OverlapCase overlap,
                                        index_t k_bar) {
    std::vector<SupportSet> supports;
    for (index_t j = 0; j < m; ++j) {
        index_t start = 0;
        switch (overlap) {
            case OverlapCase::identical: start = 0; break;
            case OverlapCase::partial: start = j * (k_bar / 2); break;
            case OverlapCase::disjoint: start = j * k_bar; break;
        }
        if (start + k_bar > p) throw DimensionMismatch("planted_instance: supports do not fit");
        SupportSet f;
        for (index_t i = 0; i < k_bar; ++i) f.indices.push_back(start + i);
        supports.push_back(std::move(f));
    }
    return supports;
}

// Sign vectors +-1/sqrt(k_bar) on each support, made exactly orthonormal by
// Gram-Schmidt against the previous columns restricted to the new support.
// Restricting keeps each column inside its own support while the global
// inner products vanish, since <v_i, v_j> only sees coordinates in S_i.
Matrix plant_truth(index_t p, const std::vector<SupportSet>& supports, Rng& rng) {
    const auto m = static_cast<index_t>(supports.size());
    Matrix truth(p, m);
    for (index_t j = 0; j < m; ++j) {
        const auto& sj = supports[static_cast<size_t>(j)];
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::vector<double> v(static_cast<size_t>(p), 0.0);
            for (index_t i : sj.indices)
                v[static_cast<size_t>(i)] =
                    attempt == 0 ? rng.sign() / std::sqrt(static_cast<double>(sj.k()))
                                 : rng.gaussian();

            // Orthonormalize the masked previous columns, then project out.
            std::vector<std::vector<double>> w;
            for (index_t l = 0; l < j; ++l) {
                std::vector<double> wl(static_cast<size_t>(p), 0.0);
                for (index_t i : sj.indices) wl[static_cast<size_t>(i)] = truth(i, l);
                for (const auto& prev : w) {
                    const double d = dot(wl, prev);
                    for (size_t i = 0; i < wl.size(); ++i) wl[i] -= d * prev[i];
                }
                const double n = norm2(wl);
                if (n > 1e-12) {
                    for (auto& e : wl) e /= n;
                    w.push_back(std::move(wl));
                }
            }
            for (const auto& wl : w) {
                // Exact orthogonality to the full previous column requires
                // projecting against its unmasked restriction direction too:
                // <v, truth_l> = <v, masked truth_l>, handled by spanning the
                // masked columns.
                const double d = dot(v, wl);
                for (size_t i = 0; i < v.size(); ++i) v[i] -= d * wl[i];
            }
            const double n = norm2(v);
            if (n > 1e-8) {
                for (index_t i = 0; i < p; ++i) truth(i, j) = v[static_cast<size_t>(i)] / n;
                break;
            }
        }
    }
    return truth;
}

}  // namespace

PlantedInstance planted_instance(index_t p, index_t m, OverlapCase overlap,
                                 std::vector<double> spectrum, double rho_e_target,
                                 uint64_t seed, index_t k_bar) {
    if (static_cast<index_t>(spectrum.size()) != p)
        throw DimensionMismatch("planted_instance: spectrum length must equal p");
    for (size_t i = 1; i < spectrum.size(); ++i)
        if (spectrum[i] > spectrum[i - 1])
            throw DimensionMismatch("planted_instance: spectrum must be non-increasing");

    Rng rng(seed);
    PlantedInstance inst;
    inst.seed = seed;
    inst.spectrum = std::move(spectrum);
    inst.supports = layout_supports(p, m, overlap, k_bar);
    inst.truth = Basis{plant_truth(p, inst.supports, rng)};

    // Tighten supports to the actual nonzero sets (orthogonalization can
    // zero an overlapped entry).
    for (index_t j = 0; j < m; ++j) {
        SupportSet actual;
        for (index_t i = 0; i < p; ++i)
            if (inst.truth.cols(i, j) != 0.0) actual.indices.push_back(i);
        inst.supports[static_cast<size_t>(j)] = std::move(actual);
    }

    const double tail = inst.spectrum[static_cast<size_t>(m)];
    bool constant_tail = true;
    for (index_t j = m; j < p; ++j)
        if (inst.spectrum[static_cast<size_t>(j)] != tail) constant_tail = false;

    Matrix a_bar(p, p);
    if (constant_tail) {
        // A_bar = tail I + sum_j (lambda_j - tail) v_j v_j^T; the random
        // orthonormal completion contributes tail * (I - sum v v^T) exactly.
        for (index_t i = 0; i < p; ++i) a_bar(i, i) = tail;
        for (index_t j = 0; j < m; ++j) {
            const double w = inst.spectrum[static_cast<size_t>(j)] - tail;
            for (index_t i : inst.supports[static_cast<size_t>(j)].indices)
                for (index_t l : inst.supports[static_cast<size_t>(j)].indices)
                    a_bar(i, l) += w * inst.truth.cols(i, j) * inst.truth.cols(l, j);
        }
    } else {
        Matrix full(p, p);
        for (index_t j = 0; j < m; ++j) full.set_col(j, inst.truth.cols.col(j));
        for (index_t j = m; j < p; ++j)
            for (index_t i = 0; i < p; ++i) full(i, j) = rng.gaussian();
        const Matrix v = householder_qr(full).q;
        Matrix scaled = v;
        for (index_t j = 0; j < p; ++j)
            for (index_t i = 0; i < p; ++i) scaled(i, j) *= inst.spectrum[static_cast<size_t>(j)];
        a_bar = matmul(scaled, v.transposed());
    }
    inst.a_bar = SymMatrix(a_bar);

    if (rho_e_target == 0.0) {
        inst.e = SymMatrix(Matrix(p, p));
        inst.a = inst.a_bar;
        return inst;
    }

    Matrix g = rng.gaussian_matrix(p, p);
    SymMatrix e0(g);
    const double rho = spectral_norm(e0.as_matrix());
    Matrix e_scaled = e0.as_matrix();
    e_scaled *= rho_e_target / rho;
    inst.e = SymMatrix::from_symmetric_parts(std::move(e_scaled));
    inst.a = SymMatrix::from_symmetric_parts(inst.a_bar.as_matrix() + inst.e.as_matrix());
    return inst;
}

DenoisingData denoising_signals(index_t n, double noise_sigma, uint64_t seed) {
    constexpr index_t grid = 20;
    constexpr index_t block = 10;
    constexpr index_t p = grid * grid;
    Rng rng(seed);

    Matrix dict(p, 3);
    const double amp = 1.0 / static_cast<double>(block);  // unit-norm 10x10 block
    const index_t corners[3][2] = {{0, 0}, {0, block}, {block, 0}};
    for (index_t j = 0; j < 3; ++j)
        for (index_t r = 0; r < block; ++r)
            for (index_t c = 0; c < block; ++c)
                dict((corners[j][0] + r) * grid + (corners[j][1] + c), j) = amp;

    // [u1,u2,u3] ~ N(0, [[1,0,.5],[0,1,.5],[.5,.5,1]])
    const SymMatrix coeff_cov(Matrix(3, 3, {1.0, 0.0, 0.5, 0.0, 1.0, 0.5, 0.5, 0.5, 1.0}));
    const Matrix r = cholesky_upper(coeff_cov);

    Matrix data(n, p);
    for (index_t s = 0; s < n; ++s) {
        double gvec[3] = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
        double u[3];
        for (int j = 0; j < 3; ++j) {  // u = R^T g has covariance R^T R
            u[j] = 0.0;
            for (int i = 0; i <= j; ++i) u[j] += r(i, j) * gvec[i];
        }
        for (index_t i = 0; i < p; ++i) {
            double x = noise_sigma * rng.gaussian();
            for (int j = 0; j < 3; ++j) x += u[j] * dict(i, j);
            data(s, i) = x;
        }
    }
    return {std::move(data), Basis{std::move(dict)}};
}

SymMatrix pitprops() {
    // Jeffers (1967), correlation matrix of the 13 pit prop variables.
    const double lower[13][13] = {
        {1.0},
        {0.954, 1.0},
        {0.364, 0.297, 1.0},
        {0.342, 0.284, 0.882, 1.0},
        {-0.129, -0.118, -0.148, 0.220, 1.0},
        {0.313, 0.291, 0.153, 0.381, 0.364, 1.0},
        {0.496, 0.503, -0.029, 0.174, 0.296, 0.813, 1.0},
        {0.424, 0.419, -0.054, -0.059, 0.004, 0.090, 0.372, 1.0},
        {0.592, 0.648, 0.125, 0.137, -0.039, 0.211, 0.465, 0.482, 1.0},
        {0.545, 0.569, -0.081, -0.014, 0.037, 0.274, 0.679, 0.557, 0.526, 1.0},
        {0.084, 0.076, 0.162, 0.097, 0.091, -0.036, -0.113, 0.061, 0.085, -0.319, 1.0},
        {-0.019, -0.036, 0.220, 0.169, -0.145, 0.024, -0.232, -0.357, -0.127, -0.368, 0.029,
         1.0},
        {0.134, 0.144, 0.126, 0.015, -0.208, -0.329, -0.424, -0.202, -0.076, -0.291, 0.007,
         0.184, 1.0},
    };
    Matrix m(13, 13);
    for (index_t i = 0; i < 13; ++i)
        for (index_t j = 0; j <= i; ++j) {
            m(i, j) = lower[i][j];
            m(j, i) = lower[i][j];
        }
    return SymMatrix::from_symmetric_parts(std::move(m));
}

Matrix load_matrix(const std::filesystem::path& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<double> entries;
    index_t rows = 0, cols = -1;
    std::string line;
    index_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_header && lineno == 1) continue;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        index_t c = 0;
        while (std::getline(ss, cell, ',')) {
            size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw ParseError("parse error at line " + std::to_string(lineno) + ", column " +
                                 std::to_string(c + 1));
            }
            entries.push_back(v);
            ++c;
        }
        if (cols < 0) {
            cols = c;
        } else if (c != cols) {
            throw ParseError("non-rectangular row at line " + std::to_string(lineno));
        }
        ++rows;
    }
    if (rows == 0 || cols <= 0) throw ParseError("empty matrix in " + path.string());
    return Matrix(rows, cols, std::move(entries));
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    out.precision(17);
    for (index_t i = 0; i < m.rows(); ++i) {
        for (index_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

void center_columns(Matrix& m) {
    for (index_t j = 0; j < m.cols(); ++j) {
        double mean = 0.0;
        for (index_t i = 0; i < m.rows(); ++i) mean += m(i, j);
        mean /= static_cast<double>(m.rows());
        for (index_t i = 0; i < m.rows(); ++i) m(i, j) -= mean;
    }
}

SymMatrix gram_matrix(const Matrix& data) {
    return SymMatrix(matmul(data.transposed(), data));
}

}  // namespace torth

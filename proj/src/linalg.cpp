#include "torth/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace torth {

QRFactors householder_qr(const Matrix& input) {
    const index_t p = input.rows(), m = input.cols();
    if (p < m) throw DimensionMismatch("householder_qr: need rows >= cols");
    input.check_finite();
    const double scale = frobenius_norm(input);

    Matrix r = input;
    // Householder vectors, one per column, stored in the lower part of work.
    std::vector<std::vector<double>> vs(static_cast<size_t>(m));
    std::vector<double> betas(static_cast<size_t>(m), 0.0);

    for (index_t j = 0; j < m; ++j) {
        double sigma = 0.0;
        for (index_t i = j; i < p; ++i) sigma += r(i, j) * r(i, j);
        double alpha = std::sqrt(sigma);
        double x0 = r(j, j);
        if (x0 > 0) alpha = -alpha;

        std::vector<double> v(static_cast<size_t>(p - j), 0.0);
        v[0] = x0 - alpha;
        for (index_t i = j + 1; i < p; ++i) v[static_cast<size_t>(i - j)] = r(i, j);
        double vnorm2 = dot(v, v);
        double beta = vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0;

        if (beta != 0.0) {
            for (index_t k = j; k < m; ++k) {
                double s = 0.0;
                for (index_t i = j; i < p; ++i) s += v[static_cast<size_t>(i - j)] * r(i, k);
                s *= beta;
                for (index_t i = j; i < p; ++i) r(i, k) -= s * v[static_cast<size_t>(i - j)];
            }
        }
        r(j, j) = alpha;
        for (index_t i = j + 1; i < p; ++i) r(i, j) = 0.0;
        vs[static_cast<size_t>(j)] = std::move(v);
        betas[static_cast<size_t>(j)] = beta;

        if (std::abs(r(j, j)) < 1e-14 * scale) throw RankDeficient(j);
    }

    // Accumulate the thin Q by applying reflectors in reverse to I(:, 0:m).
    Matrix q(p, m);
    for (index_t j = 0; j < m; ++j) q(j, j) = 1.0;
    for (index_t j = m - 1; j >= 0; --j) {
        const auto& v = vs[static_cast<size_t>(j)];
        const double beta = betas[static_cast<size_t>(j)];
        if (beta == 0.0) continue;
        for (index_t k = 0; k < m; ++k) {
            double s = 0.0;
            for (index_t i = j; i < p; ++i) s += v[static_cast<size_t>(i - j)] * q(i, k);
            s *= beta;
            for (index_t i = j; i < p; ++i) q(i, k) -= s * v[static_cast<size_t>(i - j)];
        }
    }

    // Sign convention: r(i,i) >= 0.
    for (index_t j = 0; j < m; ++j) {
        if (r(j, j) < 0.0) {
            for (index_t k = j; k < m; ++k) r(j, k) = -r(j, k);
            for (index_t i = 0; i < p; ++i) q(i, j) = -q(i, j);
        }
    }
    Matrix r_thin(m, m);
    for (index_t i = 0; i < m; ++i)
        for (index_t j = i; j < m; ++j) r_thin(i, j) = r(i, j);
    return {std::move(q), std::move(r_thin)};
}

namespace {

// Completes zero columns of u (rank-deficient input) to an orthonormal set.
void complete_orthonormal(Matrix& u, index_t from) {
    const index_t p = u.rows(), k = u.cols();
    index_t next_basis = 0;
    for (index_t j = from; j < k; ++j) {
        while (true) {
            std::vector<double> c(static_cast<size_t>(p), 0.0);
            c[static_cast<size_t>(next_basis % p)] = 1.0;
            ++next_basis;
            for (index_t l = 0; l < j; ++l) {
                double s = 0.0;
                for (index_t i = 0; i < p; ++i) s += u(i, l) * c[static_cast<size_t>(i)];
                for (index_t i = 0; i < p; ++i) c[static_cast<size_t>(i)] -= s * u(i, l);
            }
            double n = norm2(c);
            if (n > 0.5) {
                for (index_t i = 0; i < p; ++i) u(i, j) = c[static_cast<size_t>(i)] / n;
                break;
            }
        }
    }
}

SVD svd_tall(const Matrix& input) {
    const index_t p = input.rows(), m = input.cols();
    Matrix a = input;
    Matrix v = Matrix::identity(m);

    const double fro = frobenius_norm(a);
    if (fro == 0.0) {
        Matrix u(p, m);
        complete_orthonormal(u, 0);
        return {std::move(u), std::vector<double>(static_cast<size_t>(m), 0.0), std::move(v)};
    }

    const double tol = 1e-15;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (index_t i = 0; i < m - 1; ++i) {
            for (index_t j = i + 1; j < m; ++j) {
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (index_t r = 0; r < p; ++r) {
                    aii += a(r, i) * a(r, i);
                    ajj += a(r, j) * a(r, j);
                    aij += a(r, i) * a(r, j);
                }
                if (std::abs(aij) <= tol * std::sqrt(aii * ajj)) continue;
                rotated = true;
                const double tau = (ajj - aii) / (2.0 * aij);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (index_t r = 0; r < p; ++r) {
                    const double x = a(r, i), y = a(r, j);
                    a(r, i) = c * x - s * y;
                    a(r, j) = s * x + c * y;
                }
                for (index_t r = 0; r < m; ++r) {
                    const double x = v(r, i), y = v(r, j);
                    v(r, i) = c * x - s * y;
                    v(r, j) = s * x + c * y;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> s(static_cast<size_t>(m), 0.0);
    for (index_t j = 0; j < m; ++j) {
        double n = 0.0;
        for (index_t r = 0; r < p; ++r) n += a(r, j) * a(r, j);
        s[static_cast<size_t>(j)] = std::sqrt(n);
    }

    std::vector<index_t> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(), [&](index_t x, index_t y) {
        return s[static_cast<size_t>(x)] > s[static_cast<size_t>(y)];
    });

    Matrix u(p, m);
    Matrix vs(m, m);
    std::vector<double> ss(static_cast<size_t>(m));
    index_t effective_rank = m;
    for (index_t j = 0; j < m; ++j) {
        const index_t src = order[static_cast<size_t>(j)];
        const double sj = s[static_cast<size_t>(src)];
        ss[static_cast<size_t>(j)] = sj;
        for (index_t r = 0; r < m; ++r) vs(r, j) = v(r, src);
        if (sj > fro * 1e-300) {
            for (index_t r = 0; r < p; ++r) u(r, j) = a(r, src) / sj;
        } else if (effective_rank == m) {
            effective_rank = j;
        }
    }
    if (effective_rank < m) complete_orthonormal(u, effective_rank);
    return {std::move(u), std::move(ss), std::move(vs)};
}

}  // namespace

SVD svd_small(const Matrix& m) {
    m.check_finite();
    if (m.rows() >= m.cols()) return svd_tall(m);
    SVD t = svd_tall(m.transposed());
    return {std::move(t.v), std::move(t.s), std::move(t.u)};
}

EigenDecomposition sym_eig(const SymMatrix& sym) {
    const index_t n = sym.dim();
    Matrix a = sym.as_matrix();
    Matrix v = Matrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (index_t i = 0; i < n; ++i)
            for (index_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    const double scale = frobenius_norm(a);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps && off_norm() > 1e-15 * scale; ++sweep) {
        for (index_t p = 0; p < n - 1; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                for (index_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (index_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (index_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<double> lambda(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) lambda[static_cast<size_t>(i)] = a(i, i);

    std::vector<index_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), index_t{0});
    std::stable_sort(order.begin(), order.end(), [&](index_t x, index_t y) {
        return lambda[static_cast<size_t>(x)] > lambda[static_cast<size_t>(y)];
    });

    EigenDecomposition out;
    out.values.resize(static_cast<size_t>(n));
    out.vectors = Matrix(n, n);
    for (index_t j = 0; j < n; ++j) {
        const index_t src = order[static_cast<size_t>(j)];
        out.values[static_cast<size_t>(j)] = lambda[static_cast<size_t>(src)];
        for (index_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, src);
    }
    return out;
}

double spectral_norm(const Matrix& m) {
    m.check_finite();
    if (std::max(m.rows(), m.cols()) <= 64) {
        SVD d = svd_small(m);
        return d.s.empty() ? 0.0 : d.s.front();
    }

    // Power iteration on M^T M; deterministic start from the largest column.
    const index_t n = m.cols();
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    index_t best = 0;
    double best_norm = -1.0;
    for (index_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (index_t i = 0; i < m.rows(); ++i) s += m(i, j) * m(i, j);
        if (s > best_norm) { best_norm = s; best = j; }
    }
    if (best_norm == 0.0) return 0.0;
    x[static_cast<size_t>(best)] = 1.0;
    // A dash of every coordinate avoids starts exactly orthogonal to the
    // leading singular vector.
    for (index_t j = 0; j < n; ++j) x[static_cast<size_t>(j)] += 1e-4 * (1.0 + double(j % 7));
    double nx = norm2(x);
    for (auto& e : x) e /= nx;

    double sigma = 0.0;
    const Matrix mt = m.transposed();
    for (int it = 0; it < 50000; ++it) {
        std::vector<double> y = matvec(m, x);
        std::vector<double> z = matvec(mt, y);
        double zn = norm2(z);
        if (zn == 0.0) return 0.0;
        for (auto& e : z) e /= zn;
        double new_sigma = std::sqrt(zn);
        x = std::move(z);
        if (std::abs(new_sigma - sigma) <= 1e-13 * new_sigma && it > 8) {
            sigma = new_sigma;
            break;
        }
        sigma = new_sigma;
    }
    return sigma;
}

Matrix cholesky_upper(const SymMatrix& a) {
    const index_t n = a.dim();
    Matrix r(n, n);
    double diag_max = 0.0;
    for (index_t i = 0; i < n; ++i) diag_max = std::max(diag_max, a(i, i));
    for (index_t i = 0; i < n; ++i) {
        double d = a(i, i);
        for (index_t k = 0; k < i; ++k) d -= r(k, i) * r(k, i);
        // relative pivot tolerance: rounding leaves singular inputs with a
        // tiny positive pivot instead of an exact zero
        if (d <= diag_max * 1e-12) throw std::runtime_error("cholesky: matrix not positive definite");
        r(i, i) = std::sqrt(d);
        for (index_t j = i + 1; j < n; ++j) {
            double s = a(i, j);
            for (index_t k = 0; k < i; ++k) s -= r(k, i) * r(k, j);
            r(i, j) = s / r(i, i);
        }
    }
    return r;
}

}  // namespace torth

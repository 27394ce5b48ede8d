#pragma once

#include <cstdint>
#include <cmath>

#include "torth/matrix.hpp"

namespace torth {

/// Deterministic generator with hand-rolled gaussians so that results are
/// bit-identical across platforms and standard library versions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed == 0 ? 0x9e3779b97f4a7c15ULL : seed) {}

    uint64_t next_u64() {
        // splitmix64
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double sign() { return (next_u64() & 1) ? 1.0 : -1.0; }

    /// Stable per-trial seed derivation; independent of worker scheduling.
    static uint64_t derive(uint64_t base, uint64_t index) {
        Rng r(base ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL));
        return r.next_u64();
    }

    Matrix gaussian_matrix(index_t rows, index_t cols) {
        Matrix m(rows, cols);
        for (auto& x : m.data()) x = gaussian();
        return m;
    }

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace torth

#pragma once

#include <filesystem>

#include "torth/matrix.hpp"
#include "torth/subspace.hpp"
#include "torth/truncation.hpp"

namespace torth {

enum class OverlapCase { identical, partial, disjoint };

/// A synthetic problem A = A_bar + E with planted sparse leading
/// eigenvectors and known spectrum.
struct PlantedInstance {
    SymMatrix a_bar;
    SymMatrix e;
    SymMatrix a;
    Basis truth;                   // p x m, orthonormal, k_bar-sparse columns
    std::vector<double> spectrum;  // descending, length p
    std::vector<SupportSet> supports;
    uint64_t seed = 0;
};

/// Default eigenvalues: 1, 0.9, 0.8, then 0.1 for the tail.
std::vector<double> default_spectrum(index_t p, index_t m);

PlantedInstance planted_instance(index_t p, index_t m, OverlapCase overlap,
                                 std::vector<double> spectrum, double rho_e_target,
                                 uint64_t seed, index_t k_bar = 10);

struct DenoisingData {
    Matrix data;             // n x 400 signals
    Basis truth_dictionary;  // 400 x 3, one 10x10 block per column on a 20x20 grid
};

constexpr double kDefaultDenoisingSigma = 0.01;  // 0.1 x block amplitude

DenoisingData denoising_signals(index_t n, double noise_sigma, uint64_t seed);

/// The Jeffers (1967) pit props correlation matrix, 13 x 13.
SymMatrix pitprops();

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Matrix load_matrix(const std::filesystem::path& path, bool skip_header = false);
void save_matrix(const std::filesystem::path& path, const Matrix& m);

/// Subtract the column means in place.
void center_columns(Matrix& m);

/// X^T X as a symmetric operator matrix.
SymMatrix gram_matrix(const Matrix& data);

}  // namespace torth

#pragma once

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pmbell/linalg.hpp"

namespace pmbell::test {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline bool approx_identity(const Matrix& m, double tol = kAlgebraTol) {
    return max_abs_diff(m, Matrix::Identity(m.rows(), m.cols())) <= tol;
}

// Random density operator via a Ginibre matrix G: G G^dag / Tr(G G^dag).
inline Matrix random_density(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex{gauss(rng), gauss(rng)};
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed = 0x5eed) { return std::mt19937_64(seed); }

}  // namespace pmbell::test

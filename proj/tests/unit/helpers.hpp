#pragma once

#include <cmath>
#include <vector>

#include "cauchy_sketch/matrix.hpp"
#include "cauchy_sketch/random.hpp"

namespace test_util {

inline cauchy_sketch::DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    cauchy_sketch::RngStream rng(seed, 99);
    cauchy_sketch::DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = rng.gaussian();
    return m;
}

inline std::vector<double> gaussian_vec(std::size_t n, std::uint64_t seed) {
    cauchy_sketch::RngStream rng(seed, 98);
    return cauchy_sketch::sample_gaussian(rng, n);
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Standard Cauchy CDF.
inline double cauchy_cdf(double x) { return 0.5 + std::atan(x) / M_PI; }

}  // namespace test_util

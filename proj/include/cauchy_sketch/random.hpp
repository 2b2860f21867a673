#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cauchy_sketch {

/// Seeded random stream. Identical (seed, stream_id) pairs produce identical
/// sequences on every platform: the engine is std::mt19937_64 seeded through
/// std::seed_seq, and all variate transforms are written out here instead of
/// relying on implementation-defined <random> distributions.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open();
    /// Uniform integer in [0, bound), bound >= 1 (rejection sampling, unbiased).
    std::uint64_t uniform_index(std::uint64_t bound);
    double cauchy();
    double gaussian();
    /// Standard Laplace: density ½e^{-|x|}.
    double laplace();
    /// ±1 with equal probability.
    double sign();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// n i.i.d. standard Cauchy variates via tan(π(u - ½)).
std::vector<double> sample_cauchy(RngStream& rng, std::size_t n);
std::vector<double> sample_gaussian(RngStream& rng, std::size_t n);
std::vector<double> sample_laplace(RngStream& rng, std::size_t n);

/// Stream ids used by the library, so separate constructions seeded from the
/// same user seed never share randomness.
namespace streams {
inline constexpr std::uint64_t kSketch = 1;
inline constexpr std::uint64_t kLeverage = 2;
inline constexpr std::uint64_t kCoreset = 3;
inline constexpr std::uint64_t kGenerator = 4;
inline constexpr std::uint64_t kNoise = 5;
inline constexpr std::uint64_t kDirections = 6;
inline constexpr std::uint64_t kMonteCarlo = 7;
}  // namespace streams

}  // namespace cauchy_sketch

#include "cauchy_sketch/random.hpp"

#include <cmath>
#include <numbers>

namespace cauchy_sketch {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RngStream::uniform_open() {
    const std::uint64_t k = engine_() >> 11;  // 53 random bits
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

double RngStream::cauchy() { return std::tan(std::numbers::pi * (uniform_open() - 0.5)); }

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return radius * std::cos(theta);
}

double RngStream::laplace() {
    const double u = uniform_open() - 0.5;
    const double mag = -std::log1p(-2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
}

double RngStream::sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

std::vector<double> sample_cauchy(RngStream& rng, std::size_t n) {
    std::vector<double> out(n);
    for (double& x : out) x = rng.cauchy();
    return out;
}

std::vector<double> sample_gaussian(RngStream& rng, std::size_t n) {
    std::vector<double> out(n);
    for (double& x : out) x = rng.gaussian();
    return out;
}

std::vector<double> sample_laplace(RngStream& rng, std::size_t n) {
    std::vector<double> out(n);
    for (double& x : out) x = rng.laplace();
    return out;
}

}  // namespace cauchy_sketch

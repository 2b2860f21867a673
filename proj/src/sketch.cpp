#include "cauchy_sketch/sketch.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <nlohmann/json.hpp>

#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "cauchy_sketch/random.hpp"
#include "eigen_view.hpp"

namespace cauchy_sketch {

std::string_view to_string(SketchKind kind) {
    switch (kind) {
        case SketchKind::CT: return "CT";
        case SketchKind::FCT1: return "FCT1";
        case SketchKind::FCT2: return "FCT2";
        case SketchKind::GT: return "GT";
        case SketchKind::SRHT: return "SRHT";
    }
    return "?";
}

SketchKind parse_sketch_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "ct") return SketchKind::CT;
    if (lower == "fct1") return SketchKind::FCT1;
    if (lower == "fct2") return SketchKind::FCT2;
    if (lower == "gt") return SketchKind::GT;
    if (lower == "srht" || lower == "fjlt") return SketchKind::SRHT;
    throw ArgumentError("unknown sketch kind '" + std::string(name) + "'");
}

namespace {

double two_d_log_d(std::size_t d) {
    const double dd = static_cast<double>(d);
    return std::max(2.0 * dd, 2.0 * dd * std::log(dd));
}

}  // namespace

std::size_t default_r1(std::size_t d) {
    return static_cast<std::size_t>(std::ceil(two_d_log_d(std::max<std::size_t>(d, 1))));
}

std::size_t default_gt_r1(std::size_t d) { return 2 * std::max<std::size_t>(d, 1); }

std::size_t default_fct1_block(std::size_t d) { return next_power_of_two(2 * d * d); }

std::size_t default_fct2_block_out(std::size_t d) {
    const double e = std::ceil(2.0 * std::log2(two_d_log_d(std::max<std::size_t>(d, 1))));
    return std::size_t{1} << static_cast<unsigned>(e);
}

std::size_t default_fct2_block_in(std::size_t n, std::size_t s) {
    return std::min(next_power_of_two(s * s), next_power_of_two(n));
}

SketchSpec with_defaults(SketchSpec spec) {
    if (spec.n == 0) throw ArgumentError("SketchSpec: n must be >= 1");
    if (spec.d == 0) spec.d = 1;
    switch (spec.kind) {
        case SketchKind::CT:
        case SketchKind::SRHT:
            if (spec.r1 == 0) spec.r1 = default_r1(spec.d);
            break;
        case SketchKind::GT:
            if (spec.r1 == 0) spec.r1 = default_gt_r1(spec.d);
            break;
        case SketchKind::FCT1:
            if (spec.r1 == 0) spec.r1 = default_r1(spec.d);
            if (spec.block_in == 0) spec.block_in = default_fct1_block(spec.d);
            break;
        case SketchKind::FCT2:
        {
            if (spec.r1 == 0) spec.r1 = default_r1(spec.d);
            const bool defaulted = spec.block_out == 0 || spec.block_in == 0;
            if (spec.block_out == 0) spec.block_out = default_fct2_block_out(spec.d);
            if (spec.block_in == 0) spec.block_in = default_fct2_block_in(spec.n, spec.block_out);
            if (defaulted) spec.block_out = std::min(spec.block_out, spec.block_in);
            break;
        }
    }
    return spec;
}

void SketchSpec::validate() const {
    if (n == 0) throw ArgumentError("SketchSpec: n must be >= 1");
    if (r1 == 0) throw ArgumentError("SketchSpec: r1 must be >= 1");
    switch (kind) {
        case SketchKind::FCT1:
            if (!is_power_of_two(block_in))
                throw ArgumentError("SketchSpec: FCT1 block size must be a power of two");
            break;
        case SketchKind::FCT2:
            if (!is_power_of_two(block_in))
                throw ArgumentError("SketchSpec: FCT2 block_in must be a power of two");
            if (block_out == 0 || block_out > block_in)
                throw ArgumentError("SketchSpec: FCT2 needs 1 <= block_out <= block_in");
            break;
        case SketchKind::SRHT:
            if (r1 > next_power_of_two(n))
                throw ArgumentError("SketchSpec: SRHT r1 exceeds padded row count");
            break;
        default:
            break;
    }
}

std::string SketchSpec::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(kind));
    j["n"] = n;
    j["d"] = d;
    j["r1"] = r1;
    j["block_in"] = block_in;
    j["block_out"] = block_out;
    j["seed"] = seed;
    return j.dump();
}

SketchSpec SketchSpec::from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        SketchSpec spec;
        spec.kind = parse_sketch_kind(j.at("kind").get<std::string>());
        spec.n = j.at("n").get<std::size_t>();
        spec.d = j.at("d").get<std::size_t>();
        spec.r1 = j.at("r1").get<std::size_t>();
        spec.block_in = j.value("block_in", std::size_t{0});
        spec.block_out = j.value("block_out", std::size_t{0});
        spec.seed = j.at("seed").get<std::uint64_t>();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("SketchSpec::from_json: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

namespace {

/// s distinct indices from [0, t) by partial Fisher–Yates.
std::vector<std::size_t> sample_without_replacement(RngStream& rng, std::size_t t, std::size_t s) {
    std::vector<std::size_t> pool(t);
    for (std::size_t i = 0; i < t; ++i) pool[i] = i;
    for (std::size_t i = 0; i < s; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(t - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(s);
    return pool;
}

}  // namespace

BlockSrht::BlockSrht(std::size_t block_in, std::size_t block_out, std::uint64_t seed,
                     std::uint64_t stream_id)
    : t_(block_in), s_(block_out) {
    if (!is_power_of_two(t_)) throw ArgumentError("BlockSrht: block_in must be a power of two");
    if (s_ == 0 || s_ > t_) throw ArgumentError("BlockSrht: need 1 <= block_out <= block_in");
    RngStream rng(seed, stream_id);
    signs_.resize(t_);
    for (double& x : signs_) x = rng.sign();
    kept_rows_ = sample_without_replacement(rng, t_, s_);
}

std::vector<double> BlockSrht::apply_block(std::span<const double> z) const {
    if (z.size() > t_) throw DimensionError("BlockSrht::apply_block: block too long");
    std::vector<double> work(t_, 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) work[i] = signs_[i] * z[i];
    fwht_normalized_inplace(work);
    const double scale = std::sqrt(static_cast<double>(t_) / static_cast<double>(s_));
    std::vector<double> out(s_);
    for (std::size_t k = 0; k < s_; ++k) out[k] = scale * work[kept_rows_[k]];
    return out;
}

std::vector<double> BlockSrht::apply(std::span<const double> y) const {
    const std::size_t blocks = num_blocks(y.size());
    std::vector<double> out;
    out.reserve(blocks * s_);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t first = b * t_;
        const std::size_t len = std::min(t_, y.size() - first);
        auto part = apply_block(y.subspan(first, len));
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

DenseMatrix BlockSrht::apply_left(const DenseMatrix& a) const {
    DenseMatrix out(num_blocks(a.rows()) * s_, a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) out.set_col(j, apply(a.col(j)));
    return out;
}

// ---------------------------------------------------------------------------

SketchOperator make_sketch(const SketchSpec& requested) {
    const SketchSpec spec = with_defaults(requested);
    spec.validate();
    RngStream rng(spec.seed, streams::kSketch);
    const std::size_t r1 = spec.r1;

    switch (spec.kind) {
        case SketchKind::CT:
        case SketchKind::GT: {
            const bool cauchy = spec.kind == SketchKind::CT;
            const double scale = cauchy ? 4.0 / static_cast<double>(r1) : 1.0;
            DenseMatrix m(r1, spec.n);
            for (double& x : m.data()) x = scale * (cauchy ? rng.cauchy() : rng.gaussian());
            return SketchOperator(spec, scale, SketchOperator::Dense{std::move(m)});
        }
        case SketchKind::FCT1: {
            const std::size_t s = spec.block_in;
            const std::size_t padded = ((spec.n + s - 1) / s) * s;
            SketchOperator::Fct1 st{padded, std::vector<std::uint32_t>(2 * padded),
                                    std::vector<double>(2 * padded)};
            for (auto& b : st.bucket) b = static_cast<std::uint32_t>(rng.uniform_index(r1));
            for (auto& c : st.cauchy) c = rng.cauchy();
            return SketchOperator(spec, 4.0, std::move(st));
        }
        case SketchKind::FCT2: {
            const std::size_t t = spec.block_in;
            const std::size_t s = spec.block_out;
            const std::size_t padded = ((spec.n + t - 1) / t) * t;
            BlockSrht blocks(t, s, spec.seed, streams::kSketch + 0x100);
            DenseMatrix c(r1, (padded / t) * s);
            for (double& x : c.data()) x = rng.cauchy();
            const double scale = 8.0 / static_cast<double>(r1) *
                                 std::sqrt(std::numbers::pi * static_cast<double>(t) /
                                           (2.0 * static_cast<double>(s)));
            return SketchOperator(spec, scale,
                                  SketchOperator::Fct2{padded, std::move(blocks), std::move(c)});
        }
        case SketchKind::SRHT: {
            const std::size_t padded = next_power_of_two(spec.n);
            SketchOperator::Srht st{padded, std::vector<double>(padded), {}};
            for (double& x : st.signs) x = rng.sign();
            st.kept_rows = sample_without_replacement(rng, padded, r1);
            const double scale = std::sqrt(static_cast<double>(padded) / static_cast<double>(r1));
            return SketchOperator(spec, scale, std::move(st));
        }
    }
    throw ArgumentError("make_sketch: unknown kind");
}

std::vector<double> SketchOperator::spread(std::span<const double> y) const {
    if (y.size() > spec_.n) throw DimensionError("spread: input longer than spec.n");
    if (const auto* st = std::get_if<Fct1>(&state_)) {
        const std::size_t s = spec_.block_in;
        std::vector<double> out(2 * st->padded_n, 0.0);
        std::vector<double> block(s);
        for (std::size_t b = 0; b * s < st->padded_n; ++b) {
            std::fill(block.begin(), block.end(), 0.0);
            for (std::size_t k = 0; k < s && b * s + k < y.size(); ++k) block[k] = y[b * s + k];
            double* dst = out.data() + 2 * s * b;
            std::copy(block.begin(), block.end(), dst + s);
            fwht_normalized_inplace(block);
            std::copy(block.begin(), block.end(), dst);
        }
        return out;
    }
    if (const auto* st = std::get_if<Fct2>(&state_)) {
        std::vector<double> padded(st->padded_n, 0.0);
        std::copy(y.begin(), y.end(), padded.begin());
        return st->blocks.apply(padded);
    }
    throw ArgumentError("spread: only defined for FCT1 and FCT2");
}

std::vector<double> SketchOperator::apply(std::span<const double> y) const {
    if (y.size() > spec_.n) throw DimensionError("apply: input longer than spec.n");
    const std::size_t r1 = spec_.r1;
    std::vector<double> out(r1, 0.0);

    if (const auto* st = std::get_if<Dense>(&state_)) {
        for (std::size_t i = 0; i < r1; ++i) out[i] = dot(st->matrix.row(i).first(y.size()), y);
        return out;
    }
    if (const auto* st = std::get_if<Fct1>(&state_)) {
        const auto h = spread(y);
        for (std::size_t k = 0; k < h.size(); ++k) out[st->bucket[k]] += st->cauchy[k] * h[k];
        for (double& v : out) v *= scale_;
        return out;
    }
    if (const auto* st = std::get_if<Fct2>(&state_)) {
        const auto z = spread(y);
        for (std::size_t i = 0; i < r1; ++i) out[i] = scale_ * dot(st->cauchy.row(i), z);
        return out;
    }
    const auto& st = std::get<Srht>(state_);
    std::vector<double> work(st.padded_n, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) work[i] = st.signs[i] * y[i];
    fwht_normalized_inplace(work);
    for (std::size_t k = 0; k < r1; ++k) out[k] = scale_ * work[st.kept_rows[k]];
    return out;
}

DenseMatrix SketchOperator::apply_left(const DenseMatrix& a) const {
    if (a.rows() > spec_.n) {
        throw DimensionError("apply_left: matrix has " + std::to_string(a.rows()) +
                             " rows but the operator was built for " + std::to_string(spec_.n));
    }
    if (const auto* st = std::get_if<Dense>(&state_)) {
        DenseMatrix out(spec_.r1, a.cols());
        detail::view(out).noalias() =
            detail::view(st->matrix).leftCols(static_cast<Eigen::Index>(a.rows())) *
            detail::view(a);
        return out;
    }
    DenseMatrix out(spec_.r1, a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) out.set_col(j, apply(a.col(j)));
    return out;
}

DenseMatrix apply_left(const SketchOperator& op, const DenseMatrix& a) { return op.apply_left(a); }

SketchOperator make_ct(std::size_t n, std::size_t r1, std::uint64_t seed) {
    return make_sketch({SketchKind::CT, n, 0, r1, 0, 0, seed});
}

SketchOperator make_fct1(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::optional<std::size_t> r1, std::optional<std::size_t> block) {
    return make_sketch({SketchKind::FCT1, n, d, r1.value_or(0), block.value_or(0), 0, seed});
}

SketchOperator make_fct2(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::optional<std::size_t> r1, std::optional<std::size_t> block_out,
                         std::optional<std::size_t> block_in) {
    return make_sketch(
        {SketchKind::FCT2, n, d, r1.value_or(0), block_in.value_or(0), block_out.value_or(0), seed});
}

SketchOperator make_gt(std::size_t n, std::size_t d, std::uint64_t seed,
                       std::optional<std::size_t> r1) {
    return make_sketch({SketchKind::GT, n, d, r1.value_or(0), 0, 0, seed});
}

SketchOperator make_srht(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::optional<std::size_t> r1) {
    return make_sketch({SketchKind::SRHT, n, d, r1.value_or(0), 0, 0, seed});
}

SketchOperator make_default_sketch(SketchKind kind, std::size_t n, std::size_t d,
                                   std::uint64_t seed) {
    return make_sketch({kind, n, d, 0, 0, 0, seed});
}

}  // namespace cauchy_sketch

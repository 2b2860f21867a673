#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cauchy_sketch/matrix.hpp"

namespace cauchy_sketch {

/// The five embeddings: dense Cauchy (CT), the two fast Cauchy transforms,
/// dense Gaussian (GT) and the subsampled randomized Hadamard transform.
enum class SketchKind { CT, FCT1, FCT2, GT, SRHT };

std::string_view to_string(SketchKind kind);
/// Case-insensitive; "fjlt" is accepted as an alias of SRHT.
SketchKind parse_sketch_kind(std::string_view name);
inline constexpr SketchKind kAllSketchKinds[] = {SketchKind::CT, SketchKind::FCT1,
                                                 SketchKind::FCT2, SketchKind::GT,
                                                 SketchKind::SRHT};

struct SketchSpec {
    SketchKind kind = SketchKind::CT;
    std::size_t n = 0;          // input rows
    std::size_t d = 0;          // subspace dimension hint
    std::size_t r1 = 0;         // output rows
    std::size_t block_in = 0;   // FCT1: block size s; FCT2: t; 0 elsewhere
    std::size_t block_out = 0;  // FCT2: rows kept per block; 0 elsewhere
    std::uint64_t seed = 0;

    /// Throws ArgumentError when a kind-specific field is missing or invalid.
    void validate() const;

    std::string to_json() const;
    static SketchSpec from_json(std::string_view text);

    friend bool operator==(const SketchSpec&, const SketchSpec&) = default;
};

// Default parameters (natural log, floor of 2d so d <= 2 is well defined).
std::size_t default_r1(std::size_t d);
std::size_t default_gt_r1(std::size_t d);
/// 2d² rounded up to a power of two.
std::size_t default_fct1_block(std::size_t d);
/// 2^⌈2 log₂(max(2d, 2d ln d))⌉.
std::size_t default_fct2_block_out(std::size_t d);
/// next_pow2(s²), capped at next_pow2(n).
std::size_t default_fct2_block_in(std::size_t n, std::size_t s);

/// Fills in zero-valued r1/block fields with the defaults for spec.kind.
SketchSpec with_defaults(SketchSpec spec);

/// s x t subsampled randomized Hadamard block: random signs, normalized
/// Hadamard of size t, then s distinct rows kept and scaled by √(t/s).
/// Applied block-diagonally, it maps n rows to ⌈n/t⌉·s rows.
class BlockSrht {
public:
    BlockSrht(std::size_t block_in, std::size_t block_out, std::uint64_t seed,
              std::uint64_t stream_id);

    std::size_t block_in() const noexcept { return t_; }
    std::size_t block_out() const noexcept { return s_; }
    std::size_t num_blocks(std::size_t n) const noexcept { return (n + t_ - 1) / t_; }

    /// One block: z has length <= t (zero-padded), result has length s.
    std::vector<double> apply_block(std::span<const double> z) const;
    /// Block-diagonal application to a vector of any length.
    std::vector<double> apply(std::span<const double> y) const;
    /// Block-diagonal application to every column of A; result has
    /// num_blocks(A.rows()) * s rows.
    DenseMatrix apply_left(const DenseMatrix& a) const;

private:
    std::size_t t_;
    std::size_t s_;
    std::vector<double> signs_;
    std::vector<std::size_t> kept_rows_;
};

/// A realized random embedding. All randomness is drawn at construction, so
/// applying the same operator twice gives identical results. Immutable.
class SketchOperator {
public:
    const SketchSpec& spec() const noexcept { return spec_; }
    std::size_t output_rows() const noexcept { return spec_.r1; }
    /// Global scale folded into the operator (4/r1 for CT, 4 for FCT1, ...).
    double scale() const noexcept { return scale_; }

    /// Π y for y with at most spec().n entries (missing entries are zero).
    std::vector<double> apply(std::span<const double> y) const;

    /// Column-wise Π A. Throws DimensionError when A has more than spec().n rows.
    DenseMatrix apply_left(const DenseMatrix& a) const;

    /// The structured spreading stage H̃ y before the Cauchy stage (FCT1: the
    /// stacked [H_s; I_s] blocks, length 2·n_pad; FCT2: the block SRHT output,
    /// length (n_pad/t)·s). Throws ArgumentError for the other kinds.
    std::vector<double> spread(std::span<const double> y) const;

    friend SketchOperator make_sketch(const SketchSpec& spec);

private:
    struct Dense {
        DenseMatrix matrix;  // r1 x n, scale folded in
    };
    struct Fct1 {
        std::size_t padded_n;
        std::vector<std::uint32_t> bucket;  // 2*padded_n output row assignments
        std::vector<double> cauchy;         // 2*padded_n diagonal
    };
    struct Fct2 {
        std::size_t padded_n;
        BlockSrht blocks;
        DenseMatrix cauchy;  // r1 x (padded_n / t) * s
    };
    struct Srht {
        std::size_t padded_n;
        std::vector<double> signs;
        std::vector<std::size_t> kept_rows;
    };

    SketchOperator(SketchSpec spec, double scale, std::variant<Dense, Fct1, Fct2, Srht> state)
        : spec_(spec), scale_(scale), state_(std::move(state)) {}

    SketchSpec spec_;
    double scale_;
    std::variant<Dense, Fct1, Fct2, Srht> state_;
};

/// Builds the operator described by spec (zero fields take defaults).
SketchOperator make_sketch(const SketchSpec& spec);

SketchOperator make_ct(std::size_t n, std::size_t r1, std::uint64_t seed);
SketchOperator make_fct1(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::optional<std::size_t> r1 = {},
                         std::optional<std::size_t> block = {});
SketchOperator make_fct2(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::optional<std::size_t> r1 = {},
                         std::optional<std::size_t> block_out = {},
                         std::optional<std::size_t> block_in = {});
SketchOperator make_gt(std::size_t n, std::size_t d, std::uint64_t seed,
                       std::optional<std::size_t> r1 = {});
SketchOperator make_srht(std::size_t n, std::size_t d, std::uint64_t seed,
                         std::optional<std::size_t> r1 = {});

/// Operator of `kind` with every parameter at its default.
SketchOperator make_default_sketch(SketchKind kind, std::size_t n, std::size_t d,
                                   std::uint64_t seed);

DenseMatrix apply_left(const SketchOperator& op, const DenseMatrix& a);

}  // namespace cauchy_sketch

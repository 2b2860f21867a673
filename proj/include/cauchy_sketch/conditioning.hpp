#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cauchy_sketch/matrix.hpp"
#include "cauchy_sketch/sketch.hpp"

namespace cauchy_sketch {

/// Change of basis R⁻¹ with U = A R⁻¹ and where it came from.
struct ConditionedBasis {
    DenseMatrix r_inv;
    std::optional<DenseMatrix> r;
    SketchSpec sketch;  // FastLpBasis records its block SRHT as an FCT2-shaped spec
    double p = 1.0;
    /// Global rescale γ for FastLpBasis (U·Γ/γ form); not applied to r_inv.
    std::optional<double> gamma;
    std::size_t rounding_sweeps = 0;
    std::size_t rounding_cuts = 0;
};

/// α = ‖U‖₁ (entrywise), β from the d LPs, κ̄₁ = αβ. For a single basis
/// runs = 1 and the quartiles collapse to kappa_bar.
struct ConditioningReport {
    double alpha = 0.0;
    double beta = 0.0;
    double kappa_bar = 0.0;
    std::size_t runs = 1;
    double q1 = 0.0;
    double q3 = 0.0;
};

/// R⁻¹ from a thin QR of Π₁A. Throws SingularityError when Π₁A is rank
/// deficient, ArgumentError unless n > d.
ConditionedBasis fast_l1_basis(const DenseMatrix& a, SketchKind kind, std::uint64_t seed);
/// Same with an explicit sketch spec (n and d are taken from A; zero fields default).
ConditionedBasis fast_l1_basis(const DenseMatrix& a, SketchSpec spec);

/// Conditioning of U = A·R⁻¹ by solving one LP per column.
ConditioningReport kappa_bar_1(const DenseMatrix& a, const DenseMatrix& r_inv);

/// Row ℓ1 norms of U.
std::vector<double> l1_leverage_scores(const DenseMatrix& u);

struct LpBasisOptions {
    std::optional<std::size_t> block_in;   // t
    std::optional<std::size_t> block_out;  // s
};

/// Block-SRHT sketch Ã of A followed by ellipsoidal 2d-rounding of
/// {x : (Σ_i ‖Ã_i x‖₂^p)^{1/p} <= 1}; returns R⁻¹ from the final ellipsoid.
ConditionedBasis fast_lp_basis(const DenseMatrix& a, double p, std::uint64_t seed,
                               LpBasisOptions options = {});

/// Block parameters fast_lp_basis uses for an n x d input.
std::pair<std::size_t, std::size_t> lp_basis_blocks(std::size_t n, std::size_t d,
                                                    LpBasisOptions options = {});

struct KappaSample {
    double lo = 0.0;
    double hi = 0.0;
    double ratio() const { return hi / lo; }
};

/// min and max of ‖A R⁻¹ y‖_p over num_dirs random unit y (Gaussian
/// directions); hi/lo lower-bounds κ_p(A R⁻¹).
KappaSample kappa_p_sampled(const DenseMatrix& a, const DenseMatrix& r_inv, double p,
                            std::size_t num_dirs, std::uint64_t seed = 0);

}  // namespace cauchy_sketch

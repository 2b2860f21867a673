#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cauchy_sketch/lp.hpp"
#include "cauchy_sketch/matrix.hpp"
#include "cauchy_sketch/sketch.hpp"

namespace cauchy_sketch {

/// Exact row ℓ1 norms are an evaluation aid, not one of the randomized estimators.
enum class LeverageEstimator { CauchyMedian, GaussianMedian, Exact };

struct LeverageEstimate {
    std::vector<double> lambda;
    LeverageEstimator estimator = LeverageEstimator::CauchyMedian;
    std::size_t r2 = 0;
};

/// Sampled rows with weights 1/p̂_i; indices strictly increasing.
struct Coreset {
    std::vector<std::size_t> indices;
    std::vector<double> weights;
    double s_target = 0.0;
    std::uint64_t seed = 0;
};

/// ⌈15 ln(2n/δ)⌉.
std::size_t default_r2_cauchy(std::size_t n, double delta = 0.1);
/// ⌈2 ln(2 s q √r1 (ln n)^{2ρ+1/2})⌉, at least 1.
std::size_t default_r2_gaussian(std::size_t n, std::size_t s, std::size_t q, std::size_t r1,
                                double rho = 1.0);

/// λ_i = median_j |(X (R⁻¹ Π₂))_ij| with Π₂ a q x r2 Cauchy or Gaussian matrix.
/// R⁻¹Π₂ is formed first, so X R⁻¹ is never materialized.
LeverageEstimate estimate_leverage(const DenseMatrix& x, const DenseMatrix& r_inv,
                                   LeverageEstimator estimator, std::size_t r2, std::uint64_t seed);

/// λ_i = ‖(X R⁻¹)_(i)‖₁ computed row by row.
LeverageEstimate exact_leverage(const DenseMatrix& x, const DenseMatrix& r_inv);

/// p̂_i = min(1, s λ_i / Σλ). Throws ArgumentError when Σλ = 0.
std::vector<double> inclusion_probabilities(std::span<const double> lambda, double s);

/// Independent Bernoulli(p̂_i) inclusion, drawn in row order from one stream.
Coreset build_coreset(std::span<const double> lambda, double s, std::uint64_t seed);
Coreset build_coreset(const LeverageEstimate& lev, double s, std::uint64_t seed);

/// 63κq√r1/ε² (q ln(24κq√r1/ε) + ln(2/δ)) with κ = q·max(1, ln q).
std::size_t default_sample_size(std::size_t q, std::size_t r1, double eps, double delta = 0.1);
/// default_sample_size inflated by q^{5/2} ln(q/ε).
std::size_t default_optimized_sample_size(std::size_t q, std::size_t r1, double eps,
                                          double delta = 0.1);

/// How sampling probabilities are obtained.
enum class SamplingMode {
    Leverage,        // leverage of X R⁻¹ with R from the sketch
    Uniform,         // p̂_i = min(1, s/n)
    NoConditioning,  // leverage of X itself (R⁻¹ = I)
};

struct RegressionOptions {
    SketchKind kind = SketchKind::CT;
    std::uint64_t seed = 0;
    double eps = 0.1;
    std::optional<std::size_t> sample_size;
    LeverageEstimator estimator = LeverageEstimator::CauchyMedian;
    std::optional<std::size_t> r2;
    bool exact_leverage = false;
    SamplingMode mode = SamplingMode::Leverage;
};

struct RegressionResult {
    L1Solution solution;  // objective and certificate refer to the weighted coreset problem
    double objective = 0.0;  // ‖A x̂ - b‖₁ on the full data
    Coreset coreset;
    std::size_t sample_size = 0;
    std::size_t r2 = 0;
    SketchSpec sketch;
};

struct MultipleRegressionResult {
    DenseMatrix w;  // d x k
    std::vector<L1Solution> solutions;
    std::vector<double> objectives;  // full-data ‖A ŵ_j - B_j‖₁
    Coreset coreset;
    std::size_t sample_size = 0;
    std::size_t r2 = 0;
    SketchSpec sketch;
};

/// min ‖A X - B‖₁ column by column on one shared coreset of [A | -B].
/// Throws SingularityError when the sampled rows are rank deficient and
/// ArgumentError when the coreset is empty.
MultipleRegressionResult multiple_regression(const DenseMatrix& a, const DenseMatrix& b,
                                             const RegressionOptions& options);
MultipleRegressionResult multiple_regression(const DenseMatrix& a, const DenseMatrix& b,
                                             double eps, SketchKind kind, std::uint64_t seed,
                                             std::optional<std::size_t> s_override = {});

/// Single right-hand side; identical to multiple_regression with k = 1.
RegressionResult sampled_regression(const DenseMatrix& a, std::span<const double> b,
                                    const RegressionOptions& options);

RegressionResult fast_cauchy_regression(const DenseMatrix& a, std::span<const double> b,
                                        double eps, SketchKind kind, std::uint64_t seed,
                                        std::optional<std::size_t> s_override = {});

/// Gaussian-median leverage with the smaller r2 and the inflated sample size.
RegressionResult optimized_fast_cauchy_regression(const DenseMatrix& a, std::span<const double> b,
                                                  double eps, SketchKind kind, std::uint64_t seed,
                                                  std::optional<std::size_t> s_override = {});

struct SubspaceApproxResult {
    std::size_t j_star = 0;
    DenseMatrix w_hat;                    // d x d, W_jj = -1
    double objective = 0.0;               // ‖A ŵ_{j*}‖₁ on the full matrix
    std::vector<double> column_objectives;
    Coreset coreset;
};

/// Best (d-1)-dimensional ℓ1 subspace spanned by all but one column: each
/// column is regressed on the others over one coreset of A.
SubspaceApproxResult subspace_approx_l1(const DenseMatrix& a, const RegressionOptions& options);
SubspaceApproxResult subspace_approx_l1(const DenseMatrix& a, double eps, SketchKind kind,
                                        std::uint64_t seed,
                                        std::optional<std::size_t> s_override = {});

/// Exact full-data ℓ1 regression, used as the reference optimum.
L1Solution exact_l1_regression(const DenseMatrix& a, std::span<const double> b);

}  // namespace cauchy_sketch

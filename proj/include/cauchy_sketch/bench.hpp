#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cauchy_sketch/matrix.hpp"
#include "cauchy_sketch/sketch.hpp"

namespace cauchy_sketch {

/// D₁ G₁ D₂ G₂ with D₁, D₂ diagonal and linearly spaced from 1 to 10⁴.
DenseMatrix gen_matrix_a1(std::size_t n, std::size_t d, std::uint64_t seed);
/// d x d Gaussian G; rows 0..d-2 of the result are those of G and every
/// remaining row repeats row d-1 of G. Needs n > d.
DenseMatrix gen_matrix_a2(std::size_t n, std::size_t d, std::uint64_t seed);
DenseMatrix gen_matrix_gaussian(std::size_t n, std::size_t d, std::uint64_t seed);

enum class MatrixKind { Gaussian, A1, A2 };
MatrixKind parse_matrix_kind(std::string_view name);
std::string_view to_string(MatrixKind kind);
DenseMatrix gen_matrix(MatrixKind kind, std::size_t n, std::size_t d, std::uint64_t seed);

struct InstanceOptions {
    MatrixKind matrix = MatrixKind::A1;
    bool zero_noise = false;
    double noise_ratio = 0.1;        // ‖ε‖₂ / ‖A x_exact‖₂
    double corruption_prob = 0.001;  // per row
    double corruption_scale = 100.0; // corrupted b_i = scale·‖ε‖₂
};

struct RegressionInstance {
    DenseMatrix a;
    std::vector<double> b;
    std::vector<double> x_exact;
    std::vector<std::size_t> corrupted_rows;
    double noise_norm = 0.0;
};

/// b = A x_exact + ε with Laplace ε rescaled to the requested ratio, then
/// each row corrupted independently with corruption_prob.
RegressionInstance gen_regression_instance(std::size_t n, std::size_t d, std::uint64_t seed,
                                           const InstanceOptions& options = {});

/// One CSV record: kind, n, d, seed, metric, value.
struct ReportRow {
    std::string kind;
    std::size_t n = 0;
    std::size_t d = 0;
    std::uint64_t seed = 0;
    std::string metric;
    double value = 0.0;
};

/// Shortest round-trip decimal; infinities as "inf"/"-inf", NaN as "nan".
std::string format_value(double v);

struct Report {
    std::vector<ReportRow> rows;
    void add(std::string kind, std::size_t n, std::size_t d, std::uint64_t seed, std::string metric,
             double value);
    /// Header line plus one line per row.
    std::string to_csv() const;
    void write(const std::string& path) const;
    /// Values of rows matching kind and metric, in order.
    std::vector<double> values(std::string_view kind, std::string_view metric) const;
};

struct ConditioningBenchConfig {
    std::size_t n = 1u << 14;
    std::size_t d = 4;
    MatrixKind matrix = MatrixKind::A2;
    std::optional<DenseMatrix> user_matrix;  // overrides n, d, matrix
    std::vector<SketchKind> kinds{std::begin(kAllSketchKinds), std::end(kAllSketchKinds)};
    std::size_t runs = 50;
    std::uint64_t seed = 0;
};

/// Per kind and run: fast_l1_basis with seed+run, then κ̄₁ (metrics alpha,
/// beta, kappa_bar; failures as inf). Per kind: kappa_bar_q1/median/q3. Kind
/// "A" rows carry κ̄₁ of the input itself.
Report run_conditioning_bench(const ConditioningBenchConfig& cfg);

struct RegressionBenchConfig {
    std::size_t n = 1u << 14;
    std::size_t d = 7;
    MatrixKind matrix = MatrixKind::A1;
    std::vector<std::size_t> sample_sizes{32, 128, 512, 2048, 8192};
    std::vector<std::string> methods{"CT", "FCT1", "FCT2", "GT", "SRHT", "UNIF", "NOCD"};
    std::size_t runs = 50;
    std::uint64_t seed = 0;
    double eps = 0.1;
    bool exact_leverage = false;
};

/// Relative objective error (f - f*)/f* per method, sample size and run
/// (metric "rel_err:s=<s>"; rank-deficient samples as inf) and quartile rows
/// "q1:s=<s>", "median:s=<s>", "q3:s=<s>". Kind "exact" carries f*.
Report run_regression_bench(const RegressionBenchConfig& cfg);

enum class TailLemma { Upper, Lower, Sampling };
TailLemma parse_tail_lemma(std::string_view name);

struct TailCheckConfig {
    TailLemma lemma = TailLemma::Upper;
    std::size_t trials = 100000;
    std::uint64_t seed = 0;
};

/// Upper Cauchy tail bound (m = 100, t ∈ {10, 100}).
double upper_tail_bound(double m, double t);
/// exp(-β²t²/3).
double lower_tail_bound(double beta_sq, double t);
/// 2 exp(-a s ε² ‖Zx‖₁ / ((2 + 2ε/3) ‖Z‖₁ ‖x‖∞)).
double sampling_lemma_delta(double a, double s, double eps, double zx_l1, double z_l1, double x_inf);

/// Monte Carlo estimate, exact bound and a pass flag (estimate <= bound + 3
/// standard errors) for the requested lemma. The sampling check also reports
/// the mean of ‖DZx‖₁ against ‖Zx‖₁.
Report run_tail_checks(const TailCheckConfig& cfg);

}  // namespace cauchy_sketch

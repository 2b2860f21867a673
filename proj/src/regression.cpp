#include "cauchy_sketch/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cauchy_sketch/conditioning.hpp"
#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "cauchy_sketch/random.hpp"

namespace cauchy_sketch {

namespace {

constexpr double kMaxSampleSize = 1e15;

std::size_t clamp_size(double v) {
    if (!(v >= 1.0)) return 1;
    return static_cast<std::size_t>(std::ceil(std::min(v, kMaxSampleSize)));
}

struct SamplingPlan {
    Coreset coreset;
    std::size_t sample_size = 0;
    std::size_t r2 = 0;
    SketchSpec sketch;
};

DenseMatrix select_cols(const DenseMatrix& m, const std::vector<std::size_t>& cols) {
    DenseMatrix out(m.rows(), cols.size());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < cols.size(); ++k) out(i, k) = m(i, cols[k]);
    return out;
}

/// Columns of X spanning its range and R⁻¹ from the QR of their sketch.
struct RangeBasis {
    DenseMatrix x;
    DenseMatrix r_inv;
};

// Leverage only depends on range(X), so a column the sketch shows to be
// dependent (b in range(A), a repeated column) is dropped and QR retried.
RangeBasis range_basis(const DenseMatrix& x, const SketchOperator& op) {
    const DenseMatrix px = op.apply_left(x);
    std::vector<std::size_t> cols(x.cols());
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    for (;;) {
        try {
            const DenseMatrix r = qr_r_factor(cols.size() == x.cols() ? px : select_cols(px, cols));
            if (cols.size() == x.cols()) return {x, invert_upper_triangular(r)};
            return {select_cols(x, cols), invert_upper_triangular(r)};
        } catch (const SingularityError& e) {
            if (cols.size() == 1 || e.column() >= cols.size()) throw;
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(e.column()));
        }
    }
}

/// Members of `cols` that depend on earlier ones, dropped greedily.
std::vector<std::size_t> dependent_columns(const DenseMatrix& m, std::vector<std::size_t> cols) {
    std::vector<std::size_t> dropped;
    while (!cols.empty() && m.rows() >= cols.size()) {
        try {
            qr_r_factor(select_cols(m, cols));
            break;
        } catch (const SingularityError& e) {
            if (e.column() >= cols.size()) throw;
            dropped.push_back(cols[e.column()]);
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(e.column()));
        }
    }
    return dropped;
}

SamplingPlan plan_coreset(const DenseMatrix& x, const RegressionOptions& opt) {
    const std::size_t n = x.rows();
    const std::size_t q = x.cols();
    if (n <= q) throw ArgumentError("regression: need more rows than columns in [A | -B]");
    if (!(opt.eps > 0.0 && opt.eps < 1.0)) throw ArgumentError("regression: eps must lie in (0, 1)");

    SamplingPlan plan;
    plan.sketch.kind = opt.kind;
    plan.sketch.n = n;
    plan.sketch.d = q;
    plan.sketch.seed = opt.seed;
    plan.sketch = with_defaults(plan.sketch);

    const bool optimized = opt.estimator == LeverageEstimator::GaussianMedian;
    plan.sample_size = opt.sample_size.value_or(
        optimized ? default_optimized_sample_size(q, plan.sketch.r1, opt.eps)
                  : default_sample_size(q, plan.sketch.r1, opt.eps));
    if (plan.sample_size == 0) throw ArgumentError("regression: sample size must be >= 1");
    const double s = static_cast<double>(plan.sample_size);

    if (opt.mode == SamplingMode::Uniform) {
        plan.coreset = build_coreset(std::vector<double>(n, 1.0), s, opt.seed);
        return plan;
    }

    RangeBasis basis{x, DenseMatrix::identity(q)};
    if (opt.mode == SamplingMode::Leverage) basis = range_basis(x, make_sketch(plan.sketch));

    LeverageEstimate lev;
    if (opt.exact_leverage || opt.estimator == LeverageEstimator::Exact) {
        lev = exact_leverage(basis.x, basis.r_inv);
    } else {
        plan.r2 = opt.r2.value_or(optimized
                                      ? default_r2_gaussian(n, plan.sample_size, q, plan.sketch.r1)
                                      : default_r2_cauchy(n));
        lev = estimate_leverage(basis.x, basis.r_inv, opt.estimator, plan.r2, opt.seed);
    }
    plan.coreset = build_coreset(lev, s, opt.seed);
    return plan;
}

L1Solution solve_on_coreset(const DenseMatrix& a, std::span<const double> rhs, const Coreset& cs,
                            std::vector<std::pair<std::size_t, double>> fixed = {}) {
    std::vector<double> b(cs.indices.size());
    for (std::size_t k = 0; k < cs.indices.size(); ++k) b[k] = rhs.empty() ? 0.0 : rhs[cs.indices[k]];
    L1Problem prob{a.select_rows(cs.indices), std::move(b), cs.weights, std::move(fixed), std::nullopt};
    return solve_weighted_l1(prob);
}

void require_nonempty(const Coreset& cs) {
    if (cs.indices.empty())
        throw ArgumentError("regression: the coreset is empty; increase the sample size");
}

}  // namespace

std::size_t default_r2_cauchy(std::size_t n, double delta) {
    return clamp_size(15.0 * std::log(2.0 * static_cast<double>(n) / delta));
}

std::size_t default_r2_gaussian(std::size_t n, std::size_t s, std::size_t q, std::size_t r1,
                                double rho) {
    const double logn = std::max(1.0, std::log(static_cast<double>(n)));
    const double inner = 2.0 * static_cast<double>(s) * static_cast<double>(q) *
                         std::sqrt(static_cast<double>(r1)) * std::pow(logn, 2.0 * rho + 0.5);
    return clamp_size(2.0 * std::log(inner));
}

LeverageEstimate estimate_leverage(const DenseMatrix& x, const DenseMatrix& r_inv,
                                   LeverageEstimator estimator, std::size_t r2, std::uint64_t seed) {
    if (r2 == 0) throw ArgumentError("estimate_leverage: r2 must be >= 1");
    if (r_inv.rows() != x.cols() || r_inv.cols() != x.cols())
        throw DimensionError("estimate_leverage: R⁻¹ must be q x q");
    if (estimator == LeverageEstimator::Exact) return exact_leverage(x, r_inv);
    const std::size_t q = x.cols();
    RngStream rng(seed, streams::kLeverage);
    DenseMatrix pi2(q, r2);
    for (double& v : pi2.data())
        v = estimator == LeverageEstimator::CauchyMedian ? rng.cauchy() : rng.gaussian();
    const DenseMatrix proj = r_inv * pi2;  // q x r2

    LeverageEstimate out{std::vector<double>(x.rows()), estimator, r2};
    std::vector<double> row(r2);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::fill(row.begin(), row.end(), 0.0);
        auto xi = x.row(i);
        for (std::size_t k = 0; k < q; ++k) {
            if (xi[k] == 0.0) continue;
            auto pk = proj.row(k);
            for (std::size_t j = 0; j < r2; ++j) row[j] += xi[k] * pk[j];
        }
        out.lambda[i] = median_abs(row);
    }
    return out;
}

LeverageEstimate exact_leverage(const DenseMatrix& x, const DenseMatrix& r_inv) {
    if (r_inv.rows() != x.cols() || r_inv.cols() != x.cols())
        throw DimensionError("exact_leverage: R⁻¹ must be q x q");
    return {l1_leverage_scores(x * r_inv), LeverageEstimator::Exact, 0};
}

std::vector<double> inclusion_probabilities(std::span<const double> lambda, double s) {
    if (!(s > 0.0)) throw ArgumentError("inclusion_probabilities: s must be > 0");
    double total = 0.0;
    for (double v : lambda) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ArgumentError("inclusion_probabilities: scores must be finite and >= 0");
        total += v;
    }
    if (!(total > 0.0)) throw ArgumentError("inclusion_probabilities: scores sum to zero");
    std::vector<double> p(lambda.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::min(1.0, s * (lambda[i] / total));
    return p;
}

Coreset build_coreset(std::span<const double> lambda, double s, std::uint64_t seed) {
    const auto p = inclusion_probabilities(lambda, s);
    RngStream rng(seed, streams::kCoreset);
    Coreset cs;
    cs.s_target = s;
    cs.seed = seed;
    for (std::size_t i = 0; i < p.size(); ++i) {
        // one draw per row whatever p̂_i is, so row i always sees the same uniform
        const double u = rng.uniform_open();
        if (p[i] > 0.0 && u < p[i]) {
            cs.indices.push_back(i);
            cs.weights.push_back(1.0 / p[i]);
        }
    }
    return cs;
}

Coreset build_coreset(const LeverageEstimate& lev, double s, std::uint64_t seed) {
    return build_coreset(lev.lambda, s, seed);
}

std::size_t default_sample_size(std::size_t q, std::size_t r1, double eps, double delta) {
    const double qd = static_cast<double>(q);
    const double kappa = qd * std::max(1.0, std::log(qd));
    const double c = kappa * qd * std::sqrt(static_cast<double>(r1));
    const double s = 63.0 * c / (eps * eps) *
                     (qd * std::log(24.0 * c / eps) + std::log(2.0 / delta));
    return clamp_size(s);
}

std::size_t default_optimized_sample_size(std::size_t q, std::size_t r1, double eps, double delta) {
    const double qd = static_cast<double>(q);
    const double base = static_cast<double>(default_sample_size(q, r1, eps, delta));
    return clamp_size(base * std::pow(qd, 2.5) * std::max(1.0, std::log(qd / eps)));
}

MultipleRegressionResult multiple_regression(const DenseMatrix& a, const DenseMatrix& b,
                                             const RegressionOptions& options) {
    if (b.rows() != a.rows()) throw DimensionError("multiple_regression: A and B row counts differ");
    const DenseMatrix x = a.hcat(-1.0 * b);
    SamplingPlan plan = plan_coreset(x, options);
    require_nonempty(plan.coreset);

    MultipleRegressionResult out{DenseMatrix(a.cols(), b.cols()), {}, {}, std::move(plan.coreset),
                                 plan.sample_size, plan.r2, plan.sketch};
    for (std::size_t j = 0; j < b.cols(); ++j) {
        const auto col = b.col(j);
        L1Solution sol = solve_on_coreset(a, col, out.coreset);
        for (std::size_t k = 0; k < a.cols(); ++k) out.w(k, j) = sol.x[k];
        out.objectives.push_back(weighted_l1_objective(a, col, {}, sol.x));
        out.solutions.push_back(std::move(sol));
    }
    return out;
}

MultipleRegressionResult multiple_regression(const DenseMatrix& a, const DenseMatrix& b,
                                             double eps, SketchKind kind, std::uint64_t seed,
                                             std::optional<std::size_t> s_override) {
    RegressionOptions opt;
    opt.kind = kind;
    opt.seed = seed;
    opt.eps = eps;
    opt.sample_size = s_override;
    return multiple_regression(a, b, opt);
}

RegressionResult sampled_regression(const DenseMatrix& a, std::span<const double> b,
                                    const RegressionOptions& options) {
    if (b.size() != a.rows()) throw DimensionError("regression: b has wrong length");
    auto multi = multiple_regression(a, DenseMatrix::column(std::vector<double>(b.begin(), b.end())),
                                     options);
    return {std::move(multi.solutions.front()), multi.objectives.front(), std::move(multi.coreset),
            multi.sample_size, multi.r2, multi.sketch};
}

RegressionResult fast_cauchy_regression(const DenseMatrix& a, std::span<const double> b,
                                        double eps, SketchKind kind, std::uint64_t seed,
                                        std::optional<std::size_t> s_override) {
    RegressionOptions opt;
    opt.kind = kind;
    opt.seed = seed;
    opt.eps = eps;
    opt.sample_size = s_override;
    return sampled_regression(a, b, opt);
}

RegressionResult optimized_fast_cauchy_regression(const DenseMatrix& a, std::span<const double> b,
                                                  double eps, SketchKind kind, std::uint64_t seed,
                                                  std::optional<std::size_t> s_override) {
    RegressionOptions opt;
    opt.kind = kind;
    opt.seed = seed;
    opt.eps = eps;
    opt.sample_size = s_override;
    opt.estimator = LeverageEstimator::GaussianMedian;
    return sampled_regression(a, b, opt);
}

SubspaceApproxResult subspace_approx_l1(const DenseMatrix& a, const RegressionOptions& options) {
    const std::size_t d = a.cols();
    if (d < 2) throw ArgumentError("subspace_approx_l1: need d >= 2");
    SamplingPlan plan = plan_coreset(a, options);
    require_nonempty(plan.coreset);

    SubspaceApproxResult out{0, DenseMatrix(d, d), 0.0, {}, std::move(plan.coreset)};
    const double scale = entrywise_l1(a);
    const DenseMatrix sampled = a.select_rows(out.coreset.indices);
    for (std::size_t j = 0; j < d; ++j) {
        // the other columns may be dependent; pin the redundant ones to zero
        std::vector<std::pair<std::size_t, double>> fixed{{j, -1.0}};
        std::vector<std::size_t> others;
        for (std::size_t k = 0; k < d; ++k)
            if (k != j) others.push_back(k);
        for (std::size_t k : dependent_columns(sampled, others)) fixed.emplace_back(k, 0.0);
        const L1Solution sol = solve_on_coreset(a, {}, out.coreset, std::move(fixed));
        for (std::size_t k = 0; k < d; ++k) out.w_hat(k, j) = sol.x[k];
        out.column_objectives.push_back(weighted_l1_objective(a, {}, {}, sol.x));
    }
    // objectives within rounding of each other count as ties (lowest index wins)
    std::size_t best = 0;
    for (std::size_t j = 1; j < d; ++j)
        if (out.column_objectives[j] < out.column_objectives[best] - 1e-12 * scale) best = j;
    out.j_star = best;
    out.objective = out.column_objectives[best];
    return out;
}

SubspaceApproxResult subspace_approx_l1(const DenseMatrix& a, double eps, SketchKind kind,
                                        std::uint64_t seed, std::optional<std::size_t> s_override) {
    RegressionOptions opt;
    opt.kind = kind;
    opt.seed = seed;
    opt.eps = eps;
    opt.sample_size = s_override;
    return subspace_approx_l1(a, opt);
}

L1Solution exact_l1_regression(const DenseMatrix& a, std::span<const double> b) {
    L1Problem prob{a, std::vector<double>(b.begin(), b.end()), {}, {}, std::nullopt};
    return solve_weighted_l1(prob);
}

}  // namespace cauchy_sketch

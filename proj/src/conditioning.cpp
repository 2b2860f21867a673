#include "cauchy_sketch/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cauchy_sketch/ellipsoid.hpp"
#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/lp.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "cauchy_sketch/random.hpp"

namespace cauchy_sketch {

ConditionedBasis fast_l1_basis(const DenseMatrix& a, SketchSpec spec) {
    if (a.rows() <= a.cols()) throw ArgumentError("fast_l1_basis: need n > d");
    spec.n = a.rows();
    spec.d = a.cols();
    spec = with_defaults(spec);
    const SketchOperator op = make_sketch(spec);
    const DenseMatrix r = qr_r_factor(op.apply_left(a));
    ConditionedBasis out{invert_upper_triangular(r), r, spec, 1.0, std::nullopt};
    return out;
}

ConditionedBasis fast_l1_basis(const DenseMatrix& a, SketchKind kind, std::uint64_t seed) {
    SketchSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    return fast_l1_basis(a, spec);
}

ConditioningReport kappa_bar_1(const DenseMatrix& a, const DenseMatrix& r_inv) {
    if (a.cols() != r_inv.rows() || r_inv.rows() != r_inv.cols())
        throw DimensionError("kappa_bar_1: R⁻¹ must be d x d");
    const DenseMatrix u = a * r_inv;
    double min_lp = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < u.cols(); ++j) min_lp = std::min(min_lp, kappa_beta_lp(u, j));
    if (!(min_lp > 0.0)) throw SingularityError("kappa_bar_1: U is rank deficient", 0);
    ConditioningReport rep;
    rep.alpha = entrywise_l1(u);
    rep.beta = 1.0 / min_lp;
    rep.kappa_bar = rep.alpha * rep.beta;
    rep.q1 = rep.q3 = rep.kappa_bar;
    return rep;
}

std::vector<double> l1_leverage_scores(const DenseMatrix& u) {
    std::vector<double> out(u.rows());
    for (std::size_t i = 0; i < u.rows(); ++i) out[i] = norm1(u.row(i));
    return out;
}

std::pair<std::size_t, std::size_t> lp_basis_blocks(std::size_t n, std::size_t d,
                                                    LpBasisOptions options) {
    const std::size_t n_pad = next_power_of_two(n);
    std::size_t s = options.block_out.value_or(default_fct2_block_out(d));
    std::size_t t = options.block_in.value_or(std::min(next_power_of_two(s * d * d), n_pad));
    if (!options.block_out) s = std::min(s, t);
    if (!is_power_of_two(t)) throw ArgumentError("fast_lp_basis: t must be a power of two");
    if (s == 0 || s > t) throw ArgumentError("fast_lp_basis: need 1 <= s <= t");
    return {t, s};
}

ConditionedBasis fast_lp_basis(const DenseMatrix& a, double p, std::uint64_t seed,
                               LpBasisOptions options) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ArgumentError("fast_lp_basis: p must be >= 1");
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    if (n < d) throw ArgumentError("fast_lp_basis: need n >= d");
    const auto [t, s] = lp_basis_blocks(n, d, options);

    const BlockSrht g(t, s, seed, streams::kSketch + 0x200);
    const DenseMatrix stacked = g.apply_left(a);
    const std::size_t blocks = g.num_blocks(n);
    const DenseMatrix r0 = qr_r_factor(stacked);

    StartEllipsoid start = lp_start_ellipsoid(r0, blocks, p);
    const double big_l =
        std::pow(static_cast<double>(blocks * s), std::abs(1.0 / p - 0.5));
    const RoundingResult rounded =
        round_2d(block_norm_oracle(stacked, s, p), start.ellipsoid, std::max(big_l, start.big_l));

    const DenseMatrix r = rounded.ellipsoid.norm_factor();
    ConditionedBasis out{invert_upper_triangular(r), r, {}, p, std::nullopt};
    out.sketch.kind = SketchKind::FCT2;
    out.sketch.n = n;
    out.sketch.d = d;
    out.sketch.r1 = blocks * s;
    out.sketch.block_in = t;
    out.sketch.block_out = s;
    out.sketch.seed = seed;
    const double sqrt2 = std::sqrt(2.0);
    out.gamma = p <= 2.0 ? std::pow(static_cast<double>(t), 1.0 / p - 0.5) * sqrt2
                         : std::pow(static_cast<double>(s), 0.5 - 1.0 / p) * sqrt2;
    out.rounding_sweeps = rounded.sweeps;
    out.rounding_cuts = rounded.cuts;
    return out;
}

KappaSample kappa_p_sampled(const DenseMatrix& a, const DenseMatrix& r_inv, double p,
                            std::size_t num_dirs, std::uint64_t seed) {
    if (num_dirs == 0) throw ArgumentError("kappa_p_sampled: num_dirs must be >= 1");
    if (a.cols() != r_inv.rows()) throw DimensionError("kappa_p_sampled: shape mismatch");
    const DenseMatrix u = a * r_inv;
    RngStream rng(seed, streams::kDirections);
    KappaSample out{std::numeric_limits<double>::infinity(), 0.0};
    std::vector<double> y(u.cols());
    for (std::size_t k = 0; k < num_dirs; ++k) {
        double nrm = 0.0;
        while (nrm == 0.0) {
            for (double& v : y) v = rng.gaussian();
            nrm = norm2(y);
        }
        for (double& v : y) v /= nrm;
        const double val = norm_p(u * y, p);
        out.lo = std::min(out.lo, val);
        out.hi = std::max(out.hi, val);
    }
    return out;
}

}  // namespace cauchy_sketch

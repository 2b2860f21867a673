#include "cauchy_sketch/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "cauchy_sketch/conditioning.hpp"
#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/lp.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "cauchy_sketch/random.hpp"
#include "cauchy_sketch/regression.hpp"

namespace cauchy_sketch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> v(count, lo);
    for (std::size_t i = 1; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
}

DenseMatrix gaussian_matrix(RngStream& rng, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) v = rng.gaussian();
    return m;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void add_quartiles(Report& rep, const std::string& kind, std::size_t n, std::size_t d,
                   std::uint64_t seed, const std::string& prefix, const std::string& suffix,
                   const std::vector<double>& values) {
    if (values.empty()) return;
    rep.add(kind, n, d, seed, prefix + "q1" + suffix, quantile(values, 0.25));
    rep.add(kind, n, d, seed, prefix + "median" + suffix, quantile(values, 0.5));
    rep.add(kind, n, d, seed, prefix + "q3" + suffix, quantile(values, 0.75));
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return seed * 0x9E3779B97F4A7C15ull + trial;
}

}  // namespace

DenseMatrix gen_matrix_a1(std::size_t n, std::size_t d, std::uint64_t seed) {
    RngStream rng(seed, streams::kGenerator);
    DenseMatrix g1 = gaussian_matrix(rng, n, d);
    DenseMatrix g2 = gaussian_matrix(rng, d, d);
    const auto d1 = linspace(1.0, 1e4, n);
    const auto d2 = linspace(1.0, 1e4, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g2(i, j) *= d2[i];
    DenseMatrix a = g1 * g2;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) *= d1[i];
    return a;
}

DenseMatrix gen_matrix_a2(std::size_t n, std::size_t d, std::uint64_t seed) {
    if (n <= d) throw ArgumentError("gen_matrix_a2: need n > d");
    RngStream rng(seed, streams::kGenerator);
    const DenseMatrix g = gaussian_matrix(rng, d, d);
    DenseMatrix a(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        auto src = g.row(std::min(i, d - 1));
        std::copy(src.begin(), src.end(), a.row(i).begin());
    }
    return a;
}

DenseMatrix gen_matrix_gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
    RngStream rng(seed, streams::kGenerator);
    return gaussian_matrix(rng, n, d);
}

MatrixKind parse_matrix_kind(std::string_view name) {
    const std::string s = lower(name);
    if (s == "a1") return MatrixKind::A1;
    if (s == "a2") return MatrixKind::A2;
    if (s == "gaussian") return MatrixKind::Gaussian;
    throw ArgumentError("unknown matrix kind: " + std::string(name));
}

std::string_view to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::A1: return "a1";
        case MatrixKind::A2: return "a2";
        case MatrixKind::Gaussian: return "gaussian";
    }
    return "?";
}

DenseMatrix gen_matrix(MatrixKind kind, std::size_t n, std::size_t d, std::uint64_t seed) {
    switch (kind) {
        case MatrixKind::A1: return gen_matrix_a1(n, d, seed);
        case MatrixKind::A2: return gen_matrix_a2(n, d, seed);
        case MatrixKind::Gaussian: return gen_matrix_gaussian(n, d, seed);
    }
    throw ArgumentError("gen_matrix: bad kind");
}

RegressionInstance gen_regression_instance(std::size_t n, std::size_t d, std::uint64_t seed,
                                           const InstanceOptions& options) {
    if (n <= d) throw ArgumentError("gen_regression_instance: need n > d");
    RegressionInstance inst{gen_matrix(options.matrix, n, d, seed), {}, {}, {}, 0.0};
    RngStream rng(seed, streams::kNoise);
    inst.x_exact = sample_gaussian(rng, d);
    inst.b = inst.a * inst.x_exact;
    if (options.zero_noise) return inst;

    auto eps = sample_laplace(rng, n);
    const double target = options.noise_ratio * norm2(inst.b);
    const double raw = norm2(eps);
    if (raw > 0.0)
        for (double& e : eps) e *= target / raw;
    inst.noise_norm = norm2(eps);
    for (std::size_t i = 0; i < n; ++i) {
        inst.b[i] += eps[i];
        if (rng.uniform_open() < options.corruption_prob) {
            inst.b[i] = options.corruption_scale * inst.noise_norm;
            inst.corrupted_rows.push_back(i);
        }
    }
    return inst;
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void Report::add(std::string kind, std::size_t n, std::size_t d, std::uint64_t seed,
                 std::string metric, double value) {
    rows.push_back({std::move(kind), n, d, seed, std::move(metric), value});
}

std::string Report::to_csv() const {
    std::ostringstream out;
    out << "kind,n,d,seed,metric,value\n";
    for (const auto& r : rows)
        out << r.kind << ',' << r.n << ',' << r.d << ',' << r.seed << ',' << r.metric << ','
            << format_value(r.value) << '\n';
    return out.str();
}

void Report::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ArgumentError("cannot open report file: " + path);
    f << to_csv();
    if (!f) throw ArgumentError("failed writing report file: " + path);
}

std::vector<double> Report::values(std::string_view kind, std::string_view metric) const {
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.kind == kind && r.metric == metric) out.push_back(r.value);
    return out;
}

Report run_conditioning_bench(const ConditioningBenchConfig& cfg) {
    if (cfg.runs == 0) throw ArgumentError("conditioning bench: runs must be >= 1");
    const DenseMatrix a = cfg.user_matrix ? *cfg.user_matrix : gen_matrix(cfg.matrix, cfg.n, cfg.d, cfg.seed);
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    if (n <= d) throw ArgumentError("conditioning bench: need n > d");
    Report rep;

    try {
        const auto base = kappa_bar_1(a, DenseMatrix::identity(d));
        rep.add("A", n, d, cfg.seed, "alpha", base.alpha);
        rep.add("A", n, d, cfg.seed, "beta", base.beta);
        rep.add("A", n, d, cfg.seed, "kappa_bar", base.kappa_bar);
    } catch (const std::runtime_error&) {
        rep.add("A", n, d, cfg.seed, "kappa_bar", kInf);
    }

    for (SketchKind kind : cfg.kinds) {
        const std::string name(to_string(kind));
        std::vector<double> kappas;
        for (std::size_t r = 0; r < cfg.runs; ++r) {
            const std::uint64_t seed = cfg.seed + r;
            double alpha = kInf, beta = kInf, kappa = kInf;
            try {
                const auto basis = fast_l1_basis(a, kind, seed);
                const auto q = kappa_bar_1(a, basis.r_inv);
                alpha = q.alpha;
                beta = q.beta;
                kappa = q.kappa_bar;
            } catch (const SingularityError&) {
            } catch (const NumericalError&) {
            }
            rep.add(name, n, d, seed, "alpha", alpha);
            rep.add(name, n, d, seed, "beta", beta);
            rep.add(name, n, d, seed, "kappa_bar", kappa);
            kappas.push_back(kappa);
        }
        add_quartiles(rep, name, n, d, cfg.seed, "kappa_bar_", "", kappas);
    }
    return rep;
}

Report run_regression_bench(const RegressionBenchConfig& cfg) {
    if (cfg.runs == 0) throw ArgumentError("regression bench: runs must be >= 1");
    if (cfg.sample_sizes.empty()) throw ArgumentError("regression bench: no sample sizes");
    InstanceOptions iopt;
    iopt.matrix = cfg.matrix;
    const auto inst = gen_regression_instance(cfg.n, cfg.d, cfg.seed, iopt);
    const std::size_t n = cfg.n;
    const std::size_t d = cfg.d;
    const double f_star = exact_l1_regression(inst.a, inst.b).objective;
    Report rep;
    rep.add("exact", n, d, cfg.seed, "f_star", f_star);

    for (const auto& method : cfg.methods) {
        RegressionOptions opt;
        opt.eps = cfg.eps;
        opt.exact_leverage = cfg.exact_leverage;
        const std::string m = lower(method);
        if (m == "unif") {
            opt.mode = SamplingMode::Uniform;
        } else if (m == "nocd") {
            opt.mode = SamplingMode::NoConditioning;
        } else {
            opt.kind = parse_sketch_kind(method);
        }
        std::string name = method;
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });

        for (std::size_t s : cfg.sample_sizes) {
            const std::string suffix = ":s=" + std::to_string(s);
            std::vector<double> errs;
            for (std::size_t r = 0; r < cfg.runs; ++r) {
                opt.seed = cfg.seed + 1 + r;
                opt.sample_size = s;
                double err = kInf;
                try {
                    const auto res = sampled_regression(inst.a, inst.b, opt);
                    err = f_star > 0.0 ? (res.objective - f_star) / f_star
                                       : (res.objective == 0.0 ? 0.0 : kInf);
                } catch (const SingularityError&) {
                } catch (const NumericalError&) {
                } catch (const ArgumentError&) {
                    // empty coreset
                }
                rep.add(name, n, d, opt.seed, "rel_err" + suffix, err);
                errs.push_back(err);
            }
            add_quartiles(rep, name, n, d, cfg.seed, "", suffix, errs);
        }
    }
    return rep;
}

TailLemma parse_tail_lemma(std::string_view name) {
    const std::string s = lower(name);
    if (s == "upper") return TailLemma::Upper;
    if (s == "lower") return TailLemma::Lower;
    if (s == "sampling") return TailLemma::Sampling;
    throw ArgumentError("unknown lemma: " + std::string(name));
}

double upper_tail_bound(double m, double t) {
    const double pt = std::numbers::pi * t;
    const double big_m = 2.0 * m * t;
    return (1.0 / pt) * (std::log(1.0 + big_m * big_m) / (1.0 - 1.0 / pt) + 1.0);
}

double lower_tail_bound(double beta_sq, double t) { return std::exp(-beta_sq * t * t / 3.0); }

double sampling_lemma_delta(double a, double s, double eps, double zx_l1, double z_l1, double x_inf) {
    return 2.0 * std::exp(-a * s * eps * eps * zx_l1 / ((2.0 + 2.0 * eps / 3.0) * z_l1 * x_inf));
}

Report run_tail_checks(const TailCheckConfig& cfg) {
    if (cfg.trials == 0) throw ArgumentError("tail check: trials must be >= 1");
    const double trials = static_cast<double>(cfg.trials);
    Report rep;
    RngStream rng(cfg.seed, streams::kMonteCarlo);
    const auto emit = [&](const std::string& kind, std::size_t n, std::size_t d,
                          const std::string& tag, double estimate, double bound) {
        const double se = std::sqrt(std::max(estimate * (1.0 - estimate), 0.0) / trials);
        rep.add(kind, n, d, cfg.seed, "estimate" + tag, estimate);
        rep.add(kind, n, d, cfg.seed, "bound" + tag, bound);
        rep.add(kind, n, d, cfg.seed, "stderr" + tag, se);
        rep.add(kind, n, d, cfg.seed, "pass" + tag, estimate <= bound + 3.0 * se ? 1.0 : 0.0);
    };

    switch (cfg.lemma) {
        case TailLemma::Upper: {
            constexpr std::size_t m = 100;
            const double ts[] = {10.0, 100.0};
            std::size_t above[2] = {0, 0};
            for (std::size_t k = 0; k < cfg.trials; ++k) {
                double x = 0.0;
                for (std::size_t i = 0; i < m; ++i) x += std::abs(rng.cauchy()) / m;
                for (int j = 0; j < 2; ++j) above[j] += x > ts[j];
            }
            for (int j = 0; j < 2; ++j)
                emit("tail-upper", m, 1, ":t=" + format_value(ts[j]), above[j] / trials,
                     upper_tail_bound(m, ts[j]));
            break;
        }
        case TailLemma::Lower: {
            constexpr std::size_t r = 100;
            const double ts[] = {0.5, 1.0};
            std::size_t below[2] = {0, 0};
            for (std::size_t k = 0; k < cfg.trials; ++k) {
                double x = 0.0;
                for (std::size_t i = 0; i < r; ++i) x += std::abs(rng.cauchy()) / r;
                for (int j = 0; j < 2; ++j) below[j] += x <= 1.0 - ts[j];
            }
            for (int j = 0; j < 2; ++j)
                emit("tail-lower", r, 1, ":t=" + format_value(ts[j]), below[j] / trials,
                     lower_tail_bound(static_cast<double>(r), ts[j]));
            break;
        }
        case TailLemma::Sampling: {
            constexpr std::size_t rows = 100, cols = 3;
            constexpr double s = 60.0, eps = 0.5;
            DenseMatrix z(rows, cols);
            for (double& v : z.data()) v = rng.cauchy();
            const auto x = sample_gaussian(rng, cols);
            const auto zx = z * x;
            const double zx_l1 = norm1(zx);
            const auto t = l1_leverage_scores(z);
            const double z_l1 = entrywise_l1(z);
            // t_i = ‖Z_(i)‖₁/‖Z‖₁ exactly, so a = min_i t_i‖Z‖₁/‖Z_(i)‖₁ = 1
            double a = kInf;
            for (std::size_t i = 0; i < rows; ++i)
                if (t[i] > 0.0) a = std::min(a, (t[i] / z_l1) * z_l1 / t[i]);
            const double delta = sampling_lemma_delta(a, s, eps, zx_l1, z_l1, norm_inf(x));

            std::size_t violations = 0;
            double sum = 0.0, sum_sq = 0.0;
            for (std::size_t k = 0; k < cfg.trials; ++k) {
                const Coreset cs = build_coreset(t, s, trial_seed(cfg.seed, k));
                double v = 0.0;
                for (std::size_t q = 0; q < cs.indices.size(); ++q)
                    v += cs.weights[q] * std::abs(zx[cs.indices[q]]);
                sum += v;
                sum_sq += v * v;
                violations += (v < (1.0 - eps) * zx_l1 || v > (1.0 + eps) * zx_l1);
            }
            emit("sampling", rows, cols, ":eps=0.5", violations / trials, std::min(1.0, delta));
            const double mean = sum / trials;
            const double var = std::max(0.0, sum_sq / trials - mean * mean) * trials / std::max(1.0, trials - 1.0);
            const double se = std::sqrt(var / trials);
            rep.add("sampling", rows, cols, cfg.seed, "mean", mean);
            rep.add("sampling", rows, cols, cfg.seed, "target", zx_l1);
            rep.add("sampling", rows, cols, cfg.seed, "mean_stderr", se);
            rep.add("sampling", rows, cols, cfg.seed, "pass_mean",
                    std::abs(mean - zx_l1) <= 3.0 * se ? 1.0 : 0.0);
            break;
        }
    }
    return rep;
}

}  // namespace cauchy_sketch

// Command-line front end: sketching, conditioning, regression and the benches.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cauchy_sketch/bench.hpp"
#include "cauchy_sketch/conditioning.hpp"
#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/matrix_io.hpp"
#include "cauchy_sketch/regression.hpp"
#include "cauchy_sketch/sketch.hpp"

namespace cs = cauchy_sketch;

namespace {

constexpr int kSeedAttempts = 4;  // the original seed plus three retries

std::vector<double> read_vector(const std::string& path) {
    const cs::DenseMatrix m = cs::io::read_matrix(path);
    if (m.cols() != 1 && m.rows() != 1)
        throw cs::DimensionError("expected a single row or column in " + path);
    return {m.data().begin(), m.data().end()};
}

std::vector<cs::SketchKind> parse_kinds(const std::string& list) {
    std::vector<cs::SketchKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(cs::parse_sketch_kind(item));
    return out;
}

std::vector<std::string> split(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

/// Runs f(seed), retrying with seed+1 on a rank failure.
template <typename F>
auto with_seed_retries(std::uint64_t seed, F&& f) {
    for (int attempt = 0;; ++attempt) {
        try {
            return f(seed + attempt);
        } catch (const cs::SingularityError& e) {
            if (attempt + 1 == kSeedAttempts) throw;
            std::cerr << "warning: " << e.what() << "; retrying with seed " << seed + attempt + 1
                      << '\n';
        }
    }
}

struct SketchArgs {
    std::string in, kind, out, spec_out;
    std::size_t r1 = 0;
    std::uint64_t seed = 0;
};

int run_sketch(const SketchArgs& args) {
    const cs::DenseMatrix a = cs::io::read_matrix(args.in);
    cs::SketchSpec spec;
    spec.kind = cs::parse_sketch_kind(args.kind);
    spec.n = a.rows();
    spec.d = a.cols();
    spec.r1 = args.r1;
    spec.seed = args.seed;
    spec = cs::with_defaults(spec);
    const cs::SketchOperator op = cs::make_sketch(spec);
    cs::io::write_matrix(args.out, op.apply_left(a));
    if (!args.spec_out.empty()) {
        std::ofstream f(args.spec_out);
        f << spec.to_json() << '\n';
    }
    return 0;
}

struct ConditionArgs {
    std::string in, kind, report, basis_out;
    std::uint64_t seed = 0;
};

int run_condition(const ConditionArgs& args) {
    const cs::DenseMatrix a = cs::io::read_matrix(args.in);
    const cs::SketchKind kind = cs::parse_sketch_kind(args.kind);
    const auto [basis, used_seed] = with_seed_retries(args.seed, [&](std::uint64_t s) {
        return std::pair{cs::fast_l1_basis(a, kind, s), s};
    });
    const auto q = cs::kappa_bar_1(a, basis.r_inv);
    cs::Report rep;
    const std::string name(cs::to_string(kind));
    rep.add(name, a.rows(), a.cols(), used_seed, "alpha", q.alpha);
    rep.add(name, a.rows(), a.cols(), used_seed, "beta", q.beta);
    rep.add(name, a.rows(), a.cols(), used_seed, "kappa_bar", q.kappa_bar);
    rep.write(args.report);
    if (!args.basis_out.empty()) cs::io::write_matrix(args.basis_out, basis.r_inv);
    return 0;
}

struct RegressArgs {
    std::string a, b, kind, out, coreset_out;
    std::size_t s = 0;
    double eps = 0.1;
    std::uint64_t seed = 0;
    bool optimized = false;
    bool exact_leverage = false;
};

int run_regress(const RegressArgs& args) {
    const cs::DenseMatrix a = cs::io::read_matrix(args.a);
    const std::vector<double> b = read_vector(args.b);
    if (b.size() != a.rows()) throw cs::DimensionError("b length does not match the rows of A");

    cs::RegressionOptions opt;
    const std::string kind_name = args.kind;
    if (kind_name == "unif" || kind_name == "UNIF") {
        opt.mode = cs::SamplingMode::Uniform;
    } else if (kind_name == "nocd" || kind_name == "NOCD") {
        opt.mode = cs::SamplingMode::NoConditioning;
    } else {
        opt.kind = cs::parse_sketch_kind(kind_name);
    }
    opt.eps = args.eps;
    if (args.s > 0) opt.sample_size = args.s;
    opt.exact_leverage = args.exact_leverage;
    if (args.optimized) opt.estimator = cs::LeverageEstimator::GaussianMedian;

    const auto [res, used_seed] = with_seed_retries(args.seed, [&](std::uint64_t s) {
        cs::RegressionOptions o = opt;
        o.seed = s;
        return std::pair{cs::sampled_regression(a, b, o), s};
    });

    cs::Report rep;
    const std::size_t n = a.rows(), d = a.cols();
    const std::string name = kind_name;
    for (std::size_t k = 0; k < d; ++k)
        rep.add(name, n, d, used_seed, "x_" + std::to_string(k), res.solution.x[k]);
    rep.add(name, n, d, used_seed, "objective", res.objective);
    rep.add(name, n, d, used_seed, "coreset_objective", res.solution.objective);
    rep.add(name, n, d, used_seed, "coreset_rows", static_cast<double>(res.coreset.indices.size()));
    rep.add(name, n, d, used_seed, "sample_size", static_cast<double>(res.sample_size));
    rep.add(name, n, d, used_seed, "r2", static_cast<double>(res.r2));
    rep.write(args.out);

    if (!args.coreset_out.empty()) {
        std::ofstream f(args.coreset_out, std::ios::binary);
        f << "index,weight\n";
        for (std::size_t k = 0; k < res.coreset.indices.size(); ++k)
            f << res.coreset.indices[k] << ',' << cs::format_value(res.coreset.weights[k]) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cauchy-transform sketching, conditioning and robust regression"};
    app.require_subcommand(1);

    SketchArgs sk;
    auto* sketch = app.add_subcommand("sketch", "Apply a random embedding to a matrix");
    sketch->add_option("--in", sk.in, "Input matrix (CSV or binary)")->required();
    sketch->add_option("--kind", sk.kind, "ct|fct1|fct2|gt|srht")->required();
    sketch->add_option("--r1", sk.r1, "Output rows (0 = default for the kind)");
    sketch->add_option("--seed", sk.seed)->required();
    sketch->add_option("--out", sk.out, "Output matrix")->required();
    sketch->add_option("--spec", sk.spec_out, "Write the sketch spec as JSON");

    ConditionArgs co;
    auto* condition = app.add_subcommand("condition", "Well-conditioned basis and its kappa-bar");
    condition->add_option("--in", co.in)->required();
    condition->add_option("--kind", co.kind)->required();
    condition->add_option("--seed", co.seed)->required();
    condition->add_option("--report", co.report)->required();
    condition->add_option("--basis", co.basis_out, "Write R^-1");

    RegressArgs rg;
    auto* regress = app.add_subcommand("regress", "Sampling-based l1 regression");
    regress->add_option("--a", rg.a)->required();
    regress->add_option("--b", rg.b)->required();
    regress->add_option("--kind", rg.kind, "ct|fct1|fct2|gt|srht|unif|nocd")->required();
    regress->add_option("--s", rg.s, "Expected sample size (0 = theoretical default)");
    regress->add_option("--eps", rg.eps)->check(CLI::Range(0.0, 1.0));
    regress->add_option("--seed", rg.seed)->required();
    regress->add_flag("--optimized", rg.optimized, "Gaussian-median leverage estimates");
    regress->add_flag("--exact-leverage", rg.exact_leverage, "Exact row l1 norms of the basis");
    regress->add_option("--out", rg.out)->required();
    regress->add_option("--coreset", rg.coreset_out, "Write the coreset as index,weight CSV");

    std::size_t bc_n = 1u << 14, bc_d = 4, bc_runs = 50;
    std::uint64_t bc_seed = 0;
    std::string bc_matrix = "a2", bc_out, bc_kinds = "ct,fct1,fct2,gt,srht";
    auto* bench_cond = app.add_subcommand("bench-conditioning", "Quartiles of kappa-bar over runs");
    bench_cond->add_option("--n", bc_n);
    bench_cond->add_option("--d", bc_d);
    bench_cond->add_option("--matrix", bc_matrix, "a1|a2|gaussian|file:<path>");
    bench_cond->add_option("--runs", bc_runs);
    bench_cond->add_option("--seed", bc_seed)->required();
    bench_cond->add_option("--kinds", bc_kinds);
    bench_cond->add_option("--out", bc_out)->required();

    cs::RegressionBenchConfig br;
    std::string br_samples = "32,128,512,2048,8192", br_out, br_matrix = "a1",
                br_methods = "CT,FCT1,FCT2,GT,SRHT,UNIF,NOCD";
    auto* bench_reg = app.add_subcommand("bench-regression", "Relative error versus sample size");
    bench_reg->add_option("--n", br.n);
    bench_reg->add_option("--d", br.d);
    bench_reg->add_option("--samples", br_samples);
    bench_reg->add_option("--runs", br.runs);
    bench_reg->add_option("--seed", br.seed)->required();
    bench_reg->add_option("--matrix", br_matrix, "a1|a2|gaussian");
    bench_reg->add_option("--methods", br_methods);
    bench_reg->add_flag("--exact-leverage", br.exact_leverage);
    bench_reg->add_option("--out", br_out)->required();

    cs::TailCheckConfig tc;
    std::string tc_lemma, tc_out;
    auto* tail = app.add_subcommand("tail-check", "Monte Carlo checks of the tail and sampling bounds");
    tail->add_option("--lemma", tc_lemma, "upper|lower|sampling")->required();
    tail->add_option("--trials", tc.trials);
    tail->add_option("--seed", tc.seed)->required();
    tail->add_option("--out", tc_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sketch) return run_sketch(sk);
        if (*condition) return run_condition(co);
        if (*regress) return run_regress(rg);
        if (*bench_cond) {
            cs::ConditioningBenchConfig cfg;
            cfg.n = bc_n;
            cfg.d = bc_d;
            cfg.runs = bc_runs;
            cfg.seed = bc_seed;
            cfg.kinds = parse_kinds(bc_kinds);
            if (bc_matrix.rfind("file:", 0) == 0)
                cfg.user_matrix = cs::io::read_matrix(bc_matrix.substr(5));
            else
                cfg.matrix = cs::parse_matrix_kind(bc_matrix);
            cs::run_conditioning_bench(cfg).write(bc_out);
            return 0;
        }
        if (*bench_reg) {
            br.sample_sizes.clear();
            for (const auto& s : split(br_samples)) br.sample_sizes.push_back(std::stoull(s));
            br.methods = split(br_methods);
            br.matrix = cs::parse_matrix_kind(br_matrix);
            cs::run_regression_bench(br).write(br_out);
            return 0;
        }
        if (*tail) {
            tc.lemma = cs::parse_tail_lemma(tc_lemma);
            cs::run_tail_checks(tc).write(tc_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

// pybind11 bindings: numpy arrays in and out, C++ exceptions mapped to
// ValueError/ArithmeticError/RuntimeError.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>

#include "cauchy_sketch/bench.hpp"
#include "cauchy_sketch/conditioning.hpp"
#include "cauchy_sketch/ellipsoid.hpp"
#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/lp.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "cauchy_sketch/regression.hpp"
#include "cauchy_sketch/sketch.hpp"

namespace py = pybind11;
namespace cs = cauchy_sketch;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

cs::DenseMatrix to_matrix(const Array& arr) {
    if (arr.ndim() == 1) {
        cs::DenseMatrix m(static_cast<std::size_t>(arr.shape(0)), 1);
        std::memcpy(m.data().data(), arr.data(), m.data().size_bytes());
        return m;
    }
    if (arr.ndim() != 2) throw cs::DimensionError("expected a 1-D or 2-D array");
    cs::DenseMatrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::memcpy(m.data().data(), arr.data(), m.data().size_bytes());
    return m;
}

std::vector<double> to_vector(const Array& arr) {
    if (arr.ndim() != 1) throw cs::DimensionError("expected a 1-D array");
    return {arr.data(), arr.data() + arr.shape(0)};
}

Array from_matrix(const cs::DenseMatrix& m) {
    Array out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
    std::memcpy(out.mutable_data(), m.data().data(), m.data().size_bytes());
    return out;
}

Array from_vector(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
    return out;
}

py::dict solution_dict(const cs::L1Solution& s) {
    py::dict d;
    d["x"] = from_vector(s.x);
    d["objective"] = s.objective;
    d["dual_bound"] = s.dual_bound;
    d["iterations"] = s.iterations;
    d["status"] = s.status == cs::L1Status::Optimal ? "optimal"
                  : s.status == cs::L1Status::Infeasible ? "infeasible" : "unbounded";
    return d;
}

py::dict coreset_dict(const cs::Coreset& c) {
    py::dict d;
    d["indices"] = c.indices;
    d["weights"] = from_vector(c.weights);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cauchy-sketch based l1 regression and conditioning";

    py::register_exception<cs::DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<cs::ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<cs::SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
    py::register_exception<cs::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<cs::ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

    m.def("fwht", [](const Array& v) { return from_vector(cs::fwht_normalized(to_vector(v))); },
          py::arg("v"), "Normalized Walsh-Hadamard transform; length must be a power of two.");

    m.def(
        "sketch",
        [](const Array& a, const std::string& kind, std::size_t r1, std::uint64_t seed) {
            const auto mat = to_matrix(a);
            cs::SketchSpec spec;
            spec.kind = cs::parse_sketch_kind(kind);
            spec.n = mat.rows();
            spec.d = mat.cols();
            spec.r1 = r1;
            spec.seed = seed;
            return from_matrix(cs::make_sketch(cs::with_defaults(spec)).apply_left(mat));
        },
        py::arg("a"), py::arg("kind") = "ct", py::arg("r1") = 0, py::arg("seed") = 0,
        "Pi A for one of ct, fct1, fct2, gt, srht (r1 = 0 picks the default).");

    m.def(
        "fast_l1_basis",
        [](const Array& a, const std::string& kind, std::uint64_t seed) {
            return from_matrix(cs::fast_l1_basis(to_matrix(a), cs::parse_sketch_kind(kind), seed).r_inv);
        },
        py::arg("a"), py::arg("kind") = "ct", py::arg("seed") = 0, "R^-1 such that A R^-1 is well conditioned in l1.");

    m.def(
        "fast_lp_basis",
        [](const Array& a, double p, std::uint64_t seed) {
            return from_matrix(cs::fast_lp_basis(to_matrix(a), p, seed).r_inv);
        },
        py::arg("a"), py::arg("p"), py::arg("seed") = 0);

    m.def(
        "kappa_bar_1",
        [](const Array& a, const Array& r_inv) {
            const auto rep = cs::kappa_bar_1(to_matrix(a), to_matrix(r_inv));
            py::dict d;
            d["alpha"] = rep.alpha;
            d["beta"] = rep.beta;
            d["kappa_bar"] = rep.kappa_bar;
            return d;
        },
        py::arg("a"), py::arg("r_inv"));

    m.def(
        "solve_weighted_l1",
        [](const Array& a, const Array& b, std::optional<Array> weights) {
            cs::L1Problem prob;
            prob.a = to_matrix(a);
            prob.b = to_vector(b);
            if (weights) prob.weights = to_vector(*weights);
            return solution_dict(cs::solve_weighted_l1(prob));
        },
        py::arg("a"), py::arg("b"), py::arg("weights") = py::none(), "Exact min sum w_i |A_i x - b_i|.");

    m.def(
        "l1_regression",
        [](const Array& a, const Array& b, const std::string& kind, std::optional<std::size_t> s,
           double eps, std::uint64_t seed, bool optimized) {
            const auto mat = to_matrix(a);
            const auto rhs = to_vector(b);
            const auto k = cs::parse_sketch_kind(kind);
            const auto res = optimized ? cs::optimized_fast_cauchy_regression(mat, rhs, eps, k, seed, s)
                                       : cs::fast_cauchy_regression(mat, rhs, eps, k, seed, s);
            py::dict d = solution_dict(res.solution);
            d["objective"] = res.objective;
            d["coreset_objective"] = res.solution.objective;
            d["coreset"] = coreset_dict(res.coreset);
            d["sample_size"] = res.sample_size;
            d["r2"] = res.r2;
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("kind") = "ct", py::arg("s") = py::none(), py::arg("eps") = 0.1,
        py::arg("seed") = 0, py::arg("optimized") = false, "Coreset l1 regression; objective is on the full data.");

    m.def(
        "subspace_approx_l1",
        [](const Array& a, const std::string& kind, std::optional<std::size_t> s, double eps,
           std::uint64_t seed) {
            const auto res = cs::subspace_approx_l1(to_matrix(a), eps, cs::parse_sketch_kind(kind), seed, s);
            py::dict d;
            d["j_star"] = res.j_star;
            d["w_hat"] = from_matrix(res.w_hat);
            d["objective"] = res.objective;
            d["column_objectives"] = from_vector(res.column_objectives);
            return d;
        },
        py::arg("a"), py::arg("kind") = "ct", py::arg("s") = py::none(), py::arg("eps") = 0.1, py::arg("seed") = 0);

    m.def(
        "leverage_scores",
        [](const Array& x, const Array& r_inv, std::size_t r2, std::uint64_t seed, const std::string& estimator) {
            cs::LeverageEstimator est = cs::LeverageEstimator::CauchyMedian;
            if (estimator == "gaussian") est = cs::LeverageEstimator::GaussianMedian;
            else if (estimator == "exact") est = cs::LeverageEstimator::Exact;
            else if (estimator != "cauchy") throw cs::ArgumentError("estimator must be cauchy, gaussian or exact");
            return from_vector(cs::estimate_leverage(to_matrix(x), to_matrix(r_inv), est, r2, seed).lambda);
        },
        py::arg("x"), py::arg("r_inv"), py::arg("r2") = 60, py::arg("seed") = 0, py::arg("estimator") = "cauchy");

    m.def(
        "round_lp_ball",
        [](const Array& a, double p) {
            const auto mat = to_matrix(a);
            const auto start = cs::lp_start_ellipsoid(cs::qr_r_factor(mat), mat.rows(), p);
            const auto res = cs::round_2d(cs::norm_ball_oracle(mat, p), start.ellipsoid, start.big_l);
            py::dict d;
            d["shape"] = from_matrix(res.ellipsoid.shape());
            d["cuts"] = res.cuts;
            d["sweeps"] = res.sweeps;
            return d;
        },
        py::arg("a"), py::arg("p"), "Ellipsoid E with E/(2d) inside {x: |Ax|_p <= 1} inside E.");

    m.def(
        "gen_matrix",
        [](const std::string& kind, std::size_t n, std::size_t d, std::uint64_t seed) {
            return from_matrix(cs::gen_matrix(cs::parse_matrix_kind(kind), n, d, seed));
        },
        py::arg("kind"), py::arg("n"), py::arg("d"), py::arg("seed") = 0);
}

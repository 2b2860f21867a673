#include "cauchy_sketch/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "eigen_view.hpp"

namespace cauchy_sketch {

namespace {

// Unconstrained weighted ℓ1 fit on rows with strictly positive weight.
struct CoreProblem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // row-major rows x cols
    std::vector<double> b;
    std::vector<double> w;

    std::span<const double> row(std::size_t i) const { return {a.data() + i * cols, cols}; }
};

struct CoreResult {
    std::vector<double> x;
    double dual_bound = 0.0;
    double dual_infeasibility = 0.0;
    std::size_t iterations = 0;
};

constexpr double kIndependenceTol = 1e-9;
constexpr double kZeroResidualTol = 1e-11;
constexpr double kDualTol = 1e-9;

/// Greedy selection of `cols` linearly independent rows, visiting rows in
/// order of increasing |residual| of a weighted least-squares fit.
std::vector<std::size_t> initial_basis(const CoreProblem& p) {
    const std::size_t m = p.cols;
    DenseMatrix scaled(p.rows, m);
    std::vector<double> rhs(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) {
        const double sw = std::sqrt(p.w[i]);
        auto r = p.row(i);
        for (std::size_t k = 0; k < m; ++k) scaled(i, k) = sw * r[k];
        rhs[i] = sw * p.b[i];
    }
    const auto x0 = least_squares(scaled, rhs);

    std::vector<double> resid(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) resid[i] = std::abs(dot(p.row(i), x0) - p.b[i]);
    std::vector<std::size_t> order(p.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return resid[i] < resid[j]; });

    std::vector<std::vector<double>> ortho;
    std::vector<std::size_t> chosen;
    std::vector<double> v(m);
    for (std::size_t i : order) {
        auto r = p.row(i);
        const double rn = norm2(r);
        if (rn == 0.0) continue;
        std::copy(r.begin(), r.end(), v.begin());
        for (const auto& q : ortho) {
            const double c = dot(q, v);
            for (std::size_t k = 0; k < m; ++k) v[k] -= c * q[k];
        }
        const double vn = norm2(v);
        if (vn <= kIndependenceTol * rn) continue;
        for (double& e : v) e /= vn;
        ortho.push_back(v);
        chosen.push_back(i);
        if (chosen.size() == m) break;
    }
    if (chosen.size() < m) {
        throw SingularityError("solve_weighted_l1: rows span only " + std::to_string(chosen.size()) +
                                   " of " + std::to_string(m) + " free coordinates",
                               chosen.size());
    }
    return chosen;
}

CoreResult solve_core(const CoreProblem& p) {
    const std::size_t n = p.rows;
    const std::size_t m = p.cols;
    std::vector<std::size_t> basis = initial_basis(p);
    std::vector<char> is_basic(n, 0);
    for (std::size_t i : basis) is_basic[i] = 1;
    std::vector<signed char> sigma(n, 1);

    Eigen::MatrixXd ab(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    Eigen::VectorXd bb(static_cast<Eigen::Index>(m));
    Eigen::VectorXd x(static_cast<Eigen::Index>(m));
    Eigen::VectorXd yb(static_cast<Eigen::Index>(m));
    std::vector<double> resid(n), slope_dir(n);
    std::vector<char> at_zero(n, 0);
    struct Breakpoint {
        double t;
        std::size_t row;
    };
    std::vector<Breakpoint> breakpoints;

    const std::size_t max_iterations = 20 * (n + m) + 1000;
    std::size_t iterations = 0;

    for (;;) {
        // basis rows sorted by row index, so position order == Bland order
        std::sort(basis.begin(), basis.end());
        for (std::size_t q = 0; q < m; ++q) {
            auto r = p.row(basis[q]);
            for (std::size_t k = 0; k < m; ++k)
                ab(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)) = r[k];
            bb(static_cast<Eigen::Index>(q)) = p.b[basis[q]];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(ab);
        x = lu.solve(bb);
        if (!x.allFinite()) throw NumericalError("solve_weighted_l1: singular basis");

        Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < n; ++i) {
            if (is_basic[i]) {
                resid[i] = 0.0;
                at_zero[i] = 1;
                continue;
            }
            auto r = p.row(i);
            double fit = 0.0, scale = std::abs(p.b[i]);
            for (std::size_t k = 0; k < m; ++k) {
                const double term = r[k] * x(static_cast<Eigen::Index>(k));
                fit += term;
                scale += std::abs(term);
            }
            resid[i] = fit - p.b[i];
            at_zero[i] = std::abs(resid[i]) <= kZeroResidualTol * scale;
            if (!at_zero[i]) sigma[i] = resid[i] > 0.0 ? 1 : -1;
            const double ws = p.w[i] * sigma[i];
            for (std::size_t k = 0; k < m; ++k) g(static_cast<Eigen::Index>(k)) += ws * r[k];
        }
        yb = ab.transpose().partialPivLu().solve(-g);

        std::size_t leave = m;
        for (std::size_t q = 0; q < m; ++q) {
            const double wq = p.w[basis[q]];
            const double yq = yb(static_cast<Eigen::Index>(q));
            if (std::abs(yq) - wq > kDualTol * (wq + std::abs(yq))) {
                leave = q;
                break;
            }
        }
        if (leave == m) break;

        if (++iterations > max_iterations) {
            throw NumericalError("solve_weighted_l1: iteration guard exceeded (" +
                                 std::to_string(max_iterations) + ")");
        }

        const double yk = yb(static_cast<Eigen::Index>(leave));
        const double s = yk > 0.0 ? 1.0 : -1.0;
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        unit(static_cast<Eigen::Index>(leave)) = s;
        const Eigen::VectorXd delta = lu.solve(unit);
        const double delta_norm = delta.norm();

        breakpoints.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (is_basic[i]) continue;
            auto r = p.row(i);
            double c = 0.0;
            for (std::size_t k = 0; k < m; ++k) c += r[k] * delta(static_cast<Eigen::Index>(k));
            slope_dir[i] = c;
            if (std::abs(c) <= 1e-14 * norm2(r) * delta_norm) continue;
            if (sigma[i] * c >= 0.0) continue;
            const double t = at_zero[i] ? 0.0 : std::max(0.0, -resid[i] / c);
            breakpoints.push_back({t, i});
        }
        std::sort(breakpoints.begin(), breakpoints.end(), [](const Breakpoint& a, const Breakpoint& b) {
            return a.t < b.t || (a.t == b.t && a.row < b.row);
        });

        double slope = p.w[basis[leave]] - std::abs(yk);
        std::size_t enter_pos = breakpoints.size();
        for (std::size_t k = 0; k < breakpoints.size(); ++k) {
            const std::size_t i = breakpoints[k].row;
            slope += 2.0 * p.w[i] * std::abs(slope_dir[i]);
            if (slope >= 0.0) {
                enter_pos = k;
                break;
            }
        }
        if (enter_pos == breakpoints.size()) {
            // the objective is bounded below by zero, so this is a numerical failure
            throw NumericalError("solve_weighted_l1: descent edge without a minimizing breakpoint");
        }
        for (std::size_t k = 0; k < enter_pos; ++k) {
            const std::size_t i = breakpoints[k].row;
            sigma[i] = slope_dir[i] > 0.0 ? 1 : -1;
        }
        const std::size_t entering = breakpoints[enter_pos].row;
        const std::size_t leaving = basis[leave];
        is_basic[leaving] = 0;
        sigma[leaving] = static_cast<signed char>(s);
        is_basic[entering] = 1;
        basis[leave] = entering;
    }

    CoreResult out;
    out.x.assign(x.data(), x.data() + x.size());
    out.iterations = iterations;
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_basic[i]) bound -= p.b[i] * p.w[i] * sigma[i];
    for (std::size_t q = 0; q < m; ++q) {
        const double yq = yb(static_cast<Eigen::Index>(q));
        bound -= p.b[basis[q]] * yq;
        out.dual_infeasibility = std::max(out.dual_infeasibility, std::abs(yq) - p.w[basis[q]]);
    }
    out.dual_bound = bound;
    return out;
}

}  // namespace

double weighted_l1_objective(const DenseMatrix& a, std::span<const double> b,
                             std::span<const double> weights, std::span<const double> x) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (w == 0.0) continue;
        const double r = dot(a.row(i), x) - (b.empty() ? 0.0 : b[i]);
        total += w * std::abs(r);
    }
    return total;
}

L1Solution solve_weighted_l1(const L1Problem& prob) {
    const DenseMatrix& a = prob.a;
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    if (n == 0) throw ArgumentError("solve_weighted_l1: empty problem");
    if (!prob.b.empty() && prob.b.size() != n)
        throw DimensionError("solve_weighted_l1: b has wrong length");
    if (!prob.weights.empty() && prob.weights.size() != n)
        throw DimensionError("solve_weighted_l1: weights have wrong length");
    for (double w : prob.weights)
        if (!std::isfinite(w) || w < 0.0)
            throw ArgumentError("solve_weighted_l1: weights must be finite and >= 0");
    for (double v : prob.b)
        if (!std::isfinite(v)) throw ArgumentError("solve_weighted_l1: non-finite b");
    if (prob.box && !(*prob.box > 0.0)) throw ArgumentError("solve_weighted_l1: box must be > 0");

    std::vector<char> fixed(d, 0);
    std::vector<double> x(d, 0.0);
    for (const auto& [idx, value] : prob.fixed_coords) {
        if (idx >= d) throw ArgumentError("solve_weighted_l1: fixed coordinate out of range");
        if (fixed[idx]) throw ArgumentError("solve_weighted_l1: duplicate fixed coordinate");
        if (!std::isfinite(value)) throw ArgumentError("solve_weighted_l1: non-finite fixed value");
        fixed[idx] = 1;
        x[idx] = value;
    }

    L1Solution sol;
    if (prob.box) {
        for (const auto& [idx, value] : prob.fixed_coords) {
            if (std::abs(value) > *prob.box) {
                sol.x = x;
                sol.status = L1Status::Infeasible;
                sol.objective = std::numeric_limits<double>::infinity();
                sol.dual_bound = sol.objective;
                return sol;
            }
        }
    }

    std::vector<std::size_t> free_cols;
    for (std::size_t k = 0; k < d; ++k)
        if (!fixed[k]) free_cols.push_back(k);
    const std::size_t m = free_cols.size();

    CoreProblem core;
    core.cols = m;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = prob.weights.empty() ? 1.0 : prob.weights[i];
        if (w == 0.0) continue;
        auto r = a.row(i);
        double rhs = prob.b.empty() ? 0.0 : prob.b[i];
        for (std::size_t k = 0; k < d; ++k)
            if (fixed[k]) rhs -= r[k] * x[k];
        for (std::size_t k : free_cols) core.a.push_back(r[k]);
        core.b.push_back(rhs);
        core.w.push_back(w);
        ++core.rows;
    }

    const auto finish = [&](double dual_bound) {
        sol.x = x;
        sol.objective = weighted_l1_objective(a, prob.b, prob.weights, x);
        sol.status = L1Status::Optimal;
        sol.dual_bound = dual_bound;
        return sol;
    };

    if (m == 0 || core.rows == 0) {
        if (m > 0 && core.rows == 0) {
            // nothing constrains the free coordinates; zero is optimal and feasible
        }
        sol.dual_infeasibility = 0.0;
        const double obj = weighted_l1_objective(a, prob.b, prob.weights, x);
        return finish(obj);
    }

    double penalty_constant = 0.0;
    if (prob.box) {
        // exact penalty: slope M outside the box exceeds any multiplier of |z_k| <= box
        double max_colsum = 0.0;
        for (std::size_t q = 0; q < m; ++q) {
            double colsum = 0.0;
            for (std::size_t i = 0; i < core.rows; ++i) colsum += core.w[i] * std::abs(core.a[i * m + q]);
            max_colsum = std::max(max_colsum, colsum);
        }
        const double big = 2.0 * max_colsum + 1.0;
        const double c = *prob.box;
        for (std::size_t q = 0; q < m; ++q) {
            for (double sgn : {1.0, -1.0}) {
                for (std::size_t k = 0; k < m; ++k) core.a.push_back(k == q ? 1.0 : 0.0);
                core.b.push_back(sgn * c);
                core.w.push_back(0.5 * big);
                ++core.rows;
            }
        }
        penalty_constant = big * c * static_cast<double>(m);
    }

    CoreResult res = solve_core(core);
    for (std::size_t q = 0; q < m; ++q) {
        double v = res.x[q];
        if (prob.box) v = std::clamp(v, -*prob.box, *prob.box);
        x[free_cols[q]] = v;
    }
    sol.iterations = res.iterations;
    sol.dual_infeasibility = res.dual_infeasibility;
    return finish(res.dual_bound - penalty_constant);
}

double kappa_beta_lp(const DenseMatrix& u, std::size_t j) {
    if (j >= u.cols()) throw ArgumentError("kappa_beta_lp: column index out of range");
    L1Problem prob{u, {}, {}, {{j, 1.0}}, 1.0};
    const auto sol = solve_weighted_l1(prob);
    if (sol.status != L1Status::Optimal) throw NumericalError("kappa_beta_lp: LP not optimal");
    return sol.objective;
}

}  // namespace cauchy_sketch

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cauchy_sketch/matrix.hpp"

namespace cauchy_sketch {

/// min_x Σ w_i |A_i x - b_i| subject to optional equality constraints on
/// single coordinates and an optional ‖x‖∞ bound.
struct L1Problem {
    DenseMatrix a;
    std::vector<double> b;        // empty means all-zero
    std::vector<double> weights;  // empty means all ones
    std::vector<std::pair<std::size_t, double>> fixed_coords;
    std::optional<double> box;
};

enum class L1Status { Optimal, Unbounded, Infeasible };

struct L1Solution {
    std::vector<double> x;
    double objective = 0.0;  // Σ w_i |A_i x - b_i|, recomputed from x
    L1Status status = L1Status::Optimal;
    /// Lower bound on the optimum from the final simplex dual; equals
    /// `objective` up to rounding at optimality.
    double dual_bound = 0.0;
    /// max_i (|y_i| - w_i)_+ of the dual certificate (0 for an exact certificate).
    double dual_infeasibility = 0.0;
    std::size_t iterations = 0;
};

/// Exact weighted least-absolute-deviations solve.
///
/// The LP min Σ w_i(u_i + v_i), A x - b = u - v, u, v >= 0 is solved by a
/// primal simplex whose vertices are indexed by the m = (free coordinates)
/// rows interpolated exactly; each pivot drops one interpolated row (lowest
/// row index among those with a dual-infeasible multiplier, Bland-style) and
/// moves along the edge to the breakpoint minimizing the objective. Fixed
/// coordinates are substituted out; the box is enforced by exact-penalty rows.
/// Zero-weight rows are dropped. Deterministic.
///
/// Throws SingularityError if the rows with positive weight do not span the
/// free coordinates, ArgumentError on malformed input.
L1Solution solve_weighted_l1(const L1Problem& prob);

/// min ‖U z‖₁ subject to ‖z‖∞ <= 1 and z_j = 1.
double kappa_beta_lp(const DenseMatrix& u, std::size_t j);

/// Σ w_i |A_i x - b_i| (unit weights / zero b when empty).
double weighted_l1_objective(const DenseMatrix& a, std::span<const double> b,
                             std::span<const double> weights, std::span<const double> x);

}  // namespace cauchy_sketch

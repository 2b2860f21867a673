#include "cauchy_sketch/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "eigen_view.hpp"

namespace cauchy_sketch {

namespace {

void check_symmetric(const DenseMatrix& s) {
    const double scale = std::max(1e-300, frobenius_norm(s));
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = i + 1; j < s.cols(); ++j)
            if (std::abs(s(i, j) - s(j, i)) > 1e-10 * scale)
                throw NumericalError("Ellipsoid: shape matrix is not symmetric");
}

void symmetrize(DenseMatrix& s) {
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = i + 1; j < s.cols(); ++j) {
            const double v = 0.5 * (s(i, j) + s(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
}

}  // namespace

Ellipsoid::Ellipsoid(DenseMatrix shape) : shape_(std::move(shape)), chol_(1, 1) {
    if (shape_.rows() != shape_.cols()) throw DimensionError("Ellipsoid: shape matrix must be square");
    check_symmetric(shape_);
    chol_ = cholesky_lower(shape_);
}

Ellipsoid Ellipsoid::from_factor(const DenseMatrix& r, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ArgumentError("Ellipsoid: radius must be > 0");
    const DenseMatrix r_inv = invert(r);
    DenseMatrix s = (radius * radius) * (r_inv * r_inv.transpose());
    symmetrize(s);
    return Ellipsoid(std::move(s));
}

double Ellipsoid::gauge(std::span<const double> x) const {
    if (x.size() != dim()) throw DimensionError("Ellipsoid::gauge: wrong dimension");
    const Eigen::VectorXd xv = detail::ConstVectorMap(x.data(), static_cast<Eigen::Index>(x.size()));
    // ‖L⁻¹x‖₂ with S = L Lᵀ
    const Eigen::VectorXd y = detail::view(chol_).triangularView<Eigen::Lower>().solve(xv);
    return y.norm();
}

DenseMatrix Ellipsoid::norm_factor() const {
    // S⁻¹ = L⁻ᵀ L⁻¹; its upper Cholesky factor is Rᵀ of S⁻¹ = RᵀR.
    const DenseMatrix l_inv = detail::to_dense(
        detail::view(chol_).triangularView<Eigen::Lower>().solve(
            detail::RowMatrix::Identity(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()))));
    DenseMatrix s_inv = l_inv.transpose() * l_inv;
    symmetrize(s_inv);
    return cholesky_lower(s_inv).transpose();
}

Ellipsoid todd_update(const Ellipsoid& ell, std::span<const double> g, double beta) {
    const std::size_t d = ell.dim();
    if (g.size() != d) throw DimensionError("todd_update: certificate has wrong dimension");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ArgumentError("todd_update: beta must be > 0");
    if (norm_inf(g) == 0.0) throw ArgumentError("todd_update: zero certificate");
    if (beta >= 1.0 / std::sqrt(static_cast<double>(d))) return ell;

    const auto eg = ell.shape() * g;
    const double geg = dot(g, eg);
    const double b2 = beta * beta;
    DenseMatrix next(d, d);
    if (d == 1) {
        next(0, 0) = b2 * ell.shape()(0, 0);
    } else {
        const double dd = static_cast<double>(d);
        const double delta = dd * (1.0 - b2) / (dd - 1.0);
        const double sigma = (1.0 - dd * b2) / (1.0 - b2);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                next(i, j) = delta * (ell.shape()(i, j) - sigma * eg[i] * eg[j] / geg);
    }
    symmetrize(next);
    try {
        return Ellipsoid(std::move(next));
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("todd_update: result not positive definite (beta=") +
                             std::to_string(beta) + ", gᵀEg=" + std::to_string(geg) + "): " + e.what());
    }
}

double todd_volume_ratio(std::size_t d, double beta) {
    const double dd = static_cast<double>(d);
    if (d == 1) return beta;
    return std::sqrt(dd) * std::pow(dd / (dd - 1.0), 0.5 * (dd - 1.0)) * beta *
           std::pow(1.0 - beta * beta, 0.5 * (dd - 1.0));
}

std::size_t rounding_sweep_cap(std::size_t d, double big_l) {
    if (!(big_l >= 1.0)) throw ArgumentError("rounding: L must be >= 1");
    const double dd = static_cast<double>(d);
    return static_cast<std::size_t>(std::ceil(3.15 * dd * dd * std::log(big_l))) + d;
}

RoundingResult round_2d(const SeparationOracle& oracle, const Ellipsoid& e0, double big_l,
                        const std::function<void(const Ellipsoid&)>& after_cut) {
    const std::size_t d = e0.dim();
    const std::size_t cap = rounding_sweep_cap(d, big_l);
    const double probe_scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(d)));
    RoundingResult res{e0};
    std::vector<double> probe(d);
    for (;;) {
        if (res.sweeps == cap) {
            throw ContractViolation("round_2d: sweep cap " + std::to_string(cap) +
                                    " exceeded; the body is not within [E0/L, E0]");
        }
        ++res.sweeps;
        const auto eig = symmetric_eigen(res.ellipsoid.shape());
        bool cut = false;
        for (std::size_t i = 0; i < d && !cut; ++i) {
            const double radius = std::sqrt(std::max(eig.values[i], 0.0)) * probe_scale;
            for (double sgn : {1.0, -1.0}) {
                for (std::size_t k = 0; k < d; ++k) probe[k] = sgn * radius * eig.vectors(k, i);
                ++res.oracle_calls;
                const OracleAnswer ans = oracle(probe);
                if (ans.inside) continue;
                const auto& g = ans.certificate;
                if (g.size() != d || !std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); }))
                    throw ContractViolation("round_2d: malformed certificate");
                if (!(dot(g, probe) > 1.0))
                    throw ContractViolation("round_2d: certificate does not separate the query");
                const double geg = dot(g, res.ellipsoid.shape() * g);
                res.ellipsoid = todd_update(res.ellipsoid, g, 1.0 / std::sqrt(geg));
                ++res.cuts;
                if (after_cut) after_cut(res.ellipsoid);
                cut = true;
                break;
            }
        }
        if (!cut) return res;
    }
}

SeparationOracle norm_ball_oracle(const DenseMatrix& a, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ArgumentError("norm_ball_oracle: p must be >= 1");
    auto mat = std::make_shared<const DenseMatrix>(a);
    return [mat, p](std::span<const double> z) -> OracleAnswer {
        if (z.size() != mat->cols()) throw DimensionError("norm_ball_oracle: wrong dimension");
        auto az = (*mat) * z;
        const double nrm = norm_p(az, p);
        if (nrm <= 1.0) return {};
        for (double& v : az) {
            const double u = v / nrm;
            v = p == 1.0 ? (u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0))
                         : std::copysign(std::pow(std::abs(u), p - 1.0), u);
        }
        return {false, transpose_times(*mat, az)};
    };
}

double block_norm(const DenseMatrix& stacked, std::size_t block_rows, double p,
                  std::span<const double> x) {
    const auto ax = stacked * x;
    std::vector<double> norms;
    for (std::size_t start = 0; start < ax.size(); start += block_rows) {
        const std::size_t len = std::min(block_rows, ax.size() - start);
        norms.push_back(norm2(std::span<const double>(ax).subspan(start, len)));
    }
    return norm_p(norms, p);
}

SeparationOracle block_norm_oracle(const DenseMatrix& stacked, std::size_t block_rows, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ArgumentError("block_norm_oracle: p must be >= 1");
    if (block_rows == 0) throw ArgumentError("block_norm_oracle: block_rows must be >= 1");
    auto mat = std::make_shared<const DenseMatrix>(stacked);
    return [mat, block_rows, p](std::span<const double> z) -> OracleAnswer {
        if (z.size() != mat->cols()) throw DimensionError("block_norm_oracle: wrong dimension");
        auto az = (*mat) * z;
        std::vector<double> norms;
        for (std::size_t start = 0; start < az.size(); start += block_rows) {
            const std::size_t len = std::min(block_rows, az.size() - start);
            norms.push_back(norm2(std::span<const double>(az).subspan(start, len)));
        }
        const double f = norm_p(norms, p);
        if (f <= 1.0) return {};
        // gradient Σ (‖A_i z‖/f)^{p-1} A_iᵀ(A_i z/‖A_i z‖); zero blocks contribute nothing
        for (std::size_t b = 0, start = 0; start < az.size(); ++b, start += block_rows) {
            const std::size_t len = std::min(block_rows, az.size() - start);
            const double coef = norms[b] == 0.0 ? 0.0 : std::pow(norms[b] / f, p - 1.0) / norms[b];
            for (std::size_t k = start; k < start + len; ++k) az[k] *= coef;
        }
        return {false, transpose_times(*mat, az)};
    };
}

StartEllipsoid lp_start_ellipsoid(const DenseMatrix& r, std::size_t count, double p) {
    if (count == 0) throw ArgumentError("lp_start_ellipsoid: count must be >= 1");
    const double expo = 1.0 / p - 0.5;
    const double big_l = std::pow(static_cast<double>(count), std::abs(expo));
    const double radius = p > 2.0 ? big_l : 1.0;
    return {Ellipsoid::from_factor(r, radius), big_l};
}

}  // namespace cauchy_sketch

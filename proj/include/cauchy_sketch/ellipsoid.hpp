#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cauchy_sketch/matrix.hpp"

namespace cauchy_sketch {

/// Origin-centred ellipsoid {x : xᵀ S⁻¹ x <= 1} for an SPD shape matrix S.
class Ellipsoid {
public:
    /// Throws DimensionError for non-square input, NumericalError if S is not
    /// symmetric (1e-10 relative) or not positive definite.
    explicit Ellipsoid(DenseMatrix shape);

    /// {x : ‖R x‖₂ <= radius} for invertible R.
    static Ellipsoid from_factor(const DenseMatrix& r, double radius = 1.0);

    std::size_t dim() const noexcept { return shape_.rows(); }
    const DenseMatrix& shape() const noexcept { return shape_; }

    /// √(xᵀ S⁻¹ x); the ellipsoid is {gauge <= 1}.
    double gauge(std::span<const double> x) const;
    bool contains(std::span<const double> x) const { return gauge(x) <= 1.0; }
    /// Upper-triangular R with nonnegative diagonal and RᵀR = S⁻¹, so that
    /// gauge(x) = ‖R x‖₂.
    DenseMatrix norm_factor() const;

private:
    DenseMatrix shape_;
    DenseMatrix chol_;  // lower Cholesky factor of S
};

struct OracleAnswer {
    bool inside = true;
    /// Outside only: g with |gᵀx| <= 1 on the body and gᵀ(query) > 1.
    std::vector<double> certificate;
};

using SeparationOracle = std::function<OracleAnswer(std::span<const double>)>;

/// Minimum-volume ellipsoid containing ell ∩ {x : |gᵀx| <= 1}, with
/// beta = (gᵀ S g)^{-1/2}. Returns ell unchanged when beta >= d^{-1/2}.
/// Throws ArgumentError for beta <= 0 or g = 0, NumericalError when the update
/// loses positive definiteness.
Ellipsoid todd_update(const Ellipsoid& ell, std::span<const double> g, double beta);

/// Volume ratio vol(E₊)/vol(E) of a Todd update in closed form (beta < d^{-1/2}).
double todd_volume_ratio(std::size_t d, double beta);

/// Upper limit on rounding sweeps: ⌈3.15 d² ln L⌉ + d.
std::size_t rounding_sweep_cap(std::size_t d, double big_l);

struct RoundingResult {
    Ellipsoid ellipsoid;
    std::size_t oracle_calls = 0;
    std::size_t cuts = 0;
    std::size_t sweeps = 0;
};

/// 2d-rounding of a centrally symmetric body C with E0/L ⊆ C ⊆ E0. Each sweep
/// eigendecomposes E_k and probes ±√λ_i v_i / (2√d) in descending eigenvalue
/// order; the first probe outside C is cut with the oracle's certificate via
/// todd_update. Stops when a sweep finds every probe inside, giving
/// E/(2d) ⊆ C ⊆ E. `after_cut` (optional) sees each new E_k.
/// Throws ContractViolation when the sweep cap is exceeded or a certificate
/// does not separate its query.
RoundingResult round_2d(const SeparationOracle& oracle, const Ellipsoid& e0, double big_l,
                        const std::function<void(const Ellipsoid&)>& after_cut = {});

/// Oracle for {x : ‖A x‖_p <= 1}; the certificate is the normalized gradient
/// Aᵀ(sign(Az)∘|Az|^{p-1}) / ‖Az‖_p^{p-1}.
SeparationOracle norm_ball_oracle(const DenseMatrix& a, double p);

/// Oracle for {x : (Σ_i ‖A_i x‖₂^p)^{1/p} <= 1}, A_i consecutive blocks of
/// `block_rows` rows of `stacked`.
SeparationOracle block_norm_oracle(const DenseMatrix& stacked, std::size_t block_rows, double p);

/// Value of the block norm used by block_norm_oracle.
double block_norm(const DenseMatrix& stacked, std::size_t block_rows, double p,
                  std::span<const double> x);

struct StartEllipsoid {
    Ellipsoid ellipsoid;
    double big_l = 1.0;
};

/// Starting ellipsoid for a body {x : ‖(‖A_i x‖₂)_i‖_p <= 1} over `count`
/// blocks, given R from a QR of the stacked A. For p <= 2 this is
/// {‖R x‖ <= 1}; for p > 2 {‖R x‖ <= count^{1/2-1/p}}; L = count^{|1/p-1/2|}.
StartEllipsoid lp_start_ellipsoid(const DenseMatrix& r, std::size_t count, double p);

}  // namespace cauchy_sketch

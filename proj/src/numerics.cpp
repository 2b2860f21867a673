#include "cauchy_sketch/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cauchy_sketch/errors.hpp"
#include "eigen_view.hpp"

namespace cauchy_sketch {

std::size_t next_power_of_two(std::size_t n) noexcept {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fwht_normalized_inplace(std::span<double> v) {
    const std::size_t n = v.size();
    if (!is_power_of_two(n)) {
        throw DimensionError("fwht_normalized: length " + std::to_string(n) +
                             " is not a power of two");
    }
    const auto stage = [&v](std::size_t begin, std::size_t end, std::size_t half) {
        for (std::size_t start = begin; start < end; start += 2 * half) {
            for (std::size_t k = start; k < start + half; ++k) {
                const double a = v[k];
                const double b = v[k + half];
                v[k] = a + b;
                v[k + half] = a - b;
            }
        }
    };
    // stages with half < block stay inside one cache-sized block, so run them
    // block by block before the long-stride stages
    constexpr std::size_t kBlock = std::size_t{1} << 12;
    const std::size_t block = std::min(n, kBlock);
    for (std::size_t begin = 0; begin < n; begin += block)
        for (std::size_t half = 1; half < block; half <<= 1) stage(begin, begin + block, half);
    // long strides: two stages per sweep over memory (radix-4)
    std::size_t half = block;
    for (; 4 * half <= n; half <<= 2) {
        for (std::size_t start = 0; start < n; start += 4 * half) {
            for (std::size_t k = start; k < start + half; ++k) {
                const double a = v[k], b = v[k + half], c = v[k + 2 * half], d = v[k + 3 * half];
                v[k] = (a + b) + (c + d);
                v[k + half] = (a - b) + (c - d);
                v[k + 2 * half] = (a + b) - (c + d);
                v[k + 3 * half] = (a - b) - (c - d);
            }
        }
    }
    if (half < n) stage(0, n, half);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (double& x : v) x *= scale;
}

std::vector<double> fwht_normalized(std::vector<double> v) {
    fwht_normalized_inplace(v);
    return v;
}

namespace {

constexpr double kRankTolerance = 1e-10;

void check_rank(const Eigen::Ref<const detail::RowMatrix>& r) {
    double largest = 0.0;
    for (Eigen::Index j = 0; j < r.cols(); ++j) largest = std::max(largest, std::abs(r(j, j)));
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        if (!(std::abs(r(j, j)) > kRankTolerance * largest)) {
            throw SingularityError("qr_thin: matrix is numerically rank deficient at column " +
                                       std::to_string(j),
                                   static_cast<std::size_t>(j));
        }
    }
}

}  // namespace

QrResult qr_thin(const DenseMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.rows());
    const auto d = static_cast<Eigen::Index>(a.cols());
    if (n < d) throw DimensionError("qr_thin: requires rows >= cols");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(detail::view(a));
    detail::RowMatrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    detail::RowMatrix q = qr.householderQ() * Eigen::MatrixXd::Identity(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        if (r(j, j) < 0.0) {
            r.row(j) *= -1.0;
            q.col(j) *= -1.0;
        }
    }
    check_rank(r);
    return {detail::to_dense(q), detail::to_dense(r)};
}

DenseMatrix qr_r_factor(const DenseMatrix& a) {
    const auto d = static_cast<Eigen::Index>(a.cols());
    if (a.rows() < a.cols()) throw DimensionError("qr_r_factor: requires rows >= cols");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(detail::view(a));
    detail::RowMatrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j)
        if (r(j, j) < 0.0) r.row(j) *= -1.0;
    check_rank(r);
    return detail::to_dense(r);
}

DenseMatrix invert_upper_triangular(const DenseMatrix& r) {
    if (r.rows() != r.cols()) throw DimensionError("invert_upper_triangular: not square");
    const auto d = static_cast<Eigen::Index>(r.rows());
    for (Eigen::Index j = 0; j < d; ++j) {
        if (r(static_cast<std::size_t>(j), static_cast<std::size_t>(j)) == 0.0)
            throw SingularityError("invert_upper_triangular: zero diagonal",
                                   static_cast<std::size_t>(j));
    }
    detail::RowMatrix inv = detail::view(r).triangularView<Eigen::Upper>().solve(
        detail::RowMatrix::Identity(d, d));
    return detail::to_dense(inv);
}

DenseMatrix invert(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("invert: not square");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(detail::view(a));
    if (!lu.isInvertible()) throw SingularityError("invert: singular matrix", 0);
    return detail::to_dense(lu.inverse());
}

double median_abs(std::span<const double> v) {
    if (v.empty()) throw ArgumentError("median_abs: empty input");
    std::vector<double> a(v.size());
    std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
    const std::size_t mid = a.size() / 2;
    std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
    const double upper = a[mid];
    if (a.size() % 2 == 1) return upper;
    const double lower =
        *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw ArgumentError("quantile: empty input");
    std::sort(v.begin(), v.end());
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || v[lo] == v[hi]) return v[lo];
    if (std::isinf(v[hi])) return std::numeric_limits<double>::infinity();
    return v[lo] + frac * (v[hi] - v[lo]);
}

SymmetricEigen symmetric_eigen(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("symmetric_eigen: not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::view(a));
    if (es.info() != Eigen::Success) throw NumericalError("symmetric_eigen: no convergence");
    const auto d = static_cast<std::size_t>(a.rows());
    SymmetricEigen out{std::vector<double>(d), DenseMatrix(d, d)};
    // Eigen returns ascending order
    for (std::size_t k = 0; k < d; ++k) {
        const auto src = static_cast<Eigen::Index>(d - 1 - k);
        out.values[k] = es.eigenvalues()(src);
        for (std::size_t i = 0; i < d; ++i)
            out.vectors(i, k) = es.eigenvectors()(static_cast<Eigen::Index>(i), src);
    }
    return out;
}

DenseMatrix cholesky_lower(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("cholesky_lower: not square");
    Eigen::LLT<Eigen::MatrixXd> llt(detail::view(a));
    if (llt.info() != Eigen::Success) throw NumericalError("cholesky_lower: not positive definite");
    detail::RowMatrix l = llt.matrixL();
    return detail::to_dense(l);
}

double determinant(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("determinant: not square");
    return Eigen::PartialPivLU<Eigen::MatrixXd>(detail::view(a)).determinant();
}

std::vector<double> singular_values(const DenseMatrix& a) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::view(a));
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

std::vector<double> least_squares(const DenseMatrix& a, std::span<const double> b) {
    if (a.rows() != b.size()) throw DimensionError("least_squares: length mismatch");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(detail::view(a));
    Eigen::VectorXd x = qr.solve(detail::ConstVectorMap(b.data(), static_cast<Eigen::Index>(b.size())));
    return {x.data(), x.data() + x.size()};
}

}  // namespace cauchy_sketch

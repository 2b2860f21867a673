#include "cauchy_sketch/matrix.hpp"

#include <cmath>
#include <string>

#include "cauchy_sketch/errors.hpp"
#include "eigen_view.hpp"

namespace cauchy_sketch {

namespace {

void require_dims(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw DimensionError("DenseMatrix: dimensions must be >= 1, got " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    require_dims(rows, cols);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    require_dims(rows, cols);
    if (data_.size() != rows * cols) {
        throw DimensionError("DenseMatrix: data length " + std::to_string(data_.size()) +
                             " != " + std::to_string(rows) + "*" + std::to_string(cols));
    }
    if (!all_finite()) throw ArgumentError("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> v) {
    return DenseMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> v) {
    DenseMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return m;
}

std::vector<double> DenseMatrix::col(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void DenseMatrix::set_col(std::size_t j, std::span<const double> v) {
    if (v.size() != rows_) throw DimensionError("set_col: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::row_block(std::size_t first, std::size_t count) const {
    if (first + count > rows_ || count == 0) throw DimensionError("row_block: out of range");
    DenseMatrix out(count, cols_);
    std::copy(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
              data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_),
              out.data_.begin());
    return out;
}

DenseMatrix DenseMatrix::select_rows(std::span<const std::size_t> indices) const {
    if (indices.empty()) throw DimensionError("select_rows: empty selection");
    DenseMatrix out(indices.size(), cols_);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= rows_) throw DimensionError("select_rows: index out of range");
        auto src = row(indices[k]);
        std::copy(src.begin(), src.end(), out.row(k).begin());
    }
    return out;
}

DenseMatrix DenseMatrix::hcat(const DenseMatrix& other) const {
    if (other.rows_ != rows_) throw DimensionError("hcat: row counts differ");
    DenseMatrix out(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto a = row(i);
        auto b = other.row(i);
        auto dst = out.row(i);
        std::copy(a.begin(), a.end(), dst.begin());
        std::copy(b.begin(), b.end(), dst.begin() + static_cast<std::ptrdiff_t>(cols_));
    }
    return out;
}

bool DenseMatrix::all_finite() const noexcept {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols());
    detail::view(out).noalias() = detail::view(a) * detail::view(b);
    return out;
}

std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw DimensionError("matrix-vector product: length mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("sum: shapes differ");
    DenseMatrix out = a;
    auto o = out.data();
    auto bd = b.data();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] += bd[k];
    return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) { return a + (-1.0) * b; }

std::vector<double> transpose_times(const DenseMatrix& a, std::span<const double> x) {
    if (a.rows() != x.size()) throw DimensionError("transpose_times: length mismatch");
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += r[j] * xi;
    }
    return out;
}

double frobenius_norm(const DenseMatrix& a) { return norm2(a.data()); }

double entrywise_l1(const DenseMatrix& a) { return norm1(a.data()); }

double norm1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double norm2(std::span<const double> v) {
    // scaled accumulation guards against overflow for the large-magnitude test matrices
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) {
        const double y = x / scale;
        s += y * y;
    }
    return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm_p(std::span<const double> v, double p) {
    if (p == 1.0) return norm1(v);
    if (p == 2.0) return norm2(v);
    const double scale = norm_inf(v);
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x) / scale, p);
    return scale * std::pow(s, 1.0 / p);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace cauchy_sketch

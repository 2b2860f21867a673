#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cauchy_sketch {

/// Dense row-major matrix of doubles. Every entry is finite; construction from
/// external data validates this.
class DenseMatrix {
public:
    DenseMatrix() = default;

    /// Zero-filled rows x cols matrix; both dimensions must be >= 1.
    DenseMatrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of row-major `data`; throws DimensionError on a length
    /// mismatch and ArgumentError on a non-finite entry.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix column(std::span<const double> v);
    static DenseMatrix diagonal(std::span<const double> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }
    double& operator()(std::size_t i, std::size_t j) noexcept {
        return data_[i * cols_ + j];
    }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    std::vector<double> col(std::size_t j) const;
    void set_col(std::size_t j, std::span<const double> v);

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    DenseMatrix transpose() const;

    /// Rows [first, first + count).
    DenseMatrix row_block(std::size_t first, std::size_t count) const;
    DenseMatrix select_rows(std::span<const std::size_t> indices) const;

    /// [this | other]; row counts must agree.
    DenseMatrix hcat(const DenseMatrix& other) const;

    bool all_finite() const noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> operator*(const DenseMatrix& a, std::span<const double> x);
DenseMatrix operator*(double s, const DenseMatrix& a);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

/// Aᵀx without forming the transpose.
std::vector<double> transpose_times(const DenseMatrix& a, std::span<const double> x);

double frobenius_norm(const DenseMatrix& a);
/// Entrywise ℓ1 norm Σ|a_ij|.
double entrywise_l1(const DenseMatrix& a);

double norm1(std::span<const double> v);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
/// (Σ|v_i|^p)^{1/p}, p >= 1.
double norm_p(std::span<const double> v, double p);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace cauchy_sketch

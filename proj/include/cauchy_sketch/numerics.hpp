#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cauchy_sketch/matrix.hpp"

namespace cauchy_sketch {

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }
std::size_t next_power_of_two(std::size_t n) noexcept;

/// In-place normalized Walsh–Hadamard transform, v <- H v with H = H_n/√n.
/// Length must be a power of two (DimensionError otherwise).
void fwht_normalized_inplace(std::span<double> v);
std::vector<double> fwht_normalized(std::vector<double> v);

struct QrResult {
    DenseMatrix q;  // n x d, orthonormal columns
    DenseMatrix r;  // d x d, upper triangular, nonnegative diagonal
};

/// Thin Householder QR of an n x d matrix (n >= d). Diagonal of R is made
/// nonnegative so the factorization is unique. Throws SingularityError naming
/// the first column whose |R_jj| <= 1e-10 * max|R_kk|.
QrResult qr_thin(const DenseMatrix& a);

/// R factor only; same conventions and errors as qr_thin.
DenseMatrix qr_r_factor(const DenseMatrix& a);

/// Inverse of an upper-triangular matrix by back substitution.
DenseMatrix invert_upper_triangular(const DenseMatrix& r);

/// General square inverse (partial-pivot LU). Throws SingularityError.
DenseMatrix invert(const DenseMatrix& a);

/// Median of |v_i|; for even length the mean of the two middle order
/// statistics. Throws ArgumentError on empty input.
double median_abs(std::span<const double> v);

/// Quantile with linear interpolation between order statistics (the
/// "type 7" rule). +inf values sort last. Throws ArgumentError on empty input.
double quantile(std::vector<double> v, double q);

struct SymmetricEigen {
    std::vector<double> values;  // descending
    DenseMatrix vectors;         // column k pairs with values[k]
};

/// Eigendecomposition of a symmetric matrix.
SymmetricEigen symmetric_eigen(const DenseMatrix& a);

/// Lower Cholesky factor L with A = L Lᵀ. Throws NumericalError when A is not
/// positive definite.
DenseMatrix cholesky_lower(const DenseMatrix& a);

double determinant(const DenseMatrix& a);

/// Singular values, descending.
std::vector<double> singular_values(const DenseMatrix& a);

/// Least-squares solution of min ||A x - b||_2 (column-pivoted QR).
std::vector<double> least_squares(const DenseMatrix& a, std::span<const double> b);

}  // namespace cauchy_sketch

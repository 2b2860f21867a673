#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cauchy_sketch/errors.hpp"
#include "cauchy_sketch/numerics.hpp"
#include "cauchy_sketch/random.hpp"
#include "helpers.hpp"

using namespace cauchy_sketch;

TEST_CASE("DenseMatrix construction validates shape and entries") {
    CHECK_THROWS_AS(DenseMatrix(0, 3), DimensionError);
    CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
    CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, std::nan("")}), ArgumentError);
    CHECK_THROWS_AS(DenseMatrix(1, 1, {INFINITY}), ArgumentError);
    DenseMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(m(1, 0) == 4);
    CHECK(m.transpose()(2, 1) == 6);
    CHECK(m.row(1)[2] == 6);
}

TEST_CASE("fwht of e1 is the first normalized Hadamard column") {
    auto out = fwht_normalized({1.0, 0.0});
    CHECK(out[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    for (std::size_t n : {1u, 4u, 64u, 1024u}) {
        std::vector<double> e(n, 0.0);
        e[0] = 1.0;
        for (double v : fwht_normalized(e)) CHECK(std::abs(v - 1 / std::sqrt(double(n))) < 1e-14);
    }
}

TEST_CASE("fwht is an isometric involution up to 2^20") {
    for (std::size_t k = 0; k <= 20; ++k) {
        const std::size_t n = std::size_t{1} << k;
        auto v = test_util::gaussian_vec(n, k);
        auto hv = fwht_normalized(v);
        CHECK(std::abs(norm2(hv) - norm2(v)) <= 1e-10 * norm2(v));
        auto back = fwht_normalized(hv);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(back[i] - v[i]));
        CHECK(err <= 1e-10);
    }
}

TEST_CASE("fwht rejects non power of two lengths") {
    CHECK_THROWS_AS(fwht_normalized(std::vector<double>(3, 1.0)), DimensionError);
    CHECK_THROWS_AS(fwht_normalized(std::vector<double>{}), DimensionError);
    std::vector<double> v(6, 1.0);
    CHECK_THROWS_AS(fwht_normalized_inplace(v), DimensionError);
}

TEST_CASE("rng streams are deterministic and distinct") {
    RngStream a(42, 1), b(42, 1), c(42, 2);
    auto xa = sample_cauchy(a, 100);
    auto xb = sample_cauchy(b, 100);
    auto xc = sample_cauchy(c, 100);
    CHECK(xa == xb);
    CHECK(xa != xc);
    RngStream g1(7, 3), g2(7, 3);
    CHECK(sample_gaussian(g1, 50) == sample_gaussian(g2, 50));
}

TEST_CASE("rng stream golden values are stable") {
    // pins the engine, seeding and transforms so cross-platform drift is caught
    RngStream r(1, 1);
    CHECK(r.next_u64() == 4998592052616679661ull);
    CHECK(r.uniform_open() == 0.1851887284042481);
    CHECK(r.cauchy() == doctest::Approx(-1.2431305076522372).epsilon(1e-14));
    RngStream r2(1, 1);
    r2.next_u64();
    CHECK(r2.uniform_open() == 0.1851887284042481);
    RngStream other(1, 2);
    CHECK(other.next_u64() != 4998592052616679661ull);
}

TEST_CASE("cauchy samples: half-Cauchy median and upper quartile") {
    RngStream rng(2024, 1);
    auto x = sample_cauchy(rng, 100000);
    CHECK(median_abs(x) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(quantile(x, 0.75) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("cauchy samples pass a Kolmogorov-Smirnov test at 1e-3") {
    RngStream rng(77, 5);
    auto x = sample_cauchy(rng, 100000);
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = test_util::cauchy_cdf(x[i]);
        dmax = std::max({dmax, (i + 1) / n - f, f - i / n});
    }
    // asymptotic critical value at alpha = 1e-3 is 1.949/sqrt(n)
    CHECK(dmax < 1.949 / std::sqrt(n));
}

TEST_CASE("gaussian samples have unit variance and zero mean") {
    RngStream rng(5, 9);
    auto x = sample_gaussian(rng, 100000);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= x.size() - 1;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("laplace samples have variance two") {
    RngStream rng(5, 10);
    auto x = sample_laplace(rng, 100000);
    double var = 0.0;
    for (double v : x) var += v * v;
    CHECK(var / x.size() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("uniform_index stays in range and covers it") {
    RngStream rng(3, 3);
    std::vector<int> seen(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto k = rng.uniform_index(7);
        REQUIRE(k < 7);
        ++seen[k];
    }
    for (int c : seen) CHECK(c > 800);
}

TEST_CASE("qr_thin of the identity") {
    auto qr = qr_thin(DenseMatrix::identity(3));
    CHECK(qr.q == DenseMatrix::identity(3));
    CHECK(qr.r == DenseMatrix::identity(3));
}

TEST_CASE("qr_thin reconstructs and is orthonormal with nonnegative diagonal") {
    const auto a = test_util::gaussian(50, 5, 1);
    auto qr = qr_thin(a);
    CHECK(frobenius_norm(a - qr.q * qr.r) / frobenius_norm(a) <= 1e-12);
    CHECK(frobenius_norm((qr.q.transpose() * qr.q) - DenseMatrix::identity(5)) <= 1e-10);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(qr.r(j, j) >= 0.0);
        for (std::size_t i = j + 1; i < 5; ++i) CHECK(qr.r(i, j) == 0.0);
    }
}

TEST_CASE("qr_thin flags a duplicated column") {
    auto a = test_util::gaussian(20, 3, 2);
    for (std::size_t i = 0; i < 20; ++i) a(i, 2) = a(i, 0);
    try {
        qr_thin(a);
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(e.column() == 2);
    }
}

TEST_CASE("median_abs conventions") {
    CHECK(median_abs(std::vector<double>{-3, 1, 2}) == 2.0);
    CHECK(median_abs(std::vector<double>{1, -2, 3, -4}) == 2.5);
    CHECK(median_abs(std::vector<double>{5}) == 5.0);
    CHECK_THROWS_AS(median_abs(std::vector<double>{}), ArgumentError);
}

TEST_CASE("quantile interpolates and handles infinities") {
    CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
    CHECK(std::isinf(quantile({1, INFINITY, INFINITY}, 0.5)));
    CHECK(quantile({1, 2, INFINITY}, 0.0) == 1.0);
}

TEST_CASE("triangular and general inverses") {
    auto r = qr_r_factor(test_util::gaussian(10, 4, 3));
    CHECK(frobenius_norm(r * invert_upper_triangular(r) - DenseMatrix::identity(4)) < 1e-10);
    auto a = test_util::gaussian(4, 4, 4);
    CHECK(frobenius_norm(a * invert(a) - DenseMatrix::identity(4)) < 1e-10);
}

TEST_CASE("symmetric eigen, cholesky and determinant agree") {
    auto g = test_util::gaussian(6, 4, 5);
    auto s = g.transpose() * g;
    auto eig = symmetric_eigen(s);
    CHECK(std::is_sorted(eig.values.rbegin(), eig.values.rend()));
    double prod = 1.0;
    for (double v : eig.values) prod *= v;
    CHECK(prod == doctest::Approx(determinant(s)).epsilon(1e-10));
    auto l = cholesky_lower(s);
    CHECK(frobenius_norm(l * l.transpose() - s) < 1e-10 * frobenius_norm(s));
    CHECK_THROWS_AS(cholesky_lower(-1.0 * s), NumericalError);
}

TEST_CASE("norms") {
    std::vector<double> v{3, -4};
    CHECK(norm1(v) == 7);
    CHECK(norm2(v) == 5);
    CHECK(norm_inf(v) == 4);
    CHECK(norm_p(v, 3) == doctest::Approx(std::cbrt(27.0 + 64.0)));
    CHECK(entrywise_l1(DenseMatrix(2, 2, {1, -2, 3, -4})) == 10);
}

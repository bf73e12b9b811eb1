#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "otk/numerics.hpp"
#include "otk/rng.hpp"

using namespace otk;

namespace {

Matrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    Matrix A(m, n);
    NormalStream g(seed);
    for (double& e : A.data) e = g.next();
    return A;
}

Vec random_vec(std::size_t n, std::uint64_t seed) {
    Vec v(n);
    NormalStream g(seed);
    for (double& e : v) e = g.next();
    return v;
}

}  // namespace

TEST_CASE("matvec basic products") {
    CHECK(matvec(Matrix::identity(3), Vec{1, 2, 3}) == Vec{1, 2, 3});

    Matrix A(2, 2);
    A(0, 0) = 1;
    A(0, 1) = 1;
    A(1, 0) = 0;
    A(1, 1) = 2;
    CHECK(matvec(A, Vec{1, 1}) == Vec{2, 2});

    const Matrix Z(2, 2);
    CHECK(matvec(Z, Vec{5, 7}) == Vec{0, 0});

    CHECK_THROWS_AS(matvec(A, Vec{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("matvec_t basic products and transpose oracle") {
    CHECK(matvec_t(Matrix::identity(3), Vec{1, 2, 3}) == Vec{1, 2, 3});

    Matrix A(2, 2);
    A(0, 0) = 1;
    A(1, 0) = 1;
    CHECK(matvec_t(A, Vec{1, 1}) == Vec{2, 0});
    CHECK_THROWS_AS(matvec_t(A, Vec{1}), std::invalid_argument);

    const Matrix B = random_matrix(4, 6, 11);
    const Vec r = random_vec(4, 12);
    Matrix Bt(6, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 6; ++j) Bt(j, i) = B(i, j);
    const Vec via_t = matvec_t(B, r);
    const Vec via_explicit = matvec(Bt, r);
    CHECK(norm2(via_t - via_explicit) <= 1e-12 * norm2(via_explicit));
}

TEST_CASE("least squares on a support") {
    const Matrix I3 = Matrix::identity(3);
    CHECK(least_squares_on_support(I3, Vec{1, 2, 3}, {0, 2}) == Vec{1, 0, 3});
    CHECK(least_squares_on_support(I3, Vec{1, 2, 3}, {}) == Vec{0, 0, 0});

    // Consistent restricted system: the residual must vanish.
    const Matrix A = random_matrix(8, 12, 21);
    Vec x(12, 0.0);
    x[1] = 0.7;
    x[5] = -1.3;
    x[9] = 2.1;
    const Vec y = matvec(A, x);
    const Vec rec = least_squares_on_support(A, y, {1, 5, 9});
    CHECK(norm2(rec - x) <= 1e-8 * norm2(x));

    CHECK_THROWS_AS(least_squares_on_support(A, Vec(3, 0.0), {0}), std::invalid_argument);
    CHECK_THROWS_AS(least_squares_on_support(A, y, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(least_squares_on_support(A, y, {99}), std::invalid_argument);
}

TEST_CASE("least squares stationarity on the support") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix A = random_matrix(9, 14, 100 + seed);
        const Vec y = random_vec(9, 200 + seed);
        const std::vector<std::size_t> support{2, 3, 7, 11};
        const Vec r = least_squares_on_support(A, y, support);
        const Vec grad = matvec_t(A, y - matvec(A, r));
        double on_support = 0.0;
        for (std::size_t j : support) on_support = std::max(on_support, std::fabs(grad[j]));
        CHECK(on_support <= 1e-8 * (1.0 + norm_inf(matvec_t(A, y))));
    }
}

TEST_CASE("rank-deficient support falls back to the regularized solve") {
    Matrix A(4, 3);
    for (std::size_t i = 0; i < 4; ++i) {
        A(i, 0) = static_cast<double>(i) + 1.0;
        A(i, 1) = A(i, 0);  // duplicated column
        A(i, 2) = 1.0;
    }
    bool regularized = false;
    const Vec r = least_squares_on_support(A, Vec{1, 2, 3, 4}, {0, 1}, &regularized);
    CHECK(regularized);
    CHECK(all_finite(r));
}

TEST_CASE("operator norms and adjointness") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Matrix A = random_matrix(5, 7, 300 + seed);
        const Vec x = random_vec(7, 400 + seed);
        const Vec r = random_vec(5, 500 + seed);
        CHECK(norm2(matvec(A, x)) <= frobenius_norm(A) * norm2(x) + 1e-12);
        const double lhs = dot(matvec(A, x), r);
        const double rhs = dot(x, matvec_t(A, r));
        CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("symmetric eigenvalues of a known 2x2") {
    // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
    const std::vector<double> ev = symmetric_eigenvalues({2, 1, 1, 2}, 2);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
}

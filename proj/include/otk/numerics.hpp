#pragma once

// Minimal dense linear algebra: row-major matrices, matrix-vector products,
// norms, and least-squares solves restricted to small column subsets.

#include <cstddef>
#include <vector>

namespace otk {

using Vec = std::vector<double>;

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major, rows*cols entries

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n);
};

bool all_finite(const Vec& v);
bool all_finite(const Matrix& A);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double norm_inf(const Vec& v);
double frobenius_norm(const Matrix& A);

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec scaled(const Vec& v, double s);
Vec hadamard(const Vec& a, const Vec& b);

/// y = A x. Throws on dimension mismatch.
Vec matvec(const Matrix& A, const Vec& x);

/// y = A^T r. Throws on dimension mismatch.
Vec matvec_t(const Matrix& A, const Vec& r);

/// Minimizer of ||y - A x||_2 over vectors supported on `support`, returned
/// as a full-length vector that is zero off the support. Solved via the
/// normal equations of the restricted column submatrix (Cholesky). A
/// rank-deficient restricted Gram matrix falls back to the shifted system
/// (Gram + delta*I) with delta = 1e-10 * trace(Gram)/|support|; when that
/// happens *regularized is set to true.
Vec least_squares_on_support(const Matrix& A, const Vec& y,
                             const std::vector<std::size_t>& support,
                             bool* regularized = nullptr);

/// Eigenvalues of a symmetric n x n matrix (row-major buffer), ascending.
/// Cyclic Jacobi; intended for the small Gram matrices of column subsets.
std::vector<double> symmetric_eigenvalues(std::vector<double> S, std::size_t n);

}  // namespace otk

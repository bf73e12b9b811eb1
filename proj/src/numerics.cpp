#include "otk/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otk {

Matrix Matrix::identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Matrix& A) { return all_finite(A.data); }

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm_inf(const Vec& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

double frobenius_norm(const Matrix& A) {
    double s = 0.0;
    for (double x : A.data) s += x * x;
    return std::sqrt(s);
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec add: length mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec sub: length mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scaled(const Vec& v, double s) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

Vec hadamard(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hadamard: length mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

Vec matvec(const Matrix& A, const Vec& x) {
    if (x.size() != A.cols) throw std::invalid_argument("matvec: x length != cols");
    Vec y(A.rows, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* row = &A.data[i * A.cols];
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vec matvec_t(const Matrix& A, const Vec& r) {
    if (r.size() != A.rows) throw std::invalid_argument("matvec_t: r length != rows");
    Vec y(A.cols, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* row = &A.data[i * A.cols];
        const double ri = r[i];
        for (std::size_t j = 0; j < A.cols; ++j) y[j] += row[j] * ri;
    }
    return y;
}

namespace {

// In-place Cholesky solve of the SPD system G c = b; G is s x s row-major.
// Returns false if a non-positive pivot is met.
bool cholesky_solve(std::vector<double>& G, std::vector<double>& b, std::size_t s) {
    for (std::size_t j = 0; j < s; ++j) {
        double d = G[j * s + j];
        for (std::size_t t = 0; t < j; ++t) d -= G[j * s + t] * G[j * s + t];
        if (!(d > 0.0)) return false;
        const double l = std::sqrt(d);
        G[j * s + j] = l;
        for (std::size_t i = j + 1; i < s; ++i) {
            double v = G[i * s + j];
            for (std::size_t t = 0; t < j; ++t) v -= G[i * s + t] * G[j * s + t];
            G[i * s + j] = v / l;
        }
    }
    // forward substitution L z = b
    for (std::size_t i = 0; i < s; ++i) {
        double v = b[i];
        for (std::size_t t = 0; t < i; ++t) v -= G[i * s + t] * b[t];
        b[i] = v / G[i * s + i];
    }
    // back substitution L^T c = z
    for (std::size_t ii = s; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t t = ii + 1; t < s; ++t) v -= G[t * s + ii] * b[t];
        b[ii] = v / G[ii * s + ii];
    }
    return true;
}

}  // namespace

Vec least_squares_on_support(const Matrix& A, const Vec& y,
                             const std::vector<std::size_t>& support,
                             bool* regularized) {
    if (y.size() != A.rows) throw std::invalid_argument("least_squares_on_support: y length != rows");
    if (regularized) *regularized = false;
    Vec x(A.cols, 0.0);
    const std::size_t s = support.size();
    if (s == 0) return x;
    for (std::size_t a = 0; a < s; ++a) {
        if (support[a] >= A.cols)
            throw std::invalid_argument("least_squares_on_support: index out of range");
        for (std::size_t b = a + 1; b < s; ++b)
            if (support[a] == support[b])
                throw std::invalid_argument("least_squares_on_support: duplicate index");
    }

    // Restricted Gram matrix and right-hand side.
    std::vector<double> G(s * s, 0.0), rhs(s, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* row = &A.data[i * A.cols];
        for (std::size_t a = 0; a < s; ++a) {
            const double va = row[support[a]];
            rhs[a] += va * y[i];
            for (std::size_t b = a; b < s; ++b) G[a * s + b] += va * row[support[b]];
        }
    }
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t b = 0; b < a; ++b) G[a * s + b] = G[b * s + a];

    std::vector<double> Gf = G, bf = rhs;
    if (!cholesky_solve(Gf, bf, s)) {
        double tr = 0.0;
        for (std::size_t a = 0; a < s; ++a) tr += G[a * s + a];
        const double delta = 1e-10 * tr / static_cast<double>(s);
        Gf = G;
        bf = rhs;
        for (std::size_t a = 0; a < s; ++a) Gf[a * s + a] += delta;
        if (regularized) *regularized = true;
        if (!cholesky_solve(Gf, bf, s)) {
            // All-zero restricted columns: every coefficient choice gives the
            // same residual, return the zero completion.
            return x;
        }
    }
    for (std::size_t a = 0; a < s; ++a) x[support[a]] = bf[a];
    return x;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> S, std::size_t n) {
    if (S.size() != n * n) throw std::invalid_argument("symmetric_eigenvalues: bad buffer size");
    auto off = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += S[i * n + j] * S[i * n + j];
        return s;
    };
    for (int sweep = 0; sweep < 100 && off() > 1e-28; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = S[p * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                const double app = S[p * n + p], aqq = S[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = S[i * n + p], aiq = S[i * n + q];
                    S[i * n + p] = c * aip - s * aiq;
                    S[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = S[p * n + j], aqj = S[q * n + j];
                    S[p * n + j] = c * apj - s * aqj;
                    S[q * n + j] = s * apj + c * aqj;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = S[i * n + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace otk

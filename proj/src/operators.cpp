#include "otk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace otk {

Vec hard_threshold(const Vec& z, std::size_t k) {
    const std::size_t n = z.size();
    if (k > n) throw std::invalid_argument("hard_threshold: k > length");
    Vec out(n, 0.0);
    if (k == 0) return out;
    if (k == n) return z;

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto by_magnitude = [&](std::size_t a, std::size_t b) {
        const double ma = std::fabs(z[a]), mb = std::fabs(z[b]);
        if (ma != mb) return ma > mb;
        return a < b;  // lower index wins ties
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k) - 1, idx.end(),
                     by_magnitude);
    for (std::size_t t = 0; t < k; ++t) out[idx[t]] = z[idx[t]];
    return out;
}

namespace {

double capped_sum(const Vec& v, double tau) {
    double s = 0.0;
    for (double vi : v) s += std::clamp(vi - tau, 0.0, 1.0);
    return s;
}

}  // namespace

Vec project_capped_simplex(const Vec& v, std::size_t k, double* tau_out) {
    const std::size_t n = v.size();
    if (k > n) throw std::invalid_argument("project_capped_simplex: k > length");
    if (k == 0) {
        if (tau_out) *tau_out = n ? *std::max_element(v.begin(), v.end()) : 0.0;
        return Vec(n, 0.0);
    }
    if (k == n) {
        if (tau_out) *tau_out = *std::min_element(v.begin(), v.end()) - 1.0;
        return Vec(n, 1.0);
    }

    const double kd = static_cast<double>(k);
    double lo = *std::min_element(v.begin(), v.end()) - 1.0;  // sum = n >= k
    double hi = *std::max_element(v.begin(), v.end());        // sum = 0 <= k
    const double tol = 1e-10 * std::max(1.0, kd);

    double tau = hi, s = 0.0;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        tau = 0.5 * (lo + hi);
        s = capped_sum(v, tau);
        if (std::fabs(s - kd) <= tol) {
            converged = true;
            break;
        }
        if (s > kd)
            lo = tau;
        else
            hi = tau;
    }
    if (!converged) throw std::runtime_error("project_capped_simplex: bisection did not converge");

    // Polish tau to the exact KKT multiplier for the active sets the
    // bisection landed on: sum_{interior}(v_i - tau) + |upper| = k.
    double interior_sum = 0.0, upper = 0.0, interior = 0.0;
    for (double vi : v) {
        const double slack = vi - tau;
        if (slack >= 1.0) {
            upper += 1.0;
        } else if (slack > 0.0) {
            interior_sum += vi;
            interior += 1.0;
        }
    }
    if (interior > 0.0) {
        const double polished = (interior_sum + upper - kd) / interior;
        if (std::fabs(capped_sum(v, polished) - kd) <= tol) tau = polished;
    }

    if (tau_out) *tau_out = tau;
    Vec w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::clamp(v[i] - tau, 0.0, 1.0);
    return w;
}

std::vector<std::size_t> support_of(const Vec& x) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::fabs(x[i]) > 0.0) s.push_back(i);
    return s;
}

}  // namespace otk

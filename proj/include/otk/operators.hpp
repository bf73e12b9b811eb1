#pragma once

// Thresholding and projection primitives shared by the recovery algorithms.

#include "otk/numerics.hpp"

namespace otk {

/// Keeps the k largest-magnitude entries of z and zeroes the rest.
/// Ties in |z_i| are broken by keeping the lower index. k = 0 returns the
/// zero vector; k > length(z) throws.
Vec hard_threshold(const Vec& z, std::size_t k);

/// Euclidean projection onto the capped simplex {w : 0 <= w <= 1, sum w = k}.
/// Uses the KKT form w_i = clamp(v_i - tau, 0, 1) with tau found by bisection
/// of the monotone sum on [min(v) - 1, max(v)], stopping when
/// |sum w(tau) - k| <= 1e-10 * max(1, k). If tau_out is given it receives the
/// multiplier. k > length(v) throws (the feasible set is empty).
Vec project_capped_simplex(const Vec& v, std::size_t k, double* tau_out = nullptr);

/// Indices i with |x_i| > 0, ascending.
std::vector<std::size_t> support_of(const Vec& x);

}  // namespace otk

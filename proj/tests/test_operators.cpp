#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <functional>

#include "otk/numerics.hpp"
#include "otk/operators.hpp"
#include "otk/rng.hpp"

using namespace otk;

namespace {

Vec random_vec(std::size_t n, std::uint64_t seed) {
    Vec v(n);
    NormalStream g(seed);
    for (double& e : v) e = g.next();
    return v;
}

// Distance from v to the best point of a uniform grid over the capped
// simplex; `step` divides 1 exactly.
double grid_oracle_distance(const Vec& v, std::size_t k, double step) {
    const std::size_t levels = static_cast<std::size_t>(std::lround(1.0 / step));
    const std::size_t total = k * levels;  // coordinates sum to k in units of `step`
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> units(v.size(), 0);
    std::function<void(std::size_t, std::size_t, double)> rec =
        [&](std::size_t i, std::size_t remaining, double dist2) {
            if (dist2 >= best) return;
            if (i + 1 == v.size()) {
                if (remaining > levels) return;
                const double w = static_cast<double>(remaining) * step;
                const double d = w - v[i];
                const double total_d = dist2 + d * d;
                best = std::min(best, total_d);
                return;
            }
            const std::size_t cap = std::min(levels, remaining);
            for (std::size_t u = 0; u <= cap; ++u) {
                const double w = static_cast<double>(u) * step;
                const double d = w - v[i];
                rec(i + 1, remaining - u, dist2 + d * d);
            }
        };
    rec(0, total, 0.0);
    return std::sqrt(best);
}

}  // namespace

TEST_CASE("hard threshold keeps the k largest magnitudes") {
    CHECK(hard_threshold(Vec{3, 1, 2}, 2) == Vec{3, 0, 2});
    CHECK(hard_threshold(Vec{-5, 4, 4}, 1) == Vec{-5, 0, 0});
    CHECK(hard_threshold(Vec{1, 1, 1}, 2) == Vec{1, 1, 0});  // lowest-index tie break
    CHECK(hard_threshold(Vec{1, 2}, 0) == Vec{0, 0});
    CHECK_THROWS_AS(hard_threshold(Vec{1, 2}, 3), std::invalid_argument);
}

TEST_CASE("hard threshold idempotence and support size") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Vec z = random_vec(9, 600 + seed);
        for (std::size_t k : {0, 1, 3, 9}) {
            const Vec t = hard_threshold(z, k);
            CHECK(hard_threshold(t, k) == t);
            CHECK(support_of(t).size() <= k);
        }
    }
}

TEST_CASE("hard threshold beats every fixed support") {
    // Enumerate all supports of size k and compare squared distances.
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::size_t n = 7, k = 3;
        const Vec z = random_vec(n, 700 + seed);
        const Vec t = hard_threshold(z, k);
        const double d_threshold = norm2(z - t);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c) {
                    Vec zs(n, 0.0);
                    zs[a] = z[a];
                    zs[b] = z[b];
                    zs[c] = z[c];
                    CHECK(d_threshold <= norm2(z - zs) + 1e-12);
                }
    }
}

TEST_CASE("capped simplex projection examples") {
    CHECK(project_capped_simplex(Vec{0.5, 0.5}, 1) == Vec{0.5, 0.5});

    const Vec w1 = project_capped_simplex(Vec{2, 0, 0}, 1);
    CHECK(w1[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(w1[1] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(w1[2] == doctest::Approx(0.0).epsilon(1e-9));

    // All coordinates interior: tau = (sum v - k) / n = -1/15.
    const Vec w2 = project_capped_simplex(Vec{0.9, 0.8, 0.1}, 2);
    CHECK(w2[0] == doctest::Approx(0.9667).epsilon(2e-4));
    CHECK(w2[1] == doctest::Approx(0.8667).epsilon(2e-4));
    CHECK(w2[2] == doctest::Approx(0.1667).epsilon(2e-4));

    CHECK(project_capped_simplex(Vec{3, -1}, 0) == Vec{0, 0});
    CHECK(project_capped_simplex(Vec{3, -1}, 2) == Vec{1, 1});
    CHECK_THROWS_AS(project_capped_simplex(Vec{1, 2}, 3), std::invalid_argument);
}

TEST_CASE("projection feasibility, idempotence, and KKT") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 8;
        const Vec v = scaled(random_vec(n, 800 + seed), 2.0);
        const std::size_t k = 1 + static_cast<std::size_t>(seed % 6);
        double tau = 0.0;
        const Vec w = project_capped_simplex(v, k, &tau);

        double sum = 0.0;
        for (double wi : w) {
            CHECK(wi >= 0.0);
            CHECK(wi <= 1.0);
            sum += wi;
        }
        CHECK(std::fabs(sum - static_cast<double>(k)) <= 1e-9);

        // Complementary slackness: each coordinate is clamped consistently
        // with the multiplier.
        for (std::size_t i = 0; i < n; ++i) {
            const double slack = v[i] - tau;
            if (w[i] == 0.0)
                CHECK(slack <= 1e-9);
            else if (w[i] == 1.0)
                CHECK(slack >= 1.0 - 1e-9);
            else
                CHECK(std::fabs(w[i] - slack) <= 1e-9);
        }

        const Vec w_again = project_capped_simplex(w, k);
        CHECK(norm2(w_again - w) <= 1e-9);
    }
}

TEST_CASE("projection matches a fine grid oracle") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const std::size_t n = 6, k = 2;
        const Vec v = scaled(random_vec(n, 900 + seed), 1.5);
        const Vec w = project_capped_simplex(v, k);
        CHECK(norm2(w - v) <= grid_oracle_distance(v, k, 0.05) + 1e-6);
    }
}

TEST_CASE("support_of") {
    CHECK(support_of(Vec{0, 3, 0, -1}) == std::vector<std::size_t>{1, 3});
    CHECK(support_of(Vec{0, 0}).empty());
}

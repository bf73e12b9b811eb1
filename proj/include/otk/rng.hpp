#pragma once

// Deterministic, splittable random streams. All sampling in the project goes
// through these so that a (seed -> values) contract holds across platforms:
//   - mix64 / hash64: the SplitMix64 finalizer, chained over input words.
//   - SplitMix64: the SplitMix64 sequence generator; uniform doubles come
//     from the top 53 bits as (x >> 11) * 2^-53.
//   - NormalStream: Box-Muller on consecutive uniforms; the first uniform is
//     shifted into (0, 1] so the log never sees zero. Pairs are consumed in
//     (cos, sin) order with the sin value cached.

#include <cstdint>
#include <initializer_list>

namespace otk {

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z += kGolden64;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Order-dependent combine of 64-bit words into one seed.
inline std::uint64_t hash64(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0;
    for (std::uint64_t w : words) h = mix64(h ^ w);
    return h;
}

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden64;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound > 0. Plain modulo reduction,
    /// documented as part of the stream contract (bias is negligible for the
    /// small bounds used here).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

    /// Uniform sign in {-1.0, +1.0} from the top bit.
    double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  private:
    std::uint64_t state_;
};

/// Standard normal stream (Box-Muller over SplitMix64).
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

    double next();

  private:
    SplitMix64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace otk

#pragma once

// Deterministic, platform-independent random number generation.
//
// A splitmix64 core drives everything.  Streams are splittable: a child
// generator derived via split(k) depends only on the parent's construction
// seed and on k, never on how many values the parent has already produced.
// That lets independent pipeline stages (e.g. the numerator and denominator
// of a noisy ratio estimate) consume randomness without coupling their
// draw counts, while keeping every output byte-reproducible for a given
// top-level seed.
//
// std::mt19937 + std::normal_distribution are avoided on purpose: the
// standard distributions are implementation-defined, which would break
// cross-platform reproducibility of frozen test values.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qburgers {

/// One splitmix64 step: advances `state` and returns the next 64-bit word.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Splittable deterministic RNG with uniform and Gaussian output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    /// Next raw 64-bit word.
    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform double strictly inside (0, 1).
    double uniform01() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Standard normal deviate (Box-Muller; pairs cached, no rejection,
    /// so the number of raw draws per call is fixed).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Child generator for stream `k`.  Depends only on (construction
    /// seed, k); independent of this generator's consumption so far.
    Rng split(std::uint64_t k) const {
        // Feed (seed, k) through two mixing rounds so that nearby stream
        // indices land in unrelated states.
        std::uint64_t s = seed_ ^ (0x6a09e667f3bcc909ULL + k * 0x9e3779b97f4a7c15ULL);
        splitmix64_next(s);
        return Rng(splitmix64_next(s));
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace qburgers

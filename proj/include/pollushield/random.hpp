// Seeded random streams. Every peer owns an independent substream derived from
// the scenario seed, so results never depend on evaluation order across peers.

#pragma once

#include <cstdint>
#include <random>

namespace pollushield {

/// SplitMix64 finalizer; used to derive substream seeds and keyed draws.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t root, Keys... keys) {
    std::uint64_t h = mix64(root);
    ((h = mix64(h ^ static_cast<std::uint64_t>(keys))), ...);
    return h;
}

/// Maps 64 random bits to [0,1) using the top 53 bits. Portable across standard
/// libraries, unlike std::uniform_real_distribution.
constexpr double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return unit_from_bits(engine_()); }

    /// True with probability p. p <= 0 and p >= 1 consume no randomness.
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    double uniform(double lo, double hi) { return lo == hi ? lo : lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

private:
    std::mt19937_64 engine_;
};

/// Stateless draw keyed by its context: the same key always yields the same
/// value, and drawing never perturbs any stream.
struct KeyedDraw {
    std::uint64_t key = 0;

    double uniform() const { return unit_from_bits(mix64(key)); }
    bool bernoulli(double p) const {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }
};

}  // namespace pollushield

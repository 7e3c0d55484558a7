#pragma once

#include <cstdint>
#include <random>

namespace twhm {

// SplitMix64 finalizer, used as a bijective 64-bit mixer.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream: one word per (seed, a, b, c) tuple. Evaluation is
// stateless, so draws do not depend on iteration or thread order.
inline constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a,
                                        std::uint64_t b, std::uint64_t c) noexcept {
    std::uint64_t h = mix64(seed ^ 0x2545f4914f6cdd1dULL);
    h = mix64(h ^ (a + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (b + 0xc2b2ae3d27d4eb4fULL));
    h = mix64(h ^ (c + 0x165667b19e3779f9ULL));
    return h;
}

inline constexpr double to_unit_double(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53; // [0,1)
}

// U[0,1) for pair (i,j) at transition t under the given seed.
inline double pair_step_uniform(std::uint64_t seed, int i, int j, std::int64_t t) noexcept {
    return to_unit_double(hash_key(seed, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(j),
                                   static_cast<std::uint64_t>(t)));
}

// Derive an independent stream seed, e.g. one per benchmark replication.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(mix64(seed) ^ tag);
}

// Sequential seeded generator for everything that is not the edge process
// (parameter draws, k-means restarts). mt19937_64 output is standardized,
// and uniforms are built from raw bits so results are portable.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    double uniform() { return to_unit_double(eng_()); }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Unbiased integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace twhm

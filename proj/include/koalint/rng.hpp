#pragma once

// Deterministic, stdlib-independent RNG.  Every verification sweep derives one
// independent stream per sample index from the master seed, so results are
// identical regardless of thread count or scheduling.

#include <cstdint>

#include "koalint/phase.hpp"

namespace koalint {

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t x = (state += 0x9E3779B97F4A7C15ULL);
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    double next_unit() {  // [0,1), 53 random bits
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * next_unit(); }

    bool next_bool() { return (next() & 1ULL) != 0; }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 s(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    return s.next();
}

// Verification sampling box: q_i uniform in +/-[0.5, 2.0] (random sign),
// p_i uniform in [-2, 2].  Keeps clear of q_i = 0 and of exp-overflow for
// the deformation strengths in use.
inline PhasePoint sample_box_point(SplitMix64& rng, int n) {
    std::vector<double> q(n), p(n);
    for (int i = 0; i < n; ++i) {
        double mag = rng.uniform(0.5, 2.0);
        q[i] = rng.next_bool() ? mag : -mag;
    }
    for (int i = 0; i < n; ++i) p[i] = rng.uniform(-2.0, 2.0);
    return PhasePoint(std::move(q), std::move(p));
}

}  // namespace koalint

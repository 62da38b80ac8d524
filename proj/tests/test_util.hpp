#pragma once

#include <cstdint>
#include <vector>

// Deterministic generator for property-style sampling.
struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}
    double next01() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) / 9007199254740992.0;
    }
    double in(double lo, double hi) { return lo + (hi - lo) * next01(); }
};

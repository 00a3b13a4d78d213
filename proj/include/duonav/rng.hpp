#pragma once

#include <cstdint>
#include <random>

namespace duonav {

// Stable mixing for deriving independent stream seeds from (base, index).
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 0x51ed270b7a2cULL));
}

struct Rng {
    std::mt19937_64 engine;

    explicit Rng(uint64_t seed = 0) : engine(seed) {}

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(engine);
    }
    int uniform_int(int lo, int hi) {  // inclusive
        std::uniform_int_distribution<int> d(lo, hi);
        return d(engine);
    }
    double normal() {
        std::normal_distribution<double> d(0.0, 1.0);
        return d(engine);
    }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
};

}  // namespace duonav

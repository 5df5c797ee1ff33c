#pragma once

#include <cstdint>

#include "mcmono/realvec.hpp"

namespace mcm {

// SplitMix64. Self-contained so that seeded sweeps produce identical
// streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    RealVec vec(int dim, double lo, double hi) {
        RealVec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    // Uniform direction on the unit sphere (rejection from the cube).
    RealVec unitVec(int dim) {
        for (;;) {
            RealVec v = vec(dim, -1.0, 1.0);
            double n2 = v.normSq();
            if (n2 > 1e-6 && n2 <= 1.0) return (1.0 / std::sqrt(n2)) * v;
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace mcm

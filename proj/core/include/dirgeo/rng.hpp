#pragma once

#include <cstdint>
#include <cmath>

#include "dirgeo/vec.hpp"

namespace dirgeo {

// splitmix64 stream. Self-contained so that sampled values are identical
// across platforms and standard libraries.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform direction on S^{n-1}
    Vec direction(int dim) {
        if (dim == 1) return Vec::axis(1, 0, uniform() < 0.5 ? -1.0 : 1.0);
        if (dim == 2) {
            double t = uniform(0.0, 2.0 * M_PI);
            return Vec(std::cos(t), std::sin(t));
        }
        double z = uniform(-1.0, 1.0);
        double t = uniform(0.0, 2.0 * M_PI);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return Vec(r * std::cos(t), r * std::sin(t), z);
    }

    // derived stream, stable under reordering of sibling draws
    Rng split(std::uint64_t salt) const {
        Rng r(state ^ (0x9e3779b97f4a7c15ULL * (salt + 0x632be59bd9b4e019ULL)));
        r.next_u64();
        return r;
    }
};

}  // namespace dirgeo

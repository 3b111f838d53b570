#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dirgeo {

// Geometric ladder of probe radii r_k = r0 * gamma^k with relative shell
// half-width w: shell k is [r_k (1-w), r_k (1+w)].
struct ScaleSchedule {
    double r0 = 0.5;
    double gamma = 0.5;
    int count = 8;
    double shell_width = 0.25;

    ScaleSchedule() = default;
    ScaleSchedule(double r0_, double gamma_, int count_, double w_ = 0.25)
        : r0(r0_), gamma(gamma_), count(count_), shell_width(w_) {
        validate();
    }

    void validate() const {
        if (!(r0 > 0.0)) throw std::invalid_argument("ScaleSchedule: r0 must be > 0");
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("ScaleSchedule: gamma must be in (0,1)");
        if (count < 2) throw std::invalid_argument("ScaleSchedule: count must be >= 2");
        if (!(shell_width > 0.0 && shell_width < 1.0))
            throw std::invalid_argument("ScaleSchedule: shell_width must be in (0,1)");
    }

    double scale(int k) const { return r0 * std::pow(gamma, k); }

    std::vector<double> scales() const {
        std::vector<double> s(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k) s[static_cast<std::size_t>(k)] = scale(k);
        return s;
    }

    double finest() const { return scale(count - 1); }

    ScaleSchedule rescaled(double factor) const {
        return ScaleSchedule(r0 * factor, gamma, count, shell_width);
    }

    ScaleSchedule with_count(int k) const { return ScaleSchedule(r0, gamma, k, shell_width); }
};

}  // namespace dirgeo

#pragma once

#include <vector>

#include "dirgeo/direction.hpp"
#include "dirgeo/map.hpp"
#include "dirgeo/schedule.hpp"
#include "dirgeo/vec.hpp"

namespace dirgeo {

// w -> (h(p + t w) - h(p)) / t with inherited Lipschitz estimates.
LipschitzMap rescaled_map(const LipschitzMap& h, const Point& p, double t);

// Deterministic probe grid: uniform angles for n=2, Fibonacci sphere for n=3.
// density is the point count per great circle (angular spacing 2 pi / density).
std::vector<Direction> probe_grid(int dim, int density);

// Rescaled-map samples along the scale ladder; a finite-scale stand-in for an
// Arzela-Ascoli differential of h at p.
struct AADerivativeEstimate {
    Point base_point;
    std::vector<double> scales;
    std::vector<Direction> grid;
    std::vector<std::vector<Vec>> samples;  // [scale][grid index]
    std::vector<double> cauchy_deviation;   // sup over grid between consecutive scales
    bool converged = false;
    double lip_estimate = 1.0;
    // finest-scale rescaled map, for off-grid queries
    std::function<Vec(const Vec&)> final_map;

    const std::vector<Vec>& limit_samples() const { return samples.back(); }
    // image of u under the final rescaled map
    Vec apply(const Direction& u) const { return final_map(u.u); }
};

AADerivativeEstimate aa_derivative(const LipschitzMap& h, const Point& p,
                                   const ScaleSchedule& schedule, int grid_density = 200);

struct RadialLimitReport {
    bool converged = false;
    Vec limit;
    std::vector<double> deviations;
};

// Convergence of h(t v)/t along the schedule.
RadialLimitReport radial_limit_check(const LipschitzMap& h, const Direction& v,
                                     const ScaleSchedule& schedule);

}  // namespace dirgeo

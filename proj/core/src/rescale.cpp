#include "dirgeo/rescale.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dirgeo {

LipschitzMap rescaled_map(const LipschitzMap& h, const Point& p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("rescaled_map: t must be > 0");
    LipschitzMap m;
    m.dim = h.dim;
    m.name = h.name + "@" + std::to_string(t);
    const Vec hp = h.forward(p);
    auto fwd = h.forward;
    m.forward = [fwd, p, hp, t](const Vec& w) { return (fwd(p + w * t) - hp) / t; };
    if (h.has_inverse()) {
        auto bwd = h.inverse;
        m.inverse = [bwd, p, hp, t](const Vec& w) { return (bwd(hp + w * t) - p) / t; };
    }
    m.lip_estimate = h.lip_estimate;
    m.inv_lip_estimate = h.inv_lip_estimate;
    m.linear = h.linear;
    return m;
}

std::vector<Direction> probe_grid(int dim, int density) {
    std::vector<Direction> grid;
    if (dim == 2) {
        grid.reserve(static_cast<std::size_t>(density));
        for (int i = 0; i < density; ++i) {
            double a = 2.0 * M_PI * i / density;
            grid.push_back(Direction(Vec(std::cos(a), std::sin(a))));
        }
        return grid;
    }
    // Fibonacci sphere with neighbor spacing close to 2 pi / density
    int n = std::max(16, static_cast<int>(std::lround(density * density / M_PI)));
    grid.reserve(static_cast<std::size_t>(n));
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - (2.0 * i + 1.0) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double a = ga * i;
        grid.push_back(Direction(Vec(r * std::cos(a), r * std::sin(a), z)));
    }
    return grid;
}

AADerivativeEstimate aa_derivative(const LipschitzMap& h, const Point& p,
                                   const ScaleSchedule& schedule, int grid_density) {
    if (schedule.count < 5)
        throw std::invalid_argument("aa_derivative: schedule.count must be >= 5");
    AADerivativeEstimate est;
    est.base_point = p;
    est.grid = probe_grid(h.dim, grid_density);
    est.lip_estimate = h.lip_estimate;
    const Vec hp = h.forward(p);
    for (int k = 0; k < schedule.count; ++k) {
        double t = schedule.scale(k);
        std::vector<Vec> row;
        row.reserve(est.grid.size());
        for (const auto& w : est.grid) row.push_back((h.forward(p + w.u * t) - hp) / t);
        est.samples.push_back(std::move(row));
        est.scales.push_back(t);
    }
    for (std::size_t k = 0; k + 1 < est.samples.size(); ++k) {
        double dev = 0.0;
        for (std::size_t g = 0; g < est.grid.size(); ++g)
            dev = std::max(dev, distance(est.samples[k + 1][g], est.samples[k][g]));
        est.cauchy_deviation.push_back(dev);
    }
    est.converged = true;
    const std::size_t m = est.cauchy_deviation.size();
    for (std::size_t i = m >= 3 ? m - 3 : 0; i < m; ++i)
        if (est.cauchy_deviation[i] > 0.02 * h.lip_estimate) est.converged = false;
    const double tk = schedule.finest();
    auto fwd = h.forward;
    est.final_map = [fwd, p, hp, tk](const Vec& w) { return (fwd(p + w * tk) - hp) / tk; };
    return est;
}

RadialLimitReport radial_limit_check(const LipschitzMap& h, const Direction& v,
                                     const ScaleSchedule& schedule) {
    RadialLimitReport rep;
    std::vector<Vec> values;
    for (int k = 0; k < schedule.count; ++k) {
        double t = schedule.scale(k);
        values.push_back(h.forward(v.u * t) / t);
    }
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        rep.deviations.push_back(distance(values[k + 1], values[k]));
    rep.converged = true;
    const std::size_t m = rep.deviations.size();
    for (std::size_t i = m >= 3 ? m - 3 : 0; i < m; ++i)
        if (rep.deviations[i] > 0.02 * h.lip_estimate) rep.converged = false;
    rep.limit = values.back();
    return rep;
}

}  // namespace dirgeo

#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "dirgeo/vec.hpp"

namespace dirgeo {

// Unit vector on S^{n-1}. Construction normalizes; unit_checked() validates
// an already-normalized input to 1e-9 instead.
struct Direction {
    Vec u;

    Direction() = default;
    explicit Direction(const Vec& v) : u(v.normalized()) {}

    static Direction unit_checked(const Vec& v) {
        if (std::fabs(v.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("direction is not unit length: " + v.str());
        Direction d;
        d.u = v;
        return d;
    }

    int dim() const { return u.n; }
    double angle_to(const Direction& o) const { return angle_between(u, o.u); }
    Direction antipode() const {
        Direction d;
        d.u = -u;
        return d;
    }
};

// Finite alpha-resolution approximation of a closed subset of the sphere.
// Members are pairwise separated by at least alpha/2; empty is allowed.
struct DirectionSet {
    std::vector<Direction> members;
    double resolution_alpha = 0.035;

    bool empty() const { return members.empty(); }
    std::size_t size() const { return members.size(); }

    // min angle from d to the set; +inf when empty
    double min_angle_to(const Direction& d) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& m : members) best = std::min(best, d.angle_to(m));
        return best;
    }
};

// Greedy in-order representative selection: keeps an input direction iff it
// is farther than alpha from every previously kept one. Output members are a
// subset of the input and every input lies within alpha of some member.
inline DirectionSet dedup_directions(const std::vector<Direction>& raw, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("dedup_directions: alpha must be > 0");
    DirectionSet out;
    out.resolution_alpha = alpha;
    for (const auto& d : raw) {
        if (std::fabs(d.u.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("dedup_directions: non-unit input " + d.u.str());
        if (out.min_angle_to(d) > alpha) out.members.push_back(d);
    }
    return out;
}

// One-sided excess: sup over s in S of the angle to the nearest member of T.
// 0 when S is empty, +inf when S is non-empty and T is empty.
inline double direction_excess(const DirectionSet& s, const DirectionSet& t) {
    if (s.empty()) return 0.0;
    if (t.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& d : s.members) worst = std::max(worst, t.min_angle_to(d));
    return worst;
}

// Symmetric Hausdorff angle between direction sets. Two empty sets are at
// distance 0; exactly one empty set gives the +inf sentinel.
inline double hausdorff_angle(const DirectionSet& a, const DirectionSet& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(direction_excess(a, b), direction_excess(b, a));
}

}  // namespace dirgeo

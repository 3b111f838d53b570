#pragma once

#include "dirgeo/direction.hpp"
#include "dirgeo/vec.hpp"

namespace dirgeo {

// Vertex plus spherical link with an angular membership tolerance. Houses
// estimated tangent cones and bundle cones.
struct ConeGerm {
    Point vertex;
    DirectionSet link;
    double tolerance = 0.07;  // radians
};

// x belongs iff it is the vertex or its direction from the vertex lies within
// the tolerance of the link.
inline bool cone_membership(const ConeGerm& cone, const Point& x) {
    Vec d = x - cone.vertex;
    double r = d.norm();
    if (r == 0.0) return true;
    if (cone.link.empty()) return false;
    return cone.link.min_angle_to(Direction(d)) <= cone.tolerance;
}

}  // namespace dirgeo

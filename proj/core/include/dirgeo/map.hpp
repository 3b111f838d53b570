#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dirgeo/vec.hpp"

namespace dirgeo {

// Bi-Lipschitz germ map h : (R^n, 0) -> (R^n, 0). The Lipschitz constants are
// sampled two-point bounds, not certificates. forward(0) is defined explicitly
// for formulas with removable singularities at the origin.
struct LipschitzMap {
    int dim = 2;
    std::string name = "identity";
    std::function<Vec(const Vec&)> forward;
    std::function<Vec(const Vec&)> inverse;  // may be empty
    double lip_estimate = 1.0;
    double inv_lip_estimate = 1.0;
    bool fixes_origin = true;
    bool linear = false;

    Vec operator()(const Vec& x) const { return forward(x); }
    bool has_inverse() const { return static_cast<bool>(inverse); }

    LipschitzMap inverted() const;
};

// Sampled two-point Lipschitz bounds over pairs drawn at log-uniform radii in
// (1e-4, 1]. Returns {max ratio, max inverse ratio}.
std::pair<double, double> estimate_lipschitz(const std::function<Vec(const Vec&)>& f, int dim,
                                             int pairs = 2000, std::uint64_t seed = 0x11CE);

LipschitzMap identity_map(int dim);
LipschitzMap rotation_map(int dim, double theta_rad);  // about the z-axis when dim == 3
LipschitzMap shear_abs_map(int dim);                   // (x, y, .) -> (x, y + |x|, .)
LipschitzMap shear_linear_map(int dim);                // (x, y, .) -> (x, y + x, .)
LipschitzMap oscillator_map();                         // 2D, h(x,y) = (2x + r^2 sin(1/r), y)
LipschitzMap log_spiral_map(double epsilon);           // 2D rotation by epsilon*sin(ln r)
LipschitzMap compose_maps(const std::vector<LipschitzMap>& list);  // applied in list order

// Map catalog ids: identity, rotation(theta), shear-abs, shear-linear,
// oscillator, log-spiral(epsilon), composite(a,b,...). Parameters are read
// from `params` ("theta" in degrees, "epsilon").
LipschitzMap catalog_map(const std::string& id, int dim,
                         const std::map<std::string, double>& params = {});

}  // namespace dirgeo

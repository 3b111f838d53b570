#include "dirgeo/map.hpp"

#include <cmath>
#include <stdexcept>

#include "dirgeo/rng.hpp"

namespace dirgeo {

LipschitzMap LipschitzMap::inverted() const {
    if (!has_inverse()) throw std::invalid_argument("map '" + name + "' has no inverse");
    LipschitzMap m;
    m.dim = dim;
    m.name = name + "^-1";
    m.forward = inverse;
    m.inverse = forward;
    m.lip_estimate = inv_lip_estimate;
    m.inv_lip_estimate = lip_estimate;
    m.fixes_origin = fixes_origin;
    m.linear = linear;
    return m;
}

std::pair<double, double> estimate_lipschitz(const std::function<Vec(const Vec&)>& f, int dim,
                                             int pairs, std::uint64_t seed) {
    Rng rng(seed);
    double lip = 0.0, inv = 0.0;
    for (int i = 0; i < pairs; ++i) {
        double r = std::pow(10.0, rng.uniform(-4.0, 0.0));
        Vec x = rng.direction(dim) * (r * rng.uniform(0.5, 1.0));
        Vec y = x + rng.direction(dim) * (r * rng.uniform(1e-3, 1.0));
        double d = distance(x, y);
        if (d == 0.0) continue;
        double ratio = distance(f(x), f(y)) / d;
        lip = std::max(lip, ratio);
        if (ratio > 0.0) inv = std::max(inv, 1.0 / ratio);
    }
    return {lip, inv};
}

namespace {

LipschitzMap make_sampled(int dim, const std::string& name, std::function<Vec(const Vec&)> fwd,
                          std::function<Vec(const Vec&)> bwd, bool linear = false) {
    LipschitzMap m;
    m.dim = dim;
    m.name = name;
    m.forward = std::move(fwd);
    m.inverse = std::move(bwd);
    m.linear = linear;
    auto [l, il] = estimate_lipschitz(m.forward, dim);
    m.lip_estimate = l;
    m.inv_lip_estimate = il;
    return m;
}

}  // namespace

LipschitzMap identity_map(int dim) {
    LipschitzMap m;
    m.dim = dim;
    m.name = "identity";
    m.forward = [](const Vec& x) { return x; };
    m.inverse = m.forward;
    m.linear = true;
    return m;
}

LipschitzMap rotation_map(int dim, double theta) {
    LipschitzMap m;
    m.dim = dim;
    m.name = "rotation";
    const double c = std::cos(theta), s = std::sin(theta);
    m.forward = [c, s](const Vec& x) {
        Vec y = x;
        y[0] = c * x[0] - s * x[1];
        y[1] = s * x[0] + c * x[1];
        return y;
    };
    m.inverse = [c, s](const Vec& x) {
        Vec y = x;
        y[0] = c * x[0] + s * x[1];
        y[1] = -s * x[0] + c * x[1];
        return y;
    };
    m.linear = true;
    return m;
}

LipschitzMap shear_abs_map(int dim) {
    auto fwd = [](const Vec& x) {
        Vec y = x;
        y[1] += std::fabs(x[0]);
        return y;
    };
    auto bwd = [](const Vec& x) {
        Vec y = x;
        y[1] -= std::fabs(x[0]);
        return y;
    };
    return make_sampled(dim, "shear-abs", fwd, bwd);
}

LipschitzMap shear_linear_map(int dim) {
    auto fwd = [](const Vec& x) {
        Vec y = x;
        y[1] += x[0];
        return y;
    };
    auto bwd = [](const Vec& x) {
        Vec y = x;
        y[1] -= x[0];
        return y;
    };
    return make_sampled(dim, "shear-linear", fwd, bwd, /*linear=*/true);
}

LipschitzMap oscillator_map() {
    // analytic except at 0, differentiable everywhere, bi-Lipschitz near 0;
    // the value at the origin is the removable limit 0
    auto fwd = [](const Vec& x) {
        double r = x.norm();
        Vec y = x;
        y[0] = 2.0 * x[0] + (r == 0.0 ? 0.0 : r * r * std::sin(1.0 / r));
        return y;
    };
    LipschitzMap m;
    m.dim = 2;
    m.name = "oscillator";
    m.forward = fwd;
    auto [l, il] = estimate_lipschitz(m.forward, 2);
    m.lip_estimate = l;
    m.inv_lip_estimate = il;
    return m;
}

LipschitzMap log_spiral_map(double epsilon) {
    auto turn = [epsilon](const Vec& x, double sign) {
        double r = x.norm();
        if (r == 0.0) return x;
        double a = sign * epsilon * std::sin(std::log(r));
        double c = std::cos(a), s = std::sin(a);
        Vec y = x;
        y[0] = c * x[0] - s * x[1];
        y[1] = s * x[0] + c * x[1];
        return y;
    };
    auto fwd = [turn](const Vec& x) { return turn(x, 1.0); };
    auto bwd = [turn](const Vec& x) { return turn(x, -1.0); };  // norm is preserved
    return make_sampled(2, "log-spiral", fwd, bwd);
}

LipschitzMap compose_maps(const std::vector<LipschitzMap>& list) {
    if (list.empty()) throw std::invalid_argument("compose_maps: empty list");
    LipschitzMap m;
    m.dim = list.front().dim;
    m.name = "composite(";
    bool invertible = true;
    bool linear = true;
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].dim != m.dim) throw std::invalid_argument("compose_maps: dimension mismatch");
        m.name += (i ? "," : "") + list[i].name;
        invertible = invertible && list[i].has_inverse();
        linear = linear && list[i].linear;
    }
    m.name += ")";
    auto maps = list;
    m.forward = [maps](const Vec& x) {
        Vec y = x;
        for (const auto& h : maps) y = h.forward(y);
        return y;
    };
    if (invertible) {
        m.inverse = [maps](const Vec& x) {
            Vec y = x;
            for (auto it = maps.rbegin(); it != maps.rend(); ++it) y = it->inverse(y);
            return y;
        };
    }
    m.linear = linear;
    auto [l, il] = estimate_lipschitz(m.forward, m.dim);
    m.lip_estimate = l;
    m.inv_lip_estimate = il;
    return m;
}

LipschitzMap catalog_map(const std::string& id, int dim,
                         const std::map<std::string, double>& params) {
    auto param = [&params](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (id == "identity") return identity_map(dim);
    if (id == "rotation") return rotation_map(dim, param("theta", 30.0) * M_PI / 180.0);
    if (id == "shear-abs") return shear_abs_map(dim);
    if (id == "shear-linear") return shear_linear_map(dim);
    if (id == "oscillator") {
        if (dim != 2) throw std::invalid_argument("oscillator map is 2-dimensional");
        return oscillator_map();
    }
    if (id == "log-spiral") {
        if (dim != 2) throw std::invalid_argument("log-spiral map is 2-dimensional");
        return log_spiral_map(param("epsilon", 0.2));
    }
    if (id.rfind("composite(", 0) == 0 && id.back() == ')') {
        std::vector<LipschitzMap> parts;
        std::string inner = id.substr(10, id.size() - 11);
        std::size_t start = 0;
        while (start <= inner.size()) {
            std::size_t comma = inner.find(',', start);
            std::string tok = inner.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
            if (!tok.empty()) parts.push_back(catalog_map(tok, dim, params));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return compose_maps(parts);
    }
    throw std::invalid_argument("unknown map id: " + id);
}

}  // namespace dirgeo

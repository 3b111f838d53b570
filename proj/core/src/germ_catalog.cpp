#include <cmath>
#include <stdexcept>

#include "dirgeo/germ.hpp"
#include "dirgeo/rng.hpp"

namespace dirgeo {

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

// real odd root: sign(w) |w|^(1/5)
double real_root5(double w) { return w < 0.0 ? -std::pow(-w, 0.2) : std::pow(w, 0.2); }

Patch conical_patch(std::function<Vec(double)> base, double s_lo = 0.0, double s_hi = 1.0,
                    double u_hi = 1.0) {
    Patch p;
    p.pdim = 2;
    p.box = {{{s_lo, s_hi}, {0.0, u_hi}}};
    p.conical = true;
    p.cone_base = std::move(base);
    auto b = p.cone_base;
    p.map = [b](double s, double u) { return b(s) * u; };
    p.anchor = {{s_lo, 0.0}};
    return p;
}

Patch curve_patch(std::function<Vec(double)> f, double t_lo, double t_hi,
                  std::optional<double> anchor_t = std::nullopt) {
    Patch p;
    p.pdim = 1;
    p.box = {{{t_lo, t_hi}, {0.0, 1.0}}};
    auto g = std::move(f);
    p.map = [g](double s, double) { return g(s); };
    if (anchor_t) p.anchor = {{*anchor_t, 0.0}};
    return p;
}

Patch graph_patch(std::function<double(double, double)> height, double lo = -1.0, double hi = 1.0) {
    Patch p;
    p.pdim = 2;
    p.box = {{{lo, hi}, {lo, hi}}};
    auto h = std::move(height);
    p.map = [h](double u, double v) { return Vec(u, v, h(u, v)); };
    p.anchor = {{0.0, 0.0}};
    return p;
}

// Circular arc of the B_t base curve: centre (0,t) and radius
// sqrt(1 + (t+1)^2) in the plane z=1, joining P2=(1,-1,1) to P3=(-1,-1,1)
// through the half-plane y <= -1.
struct BtArc {
    double cx, cy, radius, theta_start, sweep;

    explicit BtArc(double t) {
        cx = 0.0;
        cy = t;
        radius = std::sqrt(1.0 + (t + 1.0) * (t + 1.0));
        theta_start = std::atan2(-1.0 - t, 1.0);
        double theta_end = std::atan2(-1.0 - t, -1.0);
        sweep = theta_start - theta_end;
        while (sweep <= 0.0) sweep += 2.0 * M_PI;
    }

    Vec at(double s) const {
        double th = theta_start - s * sweep;
        return Vec(cx + radius * std::cos(th), cy + radius * std::sin(th), 1.0);
    }
};

SetGerm make_line(const std::map<std::string, double>& params) {
    int dim = static_cast<int>(param_or(params, "dim", 3.0));
    int axis = static_cast<int>(param_or(params, "axis", dim == 3 ? 2.0 : 1.0));
    if (dim < 2 || dim > 3 || axis < 0 || axis >= dim)
        throw std::invalid_argument("line: bad dim/axis");
    SetGerm g;
    g.dim = dim;
    g.base_point = Vec::zero(dim);
    g.id = "line";
    ParametricRep rep;
    for (double sgn : {1.0, -1.0})
        rep.patches.push_back(conical_patch([dim, axis, sgn](double) {
            return Vec::axis(dim, axis, sgn);
        }));
    g.rep = std::move(rep);
    return g;
}

SetGerm make_plane() {
    SetGerm g;
    g.dim = 3;
    g.base_point = Vec::zero(3);
    g.id = "plane";
    ParametricRep rep;
    rep.patches.push_back(conical_patch(
        [](double s) { return Vec(std::cos(2.0 * M_PI * s), std::sin(2.0 * M_PI * s), 0.0); }));
    g.rep = std::move(rep);
    return g;
}

SetGerm make_quadric_cone(const std::string& id) {
    SetGerm g;
    g.dim = 3;
    g.base_point = Vec::zero(3);
    g.id = id;
    ImplicitRep rep;
    if (id == "cone-a2") {
        rep.equalities.push_back([](const Vec& v) {
            return v.x() * v.x() + v.y() * v.y() - std::pow(v.z(), 4);
        });
    } else {
        rep.equalities.push_back(
            [](const Vec& v) { return v.x() * v.x() + v.y() * v.y() - v.z() * v.z(); });
        if (id == "cone-a1plus") rep.inequalities.push_back([](const Vec& v) { return v.z(); });
    }
    g.rep = std::move(rep);
    return g;
}

SetGerm make_square_cone() {
    const Vec P1(1, 1, 1), P2(1, -1, 1), P3(-1, -1, 1), P4(-1, 1, 1);
    SetGerm g;
    g.dim = 3;
    g.base_point = Vec::zero(3);
    g.id = "square-cone-b";
    ParametricRep rep;
    const std::array<std::pair<Vec, Vec>, 4> segs{
        {{P1, P2}, {P2, P3}, {P3, P4}, {P4, P1}}};
    for (const auto& [a, b] : segs)
        rep.patches.push_back(
            conical_patch([a, b](double s) { return a * (1.0 - s) + b * s; }));
    g.rep = std::move(rep);
    return g;
}

SetGerm make_bt_cone(const std::map<std::string, double>& params) {
    double t = param_or(params, "t", 0.0);
    const Vec P1(1, 1, 1), P2(1, -1, 1), P3(-1, -1, 1), P4(-1, 1, 1);
    SetGerm g;
    g.dim = 3;
    g.base_point = Vec::zero(3);
    g.id = "bt-cone";
    ParametricRep rep;
    const std::array<std::pair<Vec, Vec>, 3> segs{{{P1, P2}, {P3, P4}, {P4, P1}}};
    for (const auto& [a, b] : segs)
        rep.patches.push_back(
            conical_patch([a, b](double s) { return a * (1.0 - s) + b * s; }));
    BtArc arc(t);
    rep.patches.push_back(conical_patch([arc](double s) { return arc.at(s); }));
    g.rep = std::move(rep);
    return g;
}

SetGerm make_whitney_umbrella() {
    // x^2 = z y^2: the surface sheets x = +-y sqrt(z) over z >= 0 plus the
    // whole z-axis (the z < 0 part is the 1-dimensional handle)
    SetGerm g;
    g.dim = 3;
    g.base_point = Vec::zero(3);
    g.id = "whitney-umbrella";
    ParametricRep rep;
    for (double sgn : {1.0, -1.0}) {
        Patch p;
        p.pdim = 2;
        p.box = {{{-1.0, 1.0}, {0.0, 1.0}}};
        p.map = [sgn](double y, double z) { return Vec(sgn * y * std::sqrt(z), y, z); };
        p.anchor = {{0.0, 0.0}};
        rep.patches.push_back(std::move(p));
    }
    rep.patches.push_back(curve_patch([](double t) { return Vec(0.0, 0.0, t); }, -1.0, 1.0, 0.0));
    g.rep = std::move(rep);
    g.defining_residuals.push_back(
        [](const Vec& v) { return v.x() * v.x() - v.z() * v.y() * v.y(); });
    return g;
}

SetGerm make_bs_graph() {
    // graph of g(x,y) = -(y^7 x + x^15)^(1/5), the zero set of the
    // Briancon-Speder member f_0 = z^5 + y^7 x + x^15
    SetGerm g;
    g.dim = 3;
    g.base_point = Vec::zero(3);
    g.id = "bs-graph";
    ParametricRep rep;
    rep.patches.push_back(graph_patch([](double x, double y) {
        return -real_root5(std::pow(y, 7) * x + std::pow(x, 15));
    }));
    g.rep = std::move(rep);
    g.defining_residuals.push_back([](const Vec& v) {
        return std::pow(v.z(), 5) + std::pow(v.y(), 7) * v.x() + std::pow(v.x(), 15);
    });
    return g;
}

SetGerm make_flat_graph(const std::map<std::string, double>& params) {
    double e = param_or(params, "e", 1.0);
    double c = param_or(params, "C", 1.0);
    if (!(e > 0.0)) throw std::invalid_argument("flat-graph: e must be > 0");
    SetGerm g;
    g.dim = 3;
    g.base_point = Vec::zero(3);
    g.id = "flat-graph";
    ParametricRep rep;
    rep.patches.push_back(graph_patch([e, c](double x, double y) {
        return c * std::pow(x * x + y * y, 0.5 * (1.0 + e));
    }));
    g.rep = std::move(rep);
    return g;
}

SetGerm make_gapped_ray() {
    // x in union_k [4^-k, 2*4^-k] on the positive axis; fails (SSP) at 0
    SetGerm g;
    g.dim = 2;
    g.base_point = Vec(0.0, 0.0);
    g.id = "gapped-ray";
    ParametricRep rep;
    double a = 1.0;
    for (int k = 0; k <= 40; ++k, a *= 0.25)
        rep.patches.push_back(
            curve_patch([a](double t) { return Vec(a * (1.0 + t), 0.0); }, 0.0, 1.0));
    g.rep = std::move(rep);
    return g;
}

SetGerm make_oscillator_image() {
    // image of the y-axis under the oscillator map: (t^2 sin(1/|t|), t),
    // defined as 0 at t = 0
    SetGerm g;
    g.dim = 2;
    g.base_point = Vec(0.0, 0.0);
    g.id = "oscillator-image";
    ParametricRep rep;
    rep.patches.push_back(curve_patch(
        [](double t) {
            double x = t == 0.0 ? 0.0 : t * t * std::sin(1.0 / std::fabs(t));
            return Vec(x, t);
        },
        -1.0, 1.0, 0.0));
    g.rep = std::move(rep);
    return g;
}

SetGerm make_pompeiu(const std::map<std::string, double>& params) {
    int n_terms = static_cast<int>(param_or(params, "n_terms", 12.0));
    auto seed = static_cast<std::uint64_t>(param_or(params, "seed", 42.0));
    if (n_terms < 8) throw std::invalid_argument("pompeiu: n_terms must be >= 8");
    auto as = pompeiu_nodes(n_terms, seed);
    auto f = [as](double x) {
        double s = 0.0;
        double w = 0.5;
        for (double a : as) {
            s += std::cbrt(x - a) * w;
            w *= 0.5;
        }
        return s;
    };
    double f0 = f(0.0);
    SetGerm g;
    g.dim = 2;
    g.base_point = Vec(0.0, 0.0);
    g.id = "pompeiu";
    ParametricRep rep;
    rep.patches.push_back(
        curve_patch([f, f0](double t) { return Vec(t, f(t) - f0); }, 0.0, 1.0, 0.0));
    g.rep = std::move(rep);
    return g;
}

}  // namespace

std::vector<double> pompeiu_nodes(int n_terms, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> as(static_cast<std::size_t>(n_terms));
    for (auto& a : as) a = rng.uniform();
    return as;
}

SetGerm catalog_germ(const std::string& id, const std::map<std::string, double>& params) {
    SetGerm g;
    if (id == "line")
        g = make_line(params);
    else if (id == "plane")
        g = make_plane();
    else if (id == "cone-a1" || id == "cone-a2" || id == "cone-a1plus")
        g = make_quadric_cone(id);
    else if (id == "square-cone-b")
        g = make_square_cone();
    else if (id == "bt-cone")
        g = make_bt_cone(params);
    else if (id == "whitney-umbrella")
        g = make_whitney_umbrella();
    else if (id == "bs-graph")
        g = make_bs_graph();
    else if (id == "flat-graph")
        g = make_flat_graph(params);
    else if (id == "gapped-ray")
        g = make_gapped_ray();
    else if (id == "oscillator-image")
        g = make_oscillator_image();
    else if (id == "pompeiu")
        g = make_pompeiu(params);
    else
        throw std::invalid_argument("unknown germ id: " + id);
    if (g.is_implicit())
        g.defining_residuals = g.implicit().equalities;
    return g;
}

}  // namespace dirgeo

#include <doctest.h>

#include <cmath>

#include "dirgeo/error.hpp"
#include "dirgeo/estimators.hpp"
#include "dirgeo/germ.hpp"
#include "dirgeo/map.hpp"
#include "dirgeo/rng.hpp"

using namespace dirgeo;

namespace {

const double kDeg = M_PI / 180.0;

DirectionSet circle_at_polar(double polar, int n = 720) {
    DirectionSet s;
    s.resolution_alpha = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) {
        double az = 2.0 * M_PI * i / n;
        s.members.push_back(Direction(
            Vec(std::sin(polar) * std::cos(az), std::sin(polar) * std::sin(az), std::cos(polar))));
    }
    return s;
}

DirectionSet join(const DirectionSet& a, const DirectionSet& b) {
    DirectionSet s = a;
    s.members.insert(s.members.end(), b.members.begin(), b.members.end());
    return s;
}

// oscillator-image tangent slopes x'(t) = 2 t sin(1/t) - cos(1/t) accumulate
// on [-1, 1]; dense sampling over t in [1e-6, 1e-2] is the oracle
std::pair<double, double> oscillator_slope_range() {
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 200000; ++i) {
        double t = 1e-6 + (1e-2 - 1e-6) * i / 199999.0;
        double slope = 2.0 * t * std::sin(1.0 / t) - std::cos(1.0 / t);
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
    }
    return {lo, hi};
}

}  // namespace

TEST_CASE("direction set of the z-axis line") {
    auto line = catalog_germ("line");
    auto ds = direction_set(line, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 60, 42);
    REQUIRE(ds.limit.size() == 2);
    for (const auto& m : ds.limit.members)
        CHECK(std::min(m.angle_to(Direction(Vec(0, 0, 1))), m.angle_to(Direction(Vec(0, 0, -1)))) <
              2.0 * kDeg);
}

TEST_CASE("direction set of cone-a2 collapses to the z-axis directions") {
    auto cone = catalog_germ("cone-a2");
    auto ds = direction_set(cone, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 200, 42);
    REQUIRE(!ds.limit.empty());
    for (const auto& m : ds.limit.members)
        CHECK(std::min(m.angle_to(Direction(Vec(0, 0, 1))), m.angle_to(Direction(Vec(0, 0, -1)))) <
              2.0 * kDeg);
}

TEST_CASE("direction set of cone-a1 matches its own link circles") {
    auto cone = catalog_germ("cone-a1");
    // dedup at 1 degree so the representation error stays under the 2 degree bound
    auto ds = direction_set(cone, ScaleSchedule(0.5, 0.5, 8), 0.0175, 720, 42);
    auto reference = join(circle_at_polar(45.0 * kDeg), circle_at_polar(135.0 * kDeg));
    CHECK(hausdorff_angle(ds.limit, reference) <= 2.0 * kDeg);
}

TEST_CASE("cone membership") {
    ConeGerm ray{Vec(0, 0, 0), DirectionSet{{Direction(Vec(0, 0, 1))}, 0.035}, 0.035};
    CHECK(cone_membership(ray, Vec(0, 0, 5)));
    CHECK(!cone_membership(ray, Vec(5, 0, 0)));
    CHECK(cone_membership(ray, Vec(0, 0, 0)));  // vertex

    auto cone = catalog_germ("cone-a1");
    auto ds = direction_set(cone, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 720, 42);
    ConeGerm est{Vec(0, 0, 0), ds.limit, 2.0 * kDefaultAlpha};
    CHECK(cone_membership(est, Vec(1, 0, 1)));
    CHECK(!cone_membership(est, Vec(0.1, 0, 1)));
}

TEST_CASE("bundle of the plane is the equator circle") {
    auto plane = catalog_germ("plane");
    ScaleSchedule base(0.5, 0.5, 6);
    ScaleSchedule dir(0.1, 0.5, 4);
    BundleOptions opts;
    opts.dir_count_per_shell = 96;
    auto bundle = geometric_bundle(plane, base, dir, 32, kDefaultAlpha, 42, opts);
    auto equator = circle_at_polar(90.0 * kDeg);
    CHECK(hausdorff_angle(bundle.limit, equator) <= 2.0 * kDeg);
}

TEST_CASE("bundle of the oscillator image spans the accumulated tangent arc") {
    auto germ = catalog_germ("oscillator-image");
    ScaleSchedule base(0.5, 0.5, 8);
    ScaleSchedule dir(0.1, 0.5, 9);
    BundleOptions opts;
    opts.dir_count_per_shell = 16;  // tangent direction pairs; richness comes from q
    auto bundle = geometric_bundle(germ, base, dir, 160, kDefaultAlpha, 42, opts);
    auto [lo, hi] = oscillator_slope_range();
    CHECK(lo <= -0.99);
    CHECK(hi >= 0.99);
    // arc around +e2: directions (u, 1)/norm for u in [lo, hi]
    int hits = 0;
    double span_lo = 1e9, span_hi = -1e9;
    for (const auto& m : bundle.limit.members) {
        if (m.u.y() <= 0.0) continue;
        double ang = std::atan2(m.u.x(), m.u.y());
        if (std::fabs(ang) <= 46.0 * kDeg) {
            ++hits;
            span_lo = std::min(span_lo, ang);
            span_hi = std::max(span_hi, ang);
        }
    }
    CHECK(hits >= 10);
    CHECK(span_hi - span_lo >= (M_PI / 2.0) - 3.0 * kDeg);
    CHECK(span_hi - span_lo <= (M_PI / 2.0) + 3.0 * kDeg);
}

TEST_CASE("bundle cone of the equator estimate behaves like the thickened plane") {
    auto plane = catalog_germ("plane");
    BundleOptions opts;
    opts.dir_count_per_shell = 96;
    auto bundle = geometric_bundle(plane, ScaleSchedule(0.5, 0.5, 6), ScaleSchedule(0.1, 0.5, 4),
                                   32, kDefaultAlpha, 42, opts);
    ConeGerm cone = bundle_cone(bundle, 2.0 * kDefaultAlpha);
    CHECK(cone_membership(cone, Vec(0.5, 0.2, 0.0)));
    CHECK(cone_membership(cone, Vec(0.5, 0.0, 0.02)));
    CHECK(!cone_membership(cone, Vec(0.5, 0.0, 0.2)));
    CHECK(!cone_membership(cone, Vec(0.0, 0.0, 1.0)));
}

TEST_CASE("ssp passes on cones and the line") {
    auto cone = catalog_germ("cone-a1");
    auto probe = direction_set(cone, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 200, 42).limit;
    auto rep = ssp_test(cone, probe, ScaleSchedule(0.5, 0.5, 8));
    CHECK(rep.verdict == SspVerdict::Pass);
    CHECK(rep.final_ratio <= 0.01);

    auto line = catalog_germ("line");
    DirectionSet axis;
    axis.members = {Direction(Vec(0, 0, 1)), Direction(Vec(0, 0, -1))};
    auto rep2 = ssp_test(line, axis, ScaleSchedule(0.5, 0.5, 8));
    CHECK(rep2.verdict == SspVerdict::Pass);
    CHECK(rep2.final_ratio <= 1e-6);
}

TEST_CASE("ssp fails on the gapped ray with ratio near one third") {
    auto ray = catalog_germ("gapped-ray");
    DirectionSet probe;
    probe.members = {Direction(Vec(1.0, 0.0))};
    // scales 3*4^-k land in the middle of each gap
    ScaleSchedule sched(3.0 / 16.0, 0.25, 5);
    auto rep = ssp_test(ray, probe, sched);
    CHECK(rep.verdict == SspVerdict::Fail);
    for (double rho : rep.gap_ratios) CHECK(rho == doctest::Approx(1.0 / 3.0).epsilon(0.05));
}

TEST_CASE("ssp invariant across seeds") {
    for (std::uint64_t seed : {42ULL, 43ULL, 44ULL}) {
        auto cone = catalog_germ("cone-a1plus");
        auto probe =
            direction_set(cone, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 200, seed).limit;
        CHECK(ssp_test(cone, probe, ScaleSchedule(0.5, 0.5, 8)).verdict == SspVerdict::Pass);

        auto ray = catalog_germ("gapped-ray");
        DirectionSet rp;
        rp.members = {Direction(Vec(1.0, 0.0))};
        CHECK(ssp_test(ray, rp, ScaleSchedule(3.0 / 16.0, 0.25, 5)).verdict == SspVerdict::Fail);
    }
}

TEST_CASE("local dimension of catalog germs") {
    auto umbrella = catalog_germ("whitney-umbrella");
    auto d1 = local_dimension(umbrella, Vec(0.0, 0.0, -0.5), ScaleSchedule(0.5, 0.5, 8));
    CHECK(d1.value == 1);

    auto a1 = catalog_germ("cone-a1");
    CHECK(local_dimension(a1, Vec(0, 0, 0), ScaleSchedule(0.5, 0.5, 8)).value == 2);

    auto a2 = catalog_germ("cone-a2");
    CHECK(local_dimension(a2, Vec(0, 0, 0), ScaleSchedule(0.5, 0.5, 8)).value == 1);

    auto plane = catalog_germ("plane");
    CHECK(local_dimension(plane, Vec(0, 0, 0), ScaleSchedule(0.5, 0.5, 8)).value == 2);
}

TEST_CASE("local dimension is rotation invariant") {
    auto umbrella = catalog_germ("whitney-umbrella");
    auto rotated = pushforward_germ(rotation_map(3, 0.6), umbrella);
    Vec q = rotation_map(3, 0.6).forward(Vec(0.0, 0.0, -0.5));
    auto d = local_dimension(rotated, q, ScaleSchedule(0.5, 0.5, 8));
    CHECK(d.value == 1);
}

TEST_CASE("tangent plane of the flat plane is exact") {
    auto plane = catalog_germ("plane");
    Frame f = tangent_plane(plane, Vec(0.2, -0.1, 0.0), 0.05, 200, 42);
    CHECK(angle_between(f.basis[2].u, Vec(0, 0, 1)) < 1e-6);
}

TEST_CASE("tangent plane on the Briancon-Speder graph near the y-axis") {
    auto bs = catalog_germ("bs-graph");
    Frame f = tangent_plane(bs, Vec(0.0, 0.1, 0.0), 1e-3, 300, 42);
    double a = angle_between(f.basis[2].u, Vec(1, 0, 0));
    CHECK(std::min(a, M_PI - a) < 3.0 * kDeg);
}

TEST_CASE("tangent plane along the lambda curve tilts to the vertical normal") {
    auto bs = catalog_germ("bs-graph");
    // on-surface seed point lambda(s) = (x0 s, y0 s^2, z0 s^3) with z0 != 0
    const double x0 = 0.3, y0 = 0.9;
    const double z0 = -std::pow(std::pow(y0, 7) * x0 + std::pow(x0, 15), 0.2);
    const double s = 0.02;
    Vec q(x0 * s, y0 * s * s, z0 * s * s * s);
    CHECK(distance_to_germ(bs, q, 0.01) < 1e-9);
    Frame f = tangent_plane(bs, q, 2e-4 * s, 300, 42);
    double a = angle_between(f.basis[2].u, Vec(0, 0, 1));
    CHECK(std::min(a, M_PI - a) < 3.0 * kDeg);
}

TEST_CASE("tangent plane reports no gap at a cone vertex") {
    auto cone = catalog_germ("cone-a1");
    CHECK_THROWS_AS(tangent_plane(cone, Vec(0, 0, 0), 0.2, 300, 42), NoGapError);
}

TEST_CASE("direction sets are scale invariant") {
    auto cone = catalog_germ("cone-a1");
    auto base = direction_set(cone, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 400, 42);
    for (double lam : {0.5, 2.0}) {
        LipschitzMap scale;
        scale.dim = 3;
        scale.name = "scale";
        scale.forward = [lam](const Vec& v) { return v * lam; };
        scale.inverse = [lam](const Vec& v) { return v / lam; };
        scale.linear = true;
        scale.lip_estimate = lam;
        scale.inv_lip_estimate = 1.0 / lam;
        auto scaled = pushforward_germ(scale, cone);
        auto ds = direction_set(scaled, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 400, 42);
        CHECK(hausdorff_angle(ds.limit, base.limit) <= kDefaultAlpha);
    }
}

TEST_CASE("cone link fixed point for catalog cones") {
    // cone-a1: analytic link circles
    auto a1 = catalog_germ("cone-a1");
    auto ds = direction_set(a1, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 720, 42);
    auto ref = join(circle_at_polar(45.0 * kDeg), circle_at_polar(135.0 * kDeg));
    CHECK(hausdorff_angle(ds.limit, ref) <= kDefaultAlpha + 1e-9);

    // square-cone-b: link is the radial projection of the base square
    auto b = catalog_germ("square-cone-b");
    auto dsb = direction_set(b, ScaleSchedule(0.5, 0.5, 8), kDefaultAlpha, 720, 42);
    DirectionSet square;
    square.resolution_alpha = 0.01;
    const Vec corners[4] = {Vec(1, 1, 1), Vec(1, -1, 1), Vec(-1, -1, 1), Vec(-1, 1, 1)};
    for (int e = 0; e < 4; ++e)
        for (int i = 0; i < 400; ++i) {
            double t = i / 399.0;
            square.members.push_back(Direction(corners[e] * (1.0 - t) + corners[(e + 1) % 4] * t));
        }
    CHECK(hausdorff_angle(dsb.limit, square) <= kDefaultAlpha + 1e-9);
}

TEST_CASE("estimated direction set sits inside the bundle limit neighborhood") {
    for (const char* id : {"plane", "flat-graph"}) {
        auto germ = catalog_germ(id);
        auto ds = direction_set(germ, ScaleSchedule(0.5, 0.5, 6), kDefaultAlpha, 200, 42);
        BundleOptions opts;
        opts.dir_count_per_shell = 96;
        auto bundle = geometric_bundle(germ, ScaleSchedule(0.5, 0.5, 6),
                                       ScaleSchedule(0.1, 0.5, 4), 32, kDefaultAlpha, 42, opts);
        CHECK(direction_excess(ds.limit, bundle.limit) <= 2.0 * kDefaultAlpha);
    }
}

TEST_CASE("dimension estimator on synthetic direction sets") {
    // two antipodal points: zero-dimensional link
    DirectionSet two;
    two.members = {Direction(Vec(0, 0, 1)), Direction(Vec(0, 0, -1))};
    auto d0 = dimension_of_direction_set(two, kDefaultAlpha);
    CHECK(d0.value == 1);
    CHECK(d0.confident);

    // equator circle: one-dimensional link
    auto d1 = dimension_of_direction_set(circle_at_polar(90.0 * kDeg), kDefaultAlpha);
    CHECK(d1.value == 2);

    // near-uniform sphere: two-dimensional link
    Rng rng(9);
    DirectionSet sphere;
    for (int i = 0; i < 4000; ++i) sphere.members.push_back(Direction(rng.direction(3)));
    auto d2 = dimension_of_direction_set(sphere, kDefaultAlpha);
    CHECK(d2.value == 3);

    DirectionSet empty;
    auto de = dimension_of_direction_set(empty, kDefaultAlpha);
    CHECK(de.inconclusive);
    CHECK(de.value == 0);
}

TEST_CASE("geometric bundle rejects a dir schedule that is too coarse") {
    auto plane = catalog_germ("plane");
    CHECK_THROWS_AS(geometric_bundle(plane, ScaleSchedule(0.5, 0.5, 6), ScaleSchedule(0.5, 0.5, 4),
                                     8, kDefaultAlpha, 42),
                    std::invalid_argument);
}

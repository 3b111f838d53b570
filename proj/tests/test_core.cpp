#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dirgeo/direction.hpp"
#include "dirgeo/error.hpp"
#include "dirgeo/frame.hpp"
#include "dirgeo/rng.hpp"
#include "dirgeo/union_find.hpp"

using namespace dirgeo;

namespace {

std::vector<Direction> cluster_around(const Vec& center, double max_angle_rad, int n, Rng& rng) {
    std::vector<Direction> out;
    Direction c(center);
    for (int i = 0; i < n; ++i) {
        // rejection draw within the cap
        for (;;) {
            Vec v = c.u + rng.direction(center.n) * (2.0 * std::sin(max_angle_rad / 2.0));
            Direction d(v);
            if (d.angle_to(c) <= max_angle_rad) {
                out.push_back(d);
                break;
            }
        }
    }
    return out;
}

AdjacencyList grid_adjacency(int w, int h) {
    AdjacencyList adj;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            std::vector<std::uint32_t> row;
            if (i > 0) row.push_back(static_cast<std::uint32_t>(j * w + i - 1));
            if (i + 1 < w) row.push_back(static_cast<std::uint32_t>(j * w + i + 1));
            if (j > 0) row.push_back(static_cast<std::uint32_t>((j - 1) * w + i));
            if (j + 1 < h) row.push_back(static_cast<std::uint32_t>((j + 1) * w + i));
            adj.add_row(row);
        }
    return adj;
}

}  // namespace

TEST_CASE("dedup collapses duplicates and keeps orthogonal pairs") {
    std::vector<Direction> dup{Direction(Vec(1, 0, 0)), Direction(Vec(1, 0, 0))};
    auto s1 = dedup_directions(dup, 0.035);
    CHECK(s1.size() == 1);

    std::vector<Direction> ortho{Direction(Vec(1, 0, 0)), Direction(Vec(0, 1, 0))};
    auto s2 = dedup_directions(ortho, 0.035);
    CHECK(s2.size() == 2);
}

TEST_CASE("dedup reduces two antipodal 1-degree clusters to two members") {
    Rng rng(7);
    const double one_deg = M_PI / 180.0;
    auto raw = cluster_around(Vec(0, 0, 1), one_deg, 1000, rng);
    auto south = cluster_around(Vec(0, 0, -1), one_deg, 1000, rng);
    raw.insert(raw.end(), south.begin(), south.end());

    // oracle: brute-force check that every pair within a cluster is closer
    // than alpha, so greedy selection must keep exactly one per cluster
    double worst_in_cluster = 0.0;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j)
            worst_in_cluster = std::max(worst_in_cluster, raw[i].angle_to(raw[j]));
    CHECK(worst_in_cluster < 0.035);

    auto set = dedup_directions(raw, 0.035);
    REQUIRE(set.size() == 2);
    double two_deg = 2.0 * one_deg;
    for (const auto& m : set.members) {
        double up = m.angle_to(Direction(Vec(0, 0, 1)));
        double dn = m.angle_to(Direction(Vec(0, 0, -1)));
        CHECK(std::min(up, dn) <= two_deg);
    }
}

TEST_CASE("dedup rejects non-unit input") {
    std::vector<Direction> bad(1);
    bad[0].u = Vec(1.0, 0.5, 0.0);  // bypass normalization on purpose
    CHECK_THROWS_AS(dedup_directions(bad, 0.035), std::invalid_argument);
}

TEST_CASE("dedup is idempotent") {
    Rng rng(11);
    std::vector<Direction> raw;
    for (int i = 0; i < 500; ++i) raw.push_back(Direction(rng.direction(3)));
    auto once = dedup_directions(raw, 0.1);
    auto twice = dedup_directions(once.members, 0.1);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i)
        CHECK(once.members[i].angle_to(twice.members[i]) == doctest::Approx(0.0));
}

TEST_CASE("hausdorff angle basics") {
    DirectionSet a, b;
    a.members = {Direction(Vec(0.0, 1.0))};
    b.members = {Direction(Vec(0.0, 1.0))};
    CHECK(hausdorff_angle(a, b) == doctest::Approx(0.0));

    DirectionSet e1, e2;
    e1.members = {Direction(Vec(1.0, 0.0))};
    e2.members = {Direction(Vec(0.0, 1.0))};
    CHECK(hausdorff_angle(e1, e2) == doctest::Approx(M_PI / 2));

    DirectionSet pair, single;
    pair.members = {Direction(Vec(1.0, 0.0)), Direction(Vec(0.0, 1.0))};
    single.members = {Direction(Vec(1.0, 0.0))};
    // max-min formula evaluated directly: excess of the pair over the single
    CHECK(hausdorff_angle(pair, single) == doctest::Approx(M_PI / 2));

    DirectionSet empty;
    CHECK(hausdorff_angle(empty, empty) == doctest::Approx(0.0));
    CHECK(hausdorff_angle(empty, single) == std::numeric_limits<double>::infinity());
}

TEST_CASE("hausdorff angle is symmetric and satisfies the triangle inequality") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        auto gen = [&rng](int n) {
            DirectionSet s;
            for (int i = 0; i < n; ++i) s.members.push_back(Direction(rng.direction(3)));
            return s;
        };
        auto a = gen(1 + static_cast<int>(rng.uniform() * 8));
        auto b = gen(1 + static_cast<int>(rng.uniform() * 8));
        auto c = gen(1 + static_cast<int>(rng.uniform() * 8));
        double ab = hausdorff_angle(a, b);
        double ba = hausdorff_angle(b, a);
        CHECK(ab == doctest::Approx(ba));
        CHECK(ab <= hausdorff_angle(a, c) + hausdorff_angle(c, b) + 1e-12);
    }
}

TEST_CASE("principal directions of a segment, a disk, and a cross") {
    Rng rng(5);
    std::vector<Point> seg;
    for (int i = 0; i < 100; ++i) seg.push_back(Vec(rng.uniform(-1.0, 1.0), 0.0, 0.0));
    Frame f = principal_directions(seg, Vec(0.0, 0.0, 0.0));
    CHECK(std::fabs(std::fabs(f.basis[0].u.x()) - 1.0) < 1e-6);
    CHECK(f.singular_values[1] < 1e-9);
    CHECK(f.singular_values[2] < 1e-9);

    std::vector<Point> disk;
    while (disk.size() < 500) {
        double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0);
        if (x * x + y * y <= 1.0) disk.push_back(Vec(x, y, 0.0));
    }
    Frame fd = principal_directions(disk, Vec(0.0, 0.0, 0.0));
    CHECK(fd.singular_values[2] < 1e-9);
    CHECK(std::fabs(std::fabs(fd.basis[2].u.z()) - 1.0) < 1e-6);

    std::vector<Point> cross{Vec(1, 0, 0), Vec(-1, 0, 0), Vec(0, 1, 0), Vec(0, -1, 0)};
    Frame fc = principal_directions(cross, Vec(0.0, 0.0, 0.0));
    CHECK(fc.singular_values[0] == doctest::Approx(fc.singular_values[1]).epsilon(1e-12));
    CHECK(fc.singular_values[2] == doctest::Approx(0.0));
}

TEST_CASE("principal directions requires two usable points") {
    std::vector<Point> pts{Vec(0.0, 0.0, 0.0), Vec(1.0, 0.0, 0.0)};
    CHECK_THROWS_AS(principal_directions(pts, Vec(0.0, 0.0, 0.0)), InsufficientDataError);
}

TEST_CASE("principal directions is rotation equivariant") {
    Rng rng(17);
    std::vector<Point> pts;
    for (int i = 0; i < 120; ++i)
        pts.push_back(Vec(rng.uniform(-2.0, 2.0), rng.uniform(-0.5, 0.5), rng.uniform(-0.1, 0.1)));
    Frame base = principal_directions(pts, Vec(0.0, 0.0, 0.0));

    const double th = 0.7;
    auto rot = [th](const Vec& v) {
        return Vec(std::cos(th) * v.x() - std::sin(th) * v.y(),
                   std::sin(th) * v.x() + std::cos(th) * v.y(), v.z());
    };
    std::vector<Point> rpts;
    for (const auto& p : pts) rpts.push_back(rot(p));
    Frame rotated = principal_directions(rpts, Vec(0.0, 0.0, 0.0));

    for (int i = 0; i < 3; ++i) {
        CHECK(rotated.singular_values[static_cast<std::size_t>(i)] ==
              doctest::Approx(base.singular_values[static_cast<std::size_t>(i)]).epsilon(1e-9));
        Vec expect = rot(base.basis[static_cast<std::size_t>(i)].u);
        double a = angle_between(expect, rotated.basis[static_cast<std::size_t>(i)].u);
        CHECK(std::min(a, M_PI - a) < 1e-6);
    }
}

TEST_CASE("union-find counts grid components") {
    auto adj = grid_adjacency(10, 10);
    std::vector<std::uint8_t> all(100, 1);
    CHECK(union_find_components(adj, all).count == 1);

    std::vector<std::uint8_t> split(100);
    for (int j = 0; j < 10; ++j)
        for (int i = 0; i < 10; ++i) split[static_cast<std::size_t>(j * 10 + i)] = (i < 4 || i > 5) ? 1 : 0;
    CHECK(union_find_components(adj, split).count == 2);

    auto adj3 = grid_adjacency(3, 3);
    std::vector<std::uint8_t> corners(9, 0);
    corners[0] = corners[2] = corners[6] = corners[8] = 1;
    CHECK(union_find_components(adj3, corners).count == 4);
}

TEST_CASE("component count is invariant under visitation order") {
    Rng rng(31);
    const int w = 24, h = 24;
    std::vector<std::uint8_t> active(static_cast<std::size_t>(w * h));
    for (auto& a : active) a = rng.uniform() < 0.55 ? 1 : 0;
    auto base = union_find_components(grid_adjacency(w, h), active);

    // same graph with every adjacency row reversed
    AdjacencyList fwd = grid_adjacency(w, h), rev;
    for (std::size_t c = 0; c < fwd.cell_count(); ++c) {
        std::vector<std::uint32_t> row(fwd.neighbors.begin() + fwd.offsets[c],
                                       fwd.neighbors.begin() + fwd.offsets[c + 1]);
        std::reverse(row.begin(), row.end());
        rev.add_row(row);
    }
    auto alt = union_find_components(rev, active);
    CHECK(base.count == alt.count);
}

#include <doctest.h>

#include <cmath>
#include <set>

#include "dirgeo/raster.hpp"
#include "dirgeo/spherical_grid.hpp"

using namespace dirgeo;

namespace {

DirectionSet circle_around(const Vec& normal, double pitch = 0.01) {
    // great circle orthogonal to the normal
    Vec n = normal.normalized();
    Vec seed = std::fabs(n.x()) < 0.9 ? Vec(1, 0, 0) : Vec(0, 1, 0);
    Vec a = (seed - n * seed.dot(n)).normalized();
    Vec b(n.y() * a.z() - n.z() * a.y(), n.z() * a.x() - n.x() * a.z(),
          n.x() * a.y() - n.y() * a.x());
    DirectionSet s;
    s.resolution_alpha = pitch;
    int m = static_cast<int>(2.0 * M_PI / pitch);
    for (int i = 0; i < m; ++i) {
        double t = 2.0 * M_PI * i / m;
        s.members.push_back(Direction(a * std::cos(t) + b * std::sin(t)));
    }
    return s;
}

void append(DirectionSet& into, const DirectionSet& more) {
    into.members.insert(into.members.end(), more.members.begin(), more.members.end());
}

// analytic bundle link of the B_t cone: the three fixed face planes plus the
// tangent planes of the arc face, normals (-cos th, -sin th, R + t sin th)
DirectionSet analytic_bt_link(double t) {
    DirectionSet link;
    link.resolution_alpha = 0.01;
    append(link, circle_around(Vec(1, 0, -1)));  // plane x = z
    append(link, circle_around(Vec(1, 0, 1)));   // plane x = -z
    append(link, circle_around(Vec(0, 1, -1)));  // plane y = z
    double radius = std::sqrt(1.0 + (t + 1.0) * (t + 1.0));
    double th_start = std::atan2(-1.0 - t, 1.0);
    double th_end = std::atan2(-1.0 - t, -1.0);
    double sweep = th_start - th_end;
    while (sweep <= 0.0) sweep += 2.0 * M_PI;
    int steps = static_cast<int>(sweep / 0.015) + 1;
    for (int i = 0; i <= steps; ++i) {
        double th = th_start - sweep * i / steps;
        Vec n(-std::cos(th), -std::sin(th), radius + t * std::sin(th));
        append(link, circle_around(n));
    }
    return link;
}

}  // namespace

TEST_CASE("cube-sphere grid structure") {
    SphericalGrid grid(3, 16);
    CHECK(grid.cell_count() == 6u * 16u * 16u);
    const auto& adj = grid.adjacency();
    std::size_t three = 0;
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        std::size_t deg = adj.offsets[c + 1] - adj.offsets[c];
        CHECK(deg >= 3);
        CHECK(deg <= 4);
        if (deg == 3) ++three;
        // symmetry
        for (std::uint32_t k = adj.offsets[c]; k < adj.offsets[c + 1]; ++k) {
            std::uint32_t n = adj.neighbors[k];
            bool back = false;
            for (std::uint32_t k2 = adj.offsets[n]; k2 < adj.offsets[n + 1]; ++k2)
                if (adj.neighbors[k2] == c) back = true;
            CHECK(back);
        }
        // locate is the inverse of the layout
        CHECK(grid.locate(grid.cell_center(c)) == c);
    }
    // every cell of a cube-sphere has 4 neighbors except possibly corners
    CHECK(three <= 24);
}

TEST_CASE("2d grid is a ring") {
    SphericalGrid grid(2, 64);
    CHECK(grid.cell_count() == 64u);
    const auto& adj = grid.adjacency();
    for (std::size_t c = 0; c < 64; ++c) CHECK(adj.offsets[c + 1] - adj.offsets[c] == 2);
    CHECK(grid.locate(Vec(1.0, 1e-9)) == 0u);
}

TEST_CASE("rasterized equator band splits the sphere into two caps") {
    SphericalGrid grid(3, 64);
    ConeGerm cone{Vec(0, 0, 0), circle_around(Vec(0, 0, 1)), 0.07};
    auto occ = rasterize_cone(cone, grid, 2.0 * grid.max_cell_diameter());
    auto comp = count_components(occ, grid);
    CHECK(comp.count == 2);
}

TEST_CASE("empty link rasterizes to nothing") {
    SphericalGrid grid(3, 32);
    ConeGerm cone{Vec(0, 0, 0), DirectionSet{}, 0.07};
    auto occ = rasterize_cone(cone, grid, 0.2);
    for (auto v : occ) CHECK(v == 0);
}

TEST_CASE("rasterization is monotone in thickness") {
    SphericalGrid grid(3, 32);
    ConeGerm cone{Vec(0, 0, 0), circle_around(Vec(0.3, -0.5, 1.0)), 0.07};
    auto thin = rasterize_cone(cone, grid, 1.6 * grid.max_cell_diameter());
    auto thick = rasterize_cone(cone, grid, 3.0 * grid.max_cell_diameter());
    for (std::size_t c = 0; c < grid.cell_count(); ++c)
        if (thin[c]) CHECK(thick[c]);
}

TEST_CASE("antipodally symmetric links rasterize symmetrically at even resolutions") {
    SphericalGrid grid(3, 32);
    DirectionSet link = circle_around(Vec(0.3, -0.5, 1.0));
    ConeGerm cone{Vec(0, 0, 0), link, 0.07};
    auto occ = rasterize_cone(cone, grid, 2.0 * grid.max_cell_diameter());
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        std::size_t anti = grid.locate(-grid.cell_center(c));
        CHECK(occ[c] == occ[anti]);
    }
}

TEST_CASE("single plane complement has two components") {
    ConeGerm cone{Vec(0, 0, 0), circle_around(Vec(0, 0, 1)), 0.07};
    auto rep = complement_components(cone, 3, 64);
    CHECK(rep.component_count == 2);
    CHECK(rep.stable);
}

TEST_CASE("band cone complement has two components") {
    // link of { z^2 <= x^2 + y^2 }: solid band between the 45-degree circles
    DirectionSet band;
    band.resolution_alpha = 0.02;
    for (double polar = 0.25 * M_PI; polar <= 0.75 * M_PI + 1e-9; polar += 0.01) {
        int m = static_cast<int>(2.0 * M_PI * std::sin(polar) / 0.01);
        for (int i = 0; i < m; ++i) {
            double az = 2.0 * M_PI * i / m;
            band.members.push_back(Direction(Vec(std::sin(polar) * std::cos(az),
                                                 std::sin(polar) * std::sin(az),
                                                 std::cos(polar))));
        }
    }
    ConeGerm cone{Vec(0, 0, 0), band, 0.07};
    auto rep = complement_components(cone, 3, 64);
    CHECK(rep.component_count == 2);
    CHECK(rep.stable);
}

TEST_CASE("four-plane arrangement complement has fourteen components") {
    // tau_1..tau_4: x-z, y+z, x+z, y-z; the great-circle arrangement has
    // V=12 vertices and E=24 edges, so F = 2 - V + E = 14 faces
    DirectionSet link;
    link.resolution_alpha = 0.01;
    append(link, circle_around(Vec(1, 0, -1)));
    append(link, circle_around(Vec(0, 1, 1)));
    append(link, circle_around(Vec(1, 0, 1)));
    append(link, circle_around(Vec(0, 1, -1)));
    ConeGerm cone{Vec(0, 0, 0), link, 0.07};
    auto rep = complement_components(cone, 3, 128);
    CHECK(rep.component_count == 14);
    CHECK(rep.stable);
}

TEST_CASE("planar section of the 45-degree cone is a circle with two complement parts") {
    DirectionSet link;
    link.resolution_alpha = 0.01;
    int m = 1024;
    for (int i = 0; i < m; ++i) {
        double az = 2.0 * M_PI * i / m;
        double c = std::sqrt(0.5);
        link.members.push_back(Direction(Vec(c * std::cos(az), c * std::sin(az), c)));
        link.members.push_back(Direction(Vec(c * std::cos(az), c * std::sin(az), -c)));
    }
    ConeGerm cone{Vec(0, 0, 0), link, 0.07};
    auto rep = planar_section_components(cone, 1.0, 256, 3.0);
    CHECK(rep.component_count == 2);
    CHECK(rep.stable);
}

TEST_CASE("planar section of the four-plane link gives nine regions") {
    DirectionSet link;
    link.resolution_alpha = 0.01;
    append(link, circle_around(Vec(1, 0, -1)));
    append(link, circle_around(Vec(0, 1, 1)));
    append(link, circle_around(Vec(1, 0, 1)));
    append(link, circle_around(Vec(0, 1, -1)));
    ConeGerm cone{Vec(0, 0, 0), link, 0.07};
    // the four planes trace the lines x = 1, y = -1, x = -1, y = 1
    auto rep = planar_section_components(cone, 1.0, 512, 20.0);
    CHECK(rep.component_count == 9);
    CHECK(rep.stable);
}

TEST_CASE("analytic bt-cone links reproduce the published component counts") {
    const double ts[4] = {-2.0, -1.25, -1.0, 0.0};
    const int m1_expected[4] = {3, 4, 2, 9};
    const int m_expected[4] = {6, 8, 4, 14};
    for (int i = 0; i < 4; ++i) {
        DirectionSet link = analytic_bt_link(ts[i]);
        ConeGerm cone{Vec(0, 0, 0), link, 0.07};
        auto m1 = planar_section_components(cone, 1.0, 512, 20.0);
        CHECK(m1.component_count == m1_expected[i]);
        CHECK(m1.stable);
        auto m = complement_components(cone, 3, 128);
        CHECK(m.component_count == m_expected[i]);
        CHECK(m.stable);
    }
}

TEST_CASE("pgm export writes a readable header") {
    SphericalGrid grid(3, 8);
    ConeGerm cone{Vec(0, 0, 0), circle_around(Vec(0, 0, 1)), 0.2};
    auto occ = rasterize_cone(cone, grid, 2.0 * grid.max_cell_diameter());
    write_pgm("/tmp/dirgeo_test.pgm", occ, 8, 6 * 8);
    FILE* f = fopen("/tmp/dirgeo_test.pgm", "rb");
    REQUIRE(f);
    char magic[3] = {0};
    REQUIRE(fscanf(f, "%2s", magic) == 1);
    CHECK(magic[0] == 'P');
    CHECK(magic[1] == '5');
    fclose(f);
}

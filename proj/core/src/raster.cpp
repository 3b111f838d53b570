#include "dirgeo/raster.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace dirgeo {

std::vector<std::uint8_t> rasterize_cone(const ConeGerm& cone, const SphericalGrid& grid,
                                         double thickness) {
    if (thickness < 1.5 * grid.max_cell_diameter())
        throw std::invalid_argument("rasterize_cone: thickness below 1.5 cell diameters");
    std::vector<std::uint8_t> occ(grid.cell_count(), 0);
    if (cone.link.empty()) return occ;
    const double cos_thick = std::cos(std::min(thickness, M_PI));
    // member-driven: flood the angular disk around each link member; the disk
    // is connected on the grid because thickness >= 1.5 cell diameters
    const auto& adj = grid.adjacency();
    std::vector<std::uint32_t> stack;
    std::vector<std::uint32_t> touched;
    std::vector<std::uint8_t> seen(grid.cell_count(), 0);
    for (const auto& d : cone.link.members) {
        const Vec& m = d.u;
        stack.clear();
        touched.clear();
        auto push = [&](std::uint32_t c) {
            if (seen[c]) return;
            seen[c] = 1;
            touched.push_back(c);
            if (grid.cell_center(c).dot(m) >= cos_thick) {
                occ[c] = 1;
                stack.push_back(c);
            }
        };
        push(static_cast<std::uint32_t>(grid.locate(m)));
        while (!stack.empty()) {
            std::uint32_t c = stack.back();
            stack.pop_back();
            for (std::uint32_t k = adj.offsets[c]; k < adj.offsets[c + 1]; ++k)
                push(adj.neighbors[k]);
        }
        for (std::uint32_t c : touched) seen[c] = 0;
    }
    return occ;
}

ComponentLabeling count_components(const std::vector<std::uint8_t>& occupancy,
                                   const SphericalGrid& grid) {
    std::vector<std::uint8_t> inactive(occupancy.size());
    for (std::size_t i = 0; i < occupancy.size(); ++i) inactive[i] = occupancy[i] ? 0 : 1;
    return union_find_components(grid.adjacency(), inactive);
}

ComponentReport complement_components(const ConeGerm& cone, int dim, int resolution,
                                      double thickness, std::vector<std::uint8_t>* occupancy_out) {
    ComponentReport rep;
    int counts[2] = {0, 0};
    for (int pass = 0; pass < 2; ++pass) {
        int res = pass == 0 ? resolution : 2 * resolution;
        SphericalGrid grid(dim, res);
        double thick = thickness > 0.0
                           ? thickness
                           : std::max(1.5 * grid.max_cell_diameter(),
                                      0.75 * cone.link.resolution_alpha);
        auto occ = rasterize_cone(cone, grid, thick);
        counts[pass] = count_components(occ, grid).count;
        rep.resolutions_checked.push_back(res);
        if (pass == 0) {
            rep.active_count = static_cast<std::size_t>(
                std::count(occ.begin(), occ.end(), static_cast<std::uint8_t>(1)));
            if (occupancy_out) *occupancy_out = std::move(occ);
        }
    }
    rep.component_count = counts[0];
    rep.stable = counts[0] == counts[1];
    return rep;
}

namespace {

double dist_to_ray(const Vec& q, const Vec& unit_dir) {
    double t = std::max(0.0, q.dot(unit_dir));
    return distance(q, unit_dir * t);
}

struct PlanarPass {
    int count = 0;
    std::size_t active = 0;
    std::vector<std::uint8_t> occ;
};

PlanarPass planar_pass(const ConeGerm& cone, double height, int res, double extent,
                       double thickness) {
    PlanarPass out;
    out.occ.assign(static_cast<std::size_t>(res) * res, 0);
    // Link members are spaced angularly, so a cell far from the origin may sit
    // between the discrete rays of a section curve; the radius-proportional
    // floor keeps such curves contiguous out to the window edge.
    const double angular_floor = 0.75 * cone.link.resolution_alpha;
    const double cell = 2.0 * extent / res;
    const double diag = std::sqrt(2.0 * extent * extent + height * height);
    const double max_reach_angle =
        std::asin(std::min(1.0, std::max(thickness / height, angular_floor)));

    // azimuth-bucketed members: a cell only needs members whose azimuth is
    // within its angular reach
    const int nbuckets = 720;
    std::vector<std::vector<Vec>> buckets(nbuckets);
    std::vector<Vec> polar_members;  // azimuth ill-defined, always checked
    for (const auto& d : cone.link.members) {
        const Vec& m = d.u;
        if (m.n == 3 && m.z() < std::max(0.0, height / diag - max_reach_angle - 0.02)) continue;
        double horiz = std::hypot(m.x(), m.y());
        if (horiz < 2.0 * max_reach_angle) {
            polar_members.push_back(m);
            continue;
        }
        double az = std::atan2(m.y(), m.x());
        int b = static_cast<int>((az + M_PI) / (2.0 * M_PI) * nbuckets);
        buckets[static_cast<std::size_t>(std::clamp(b, 0, nbuckets - 1))].push_back(m);
    }

    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            Vec q(-extent + (i + 0.5) * cell, -extent + (j + 0.5) * cell, height);
            const double qn = q.norm();
            const double reach = std::max(thickness, qn * angular_floor);
            bool active = false;
            for (const auto& m : polar_members) {
                if (dist_to_ray(q, m) <= reach) {
                    active = true;
                    break;
                }
            }
            if (!active) {
                double qaz = std::atan2(q.y(), q.x());
                double dphi = std::asin(std::min(1.0, reach / std::hypot(q.x(), q.y())));
                int b0 = static_cast<int>((qaz - dphi + M_PI) / (2.0 * M_PI) * nbuckets) - 1;
                int b1 = static_cast<int>((qaz + dphi + M_PI) / (2.0 * M_PI) * nbuckets) + 1;
                for (int b = b0; b <= b1 && !active; ++b) {
                    for (const auto& m : buckets[static_cast<std::size_t>((b % nbuckets + nbuckets) % nbuckets)]) {
                        if (dist_to_ray(q, m) <= reach) {
                            active = true;
                            break;
                        }
                    }
                }
            }
            if (active) {
                out.occ[static_cast<std::size_t>(j) * res + i] = 1;
                ++out.active;
            }
        }
    }
    // flood fill of inactive cells, 4-adjacency inside the window
    AdjacencyList adj;
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
            std::vector<std::uint32_t> row;
            if (i > 0) row.push_back(static_cast<std::uint32_t>(j * res + i - 1));
            if (i + 1 < res) row.push_back(static_cast<std::uint32_t>(j * res + i + 1));
            if (j > 0) row.push_back(static_cast<std::uint32_t>((j - 1) * res + i));
            if (j + 1 < res) row.push_back(static_cast<std::uint32_t>((j + 1) * res + i));
            adj.add_row(row);
        }
    std::vector<std::uint8_t> inactive(out.occ.size());
    for (std::size_t c = 0; c < out.occ.size(); ++c) inactive[c] = out.occ[c] ? 0 : 1;
    out.count = union_find_components(adj, inactive).count;
    return out;
}

}  // namespace

ComponentReport planar_section_components(const ConeGerm& cone, double plane_height,
                                          int grid_resolution, double extent, double thickness,
                                          std::vector<std::uint8_t>* occupancy_out) {
    if (!(plane_height > 0.0))
        throw std::invalid_argument("planar_section_components: plane height must be > 0");
    ComponentReport rep;
    int counts[2] = {0, 0};
    for (int pass = 0; pass < 2; ++pass) {
        int res = pass == 0 ? grid_resolution : 2 * grid_resolution;
        double thick = thickness > 0.0 ? thickness : 2.0 * (2.0 * extent / res);
        PlanarPass pp = planar_pass(cone, plane_height, res, extent, thick);
        counts[pass] = pp.count;
        rep.resolutions_checked.push_back(res);
        if (pass == 0) {
            rep.active_count = pp.active;
            if (occupancy_out) *occupancy_out = std::move(pp.occ);
        }
    }
    rep.component_count = counts[0];
    rep.stable = counts[0] == counts[1];
    return rep;
}

void write_pgm(const std::string& path, const std::vector<std::uint8_t>& occupancy, int width,
               int height) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    for (std::uint8_t v : occupancy) out.put(v ? static_cast<char>(255) : static_cast<char>(0));
}

}  // namespace dirgeo

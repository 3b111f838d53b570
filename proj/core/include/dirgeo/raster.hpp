#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dirgeo/cone.hpp"
#include "dirgeo/spherical_grid.hpp"
#include "dirgeo/union_find.hpp"

namespace dirgeo {

// Component count of the complement, with a stability check at double
// resolution.
struct ComponentReport {
    std::size_t active_count = 0;
    int component_count = 0;
    std::vector<int> resolutions_checked;
    bool stable = false;
};

// cell active iff its center direction lies within `thickness` of the link.
// Requires thickness >= 1.5 * cell angular diameter.
std::vector<std::uint8_t> rasterize_cone(const ConeGerm& cone, const SphericalGrid& grid,
                                         double thickness);

// flood fill of the inactive cells at this grid only
ComponentLabeling count_components(const std::vector<std::uint8_t>& occupancy,
                                   const SphericalGrid& grid);

// Rasterizes the link at `resolution` and at double resolution; the report
// carries the count at `resolution` and stable = counts agree. thickness <= 0
// selects max(1.5 * cell diameter, 0.75 * link resolution) per grid.
ComponentReport complement_components(const ConeGerm& cone, int dim, int resolution,
                                      double thickness = 0.0,
                                      std::vector<std::uint8_t>* occupancy_out = nullptr);

// Complement components of the thickened cone section on the plane
// z = plane_height, inside the window [-extent, extent]^2, 4-adjacency.
// thickness is an absolute length in the plane; <= 0 selects 2 cells.
ComponentReport planar_section_components(const ConeGerm& cone, double plane_height,
                                          int grid_resolution, double extent,
                                          double thickness = 0.0,
                                          std::vector<std::uint8_t>* occupancy_out = nullptr);

// one byte per cell: 255 active, 0 inactive; face-major rows for cube-sphere
void write_pgm(const std::string& path, const std::vector<std::uint8_t>& occupancy, int width,
               int height);

}  // namespace dirgeo

#pragma once

#include <cstdint>
#include <vector>

#include "dirgeo/union_find.hpp"
#include "dirgeo/vec.hpp"

namespace dirgeo {

// Discretization of S^{n-1}: a cube-sphere (6 faces, k x k cells each, face
// adjacency with seam stitching) for n=3, uniform angular bins for n=2.
class SphericalGrid {
  public:
    SphericalGrid(int dim, int resolution);

    int dim() const { return dim_; }
    int resolution() const { return resolution_; }
    std::size_t cell_count() const { return centers_.size(); }
    const Vec& cell_center(std::size_t i) const { return centers_[i]; }
    const AdjacencyList& adjacency() const { return adjacency_; }
    double max_cell_diameter() const { return max_cell_diameter_; }

    // cell containing the direction (exact inverse of the cell layout)
    std::size_t locate(const Vec& direction) const;

  private:
    int dim_;
    int resolution_;
    std::vector<Vec> centers_;
    AdjacencyList adjacency_;
    double max_cell_diameter_ = 0.0;
};

}  // namespace dirgeo

#pragma once

#include <string>
#include <vector>

#include "dirgeo/direction.hpp"
#include "dirgeo/estimators.hpp"

namespace dirgeo {

// rows "scale,x,y[,z]"; per-scale members carry their scale, limit members
// carry scale 0
void write_directions_csv(const std::string& path, const DirectionScales& ds, int dim);
void write_direction_set_csv(const std::string& path, const DirectionSet& set, int dim,
                             double scale = 0.0);
void write_bundle_csv(const std::string& path, const BundleEstimate& bundle, int dim);

}  // namespace dirgeo

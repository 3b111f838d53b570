#pragma once

#include <cstdint>
#include <vector>

#include "dirgeo/cone.hpp"
#include "dirgeo/direction.hpp"
#include "dirgeo/frame.hpp"
#include "dirgeo/germ.hpp"
#include "dirgeo/schedule.hpp"

namespace dirgeo {

constexpr double kDefaultAlpha = 0.035;  // ~2 degrees

// Direction-set estimate: per-scale deduplicated secant directions plus the
// persistence limit over the finest scales.
struct DirectionScales {
    DirectionSet limit;
    std::vector<double> scales;
    std::vector<DirectionSet> per_scale;
    std::vector<bool> shell_warnings;
    bool all_empty = false;
};

// Members of the finest non-empty per-scale set that are matched within
// `match_tol` in each of the last `window` non-empty scales.
DirectionSet persistence_limit(const std::vector<DirectionSet>& per_scale, double alpha,
                               double match_tol, int window = 3);

DirectionScales direction_set(const SetGerm& germ, const ScaleSchedule& schedule,
                              double alpha = kDefaultAlpha, int count_per_shell = 200,
                              std::uint64_t seed = 42);

// Per-base-scale unions of nearby direction sets plus the persistence limit.
struct BundleEstimate {
    Point base_point;
    std::vector<double> base_scales;
    std::vector<DirectionSet> per_scale_unions;
    DirectionSet limit;
    std::vector<bool> scale_warnings;
};

struct BundleOptions {
    int dir_count_per_shell = 48;
    // extra q sequences merged into every matching base shell (targeted
    // estimation along known curves, in addition to sampled q's)
    std::vector<Point> extra_q_points;
};

// dir_schedule.r0 is relative: direction estimation at a base-scale-s_j point
// probes at radii (dir_schedule.r0 * s_j) * gamma^k. Requires r0 <= 0.2.
BundleEstimate geometric_bundle(const SetGerm& germ, const ScaleSchedule& base_schedule,
                                const ScaleSchedule& dir_schedule, int q_count,
                                double alpha = kDefaultAlpha, std::uint64_t seed = 42,
                                const BundleOptions& opts = {});

ConeGerm bundle_cone(const BundleEstimate& estimate, double tolerance);

enum class SspVerdict { Pass, Fail, Inconclusive };

// Gap ratios rho_k = max over probe directions of dist(p + r_k d, A) / r_k.
struct SspReport {
    std::vector<double> scales;
    std::vector<double> gap_ratios;
    SspVerdict verdict = SspVerdict::Inconclusive;
    double final_ratio = 0.0;
    bool infinite_distance = false;
};

SspReport ssp_test(const SetGerm& germ, const DirectionSet& probe, const ScaleSchedule& schedule);

// Covering-number dimension of a direction set: caps at dyadic radii alpha,
// 2 alpha, 4 alpha, 8 alpha; slope of log(count) against -log(radius).
struct DimensionEstimate {
    int value = 0;      // estimated set dimension (link slope rounded, plus 1)
    double slope = 0.0; // link covering slope
    double residual = 0.0;
    bool confident = false;
    bool inconclusive = false;
};

DimensionEstimate dimension_of_direction_set(const DirectionSet& set, double alpha);

DimensionEstimate local_dimension(const SetGerm& germ, const Point& q,
                                  const ScaleSchedule& schedule, std::uint64_t seed = 42,
                                  double alpha = kDefaultAlpha, int count_per_shell = 600);

// PCA tangent frame at a smooth point: samples ball(q, radius) on the germ.
// Throws NoGapError when the singular spectrum has no factor-5 gap between
// the tangent and normal blocks.
Frame tangent_plane(const SetGerm& germ, const Point& q, double radius, int count = 300,
                    std::uint64_t seed = 42);

}  // namespace dirgeo

#pragma once

#include <vector>

#include "dirgeo/cone.hpp"
#include "dirgeo/estimators.hpp"
#include "dirgeo/germ.hpp"
#include "dirgeo/rescale.hpp"

namespace dirgeo {

// Excess of a mapped source cone over a target cone.
struct InclusionReport {
    double excess = 0.0;  // radians
    double tol = 0.0;
    bool holds = false;
    int direction_count = 0;
};

// Maps each source link direction by the difference quotient
// (h(vertex + delta u) - h(vertex)) / delta at the given step.
InclusionReport inclusion_check(const LipschitzMap& h, const ConeGerm& source,
                                const ConeGerm& target, double tol, double delta = 1e-3);

// Same, using the final rescaled-map samples of an AA-derivative estimate.
InclusionReport inclusion_check(const AADerivativeEstimate& dh, const ConeGerm& source,
                                const ConeGerm& target, double tol);

// Set-level inclusion: source directions against target directions.
InclusionReport set_inclusion(const DirectionSet& source, const DirectionSet& target, double tol);

struct DirectionalTestOptions {
    double alpha = kDefaultAlpha;
    int grid_density = 64;
    int dir_count_per_shell = 200;
    int bundle_q_count = 48;
};

// Finite-scale verdict on the A-directionality of h along the subset D:
// (a) AA derivatives along D form a Cauchy sequence on the probe grid,
// (b) each d_p h maps the tangent-cone estimate at p into the estimate at
//     h(p), and (c) the bundle estimate is covered by the union of the
//     tangent-cone estimates over D.
struct DirectionalReport {
    bool derivative_cauchy = false;
    bool pointwise_inclusion = false;
    bool coverage = false;
    bool verdict = false;
    std::vector<double> derivative_deviations;
    double coverage_excess = 0.0;
};

DirectionalReport directional_test(const LipschitzMap& h, const SetGerm& germ,
                                   const std::vector<Point>& subset,
                                   const ScaleSchedule& schedule,
                                   const DirectionalTestOptions& opts = {});

// Persistence limits of tangent-cone estimates along a base sequence p_m -> 0
// and their mapped inclusion, plus inclusion of the target limit in the
// bundle estimate of h(A).
struct SequenceInclusionReport {
    DirectionSet source_limit;
    DirectionSet target_limit;
    InclusionReport inclusion;
    InclusionReport bundle_inclusion;
    bool derivative_cauchy = false;
    bool inconclusive = false;  // set when the AA derivatives are not Cauchy
};

SequenceInclusionReport sequence_inclusion_check(const LipschitzMap& h, const SetGerm& germ,
                                                 const std::vector<Point>& base_sequence,
                                                 const ScaleSchedule& schedule,
                                                 const DirectionalTestOptions& opts = {});

}  // namespace dirgeo

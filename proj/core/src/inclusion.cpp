#include "dirgeo/inclusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dirgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

InclusionReport excess_report(const std::vector<Direction>& mapped, const DirectionSet& target,
                              double tol) {
    InclusionReport rep;
    rep.tol = tol;
    rep.direction_count = static_cast<int>(mapped.size());
    if (mapped.empty()) {
        rep.excess = 0.0;
        rep.holds = true;
        return rep;
    }
    if (target.empty()) {
        rep.excess = kInf;
        rep.holds = false;
        return rep;
    }
    for (const auto& d : mapped) rep.excess = std::max(rep.excess, target.min_angle_to(d));
    rep.holds = rep.excess <= tol;
    return rep;
}

// schedule for derivative/direction estimation at p, kept strictly inside |p|
ScaleSchedule capped_at(const ScaleSchedule& schedule, double norm_p) {
    if (norm_p <= 0.0) return schedule;
    return ScaleSchedule(std::min(schedule.r0, norm_p / 4.0), schedule.gamma, schedule.count,
                         schedule.shell_width);
}

}  // namespace

InclusionReport inclusion_check(const LipschitzMap& h, const ConeGerm& source,
                                const ConeGerm& target, double tol, double delta) {
    if (source.link.empty()) throw std::invalid_argument("inclusion_check: empty source link");
    const Vec hv = h.forward(source.vertex);
    std::vector<Direction> mapped;
    for (const auto& u : source.link.members) {
        Vec w = h.forward(source.vertex + u.u * delta) - hv;
        if (w.norm() == 0.0) continue;
        mapped.push_back(Direction(w));
    }
    return excess_report(mapped, target.link, tol);
}

InclusionReport inclusion_check(const AADerivativeEstimate& dh, const ConeGerm& source,
                                const ConeGerm& target, double tol) {
    if (source.link.empty()) throw std::invalid_argument("inclusion_check: empty source link");
    std::vector<Direction> mapped;
    for (const auto& u : source.link.members) {
        Vec w = dh.apply(u);
        if (w.norm() == 0.0) continue;
        mapped.push_back(Direction(w));
    }
    return excess_report(mapped, target.link, tol);
}

InclusionReport set_inclusion(const DirectionSet& source, const DirectionSet& target, double tol) {
    InclusionReport rep;
    rep.tol = tol;
    rep.direction_count = static_cast<int>(source.size());
    rep.excess = direction_excess(source, target);
    rep.holds = rep.excess <= tol;
    return rep;
}

DirectionalReport directional_test(const LipschitzMap& h, const SetGerm& germ,
                                   const std::vector<Point>& subset, const ScaleSchedule& schedule,
                                   const DirectionalTestOptions& opts) {
    if (subset.empty()) throw std::invalid_argument("directional_test: empty subset");
    std::vector<Point> d_points = subset;
    std::sort(d_points.begin(), d_points.end(), [&](const Point& a, const Point& b) {
        return distance(a, germ.base_point) > distance(b, germ.base_point);
    });
    double min_norm = distance(d_points.back(), germ.base_point);
    if (min_norm > schedule.finest() * (1.0 + schedule.shell_width) || min_norm == 0.0)
        throw std::invalid_argument(
            "directional_test: subset must accumulate at the base point (min norm <= finest "
            "scale)");

    DirectionalReport rep;
    SetGerm image = pushforward_germ(h, germ);
    const double tol = 2.0 * opts.alpha;

    // (a) AA derivatives along D, ordered by decreasing norm
    std::vector<AADerivativeEstimate> dhs;
    for (const auto& p : d_points) {
        ScaleSchedule sched_p = capped_at(schedule, distance(p, germ.base_point));
        dhs.push_back(aa_derivative(h, p, sched_p, opts.grid_density));
    }
    for (std::size_t i = 0; i + 1 < dhs.size(); ++i) {
        double dev = 0.0;
        for (std::size_t g = 0; g < dhs[i].grid.size(); ++g)
            dev = std::max(dev, distance(dhs[i + 1].limit_samples()[g], dhs[i].limit_samples()[g]));
        rep.derivative_deviations.push_back(dev);
    }
    rep.derivative_cauchy = true;
    const std::size_t m = rep.derivative_deviations.size();
    for (std::size_t i = m >= 3 ? m - 3 : 0; i < m; ++i)
        if (rep.derivative_deviations[i] > 0.02 * h.lip_estimate) rep.derivative_cauchy = false;

    // (b) pointwise tangent-cone inclusion through each d_p h
    rep.pointwise_inclusion = true;
    std::vector<DirectionSet> cones_at_d;
    for (std::size_t i = 0; i < d_points.size(); ++i) {
        const Point& p = d_points[i];
        ScaleSchedule sched_p = capped_at(schedule, distance(p, germ.base_point));
        DirectionScales src = direction_set(rebase(germ, p), sched_p, opts.alpha,
                                            opts.dir_count_per_shell, 42 + i);
        DirectionScales tgt = direction_set(rebase(image, h.forward(p)), sched_p, opts.alpha,
                                            opts.dir_count_per_shell, 42 + i);
        cones_at_d.push_back(src.limit);
        if (src.limit.empty() || tgt.limit.empty()) {
            rep.pointwise_inclusion = false;
            continue;
        }
        ConeGerm src_cone{p, src.limit, tol};
        ConeGerm tgt_cone{h.forward(p), tgt.limit, tol};
        if (!inclusion_check(dhs[i], src_cone, tgt_cone, tol).holds)
            rep.pointwise_inclusion = false;
    }

    // (c) bundle coverage by the union of tangent cones over D
    ScaleSchedule dir_rel(0.1, 0.5, 5, schedule.shell_width);
    BundleOptions bopts;
    bopts.dir_count_per_shell = opts.dir_count_per_shell;
    BundleEstimate bundle =
        geometric_bundle(germ, schedule, dir_rel, opts.bundle_q_count, opts.alpha, 42, bopts);
    std::vector<Direction> pool;
    for (const auto& s : cones_at_d)
        for (const auto& d : s.members) pool.push_back(d);
    DirectionSet union_d = dedup_directions(pool, opts.alpha);
    rep.coverage_excess = direction_excess(bundle.limit, union_d);
    rep.coverage = rep.coverage_excess <= tol;

    rep.verdict = rep.derivative_cauchy && rep.pointwise_inclusion && rep.coverage;
    return rep;
}

SequenceInclusionReport sequence_inclusion_check(const LipschitzMap& h, const SetGerm& germ,
                                                 const std::vector<Point>& base_sequence,
                                                 const ScaleSchedule& schedule,
                                                 const DirectionalTestOptions& opts) {
    if (base_sequence.empty())
        throw std::invalid_argument("sequence_inclusion_check: empty base sequence");
    SequenceInclusionReport rep;
    SetGerm image = pushforward_germ(h, germ);
    const double tol = 2.0 * opts.alpha;

    const bool constant_base =
        std::all_of(base_sequence.begin(), base_sequence.end(), [&](const Point& p) {
            return distance(p, base_sequence.front()) == 0.0;
        });

    std::vector<DirectionSet> src_sets, tgt_sets;
    std::vector<AADerivativeEstimate> dhs;
    for (std::size_t i = 0; i < base_sequence.size(); ++i) {
        const Point& p = base_sequence[i];
        ScaleSchedule sched_p =
            constant_base ? schedule : capped_at(schedule, distance(p, germ.base_point));
        src_sets.push_back(
            direction_set(rebase(germ, p), sched_p, opts.alpha, opts.dir_count_per_shell, 42 + i)
                .limit);
        tgt_sets.push_back(direction_set(rebase(image, h.forward(p)), sched_p, opts.alpha,
                                         opts.dir_count_per_shell, 42 + i)
                               .limit);
        dhs.push_back(aa_derivative(h, p, sched_p, opts.grid_density));
        if (constant_base) break;  // one evaluation reproduces the plain check
    }
    rep.source_limit = persistence_limit(src_sets, opts.alpha, 2.0 * opts.alpha);
    rep.target_limit = persistence_limit(tgt_sets, opts.alpha, 2.0 * opts.alpha);

    rep.derivative_cauchy = true;
    for (std::size_t i = dhs.size() >= 3 ? dhs.size() - 3 : 0; i + 1 < dhs.size(); ++i) {
        double dev = 0.0;
        for (std::size_t g = 0; g < dhs[i].grid.size(); ++g)
            dev = std::max(dev, distance(dhs[i + 1].limit_samples()[g], dhs[i].limit_samples()[g]));
        if (dev > 0.02 * h.lip_estimate) rep.derivative_cauchy = false;
    }

    if (rep.source_limit.empty() || rep.target_limit.empty()) {
        rep.inconclusive = true;
        return rep;
    }
    ConeGerm src_cone{base_sequence.back(), rep.source_limit, tol};
    ConeGerm tgt_cone{h.forward(base_sequence.back()), rep.target_limit, tol};
    rep.inclusion = inclusion_check(dhs.back(), src_cone, tgt_cone, tol);
    if (!rep.derivative_cauchy) {
        rep.inconclusive = true;
        rep.inclusion.holds = false;
    }

    // the target limit sits inside the bundle estimate of h(A)
    ScaleSchedule dir_rel(0.1, 0.5, 5, schedule.shell_width);
    BundleOptions bopts;
    bopts.dir_count_per_shell = opts.dir_count_per_shell;
    for (const auto& p : base_sequence) bopts.extra_q_points.push_back(h.forward(p));
    BundleEstimate bundle =
        geometric_bundle(image, schedule, dir_rel, opts.bundle_q_count, opts.alpha, 42, bopts);
    rep.bundle_inclusion = set_inclusion(rep.target_limit, bundle.limit, tol);
    return rep;
}

}  // namespace dirgeo

#include "dirgeo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dirgeo/error.hpp"

namespace dirgeo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DirectionSet persistence_limit(const std::vector<DirectionSet>& per_scale, double alpha,
                               double match_tol, int window) {
    std::vector<const DirectionSet*> nonempty;
    for (const auto& s : per_scale)
        if (!s.empty()) nonempty.push_back(&s);
    DirectionSet out;
    out.resolution_alpha = alpha;
    if (nonempty.empty()) return out;
    int lo = std::max(0, static_cast<int>(nonempty.size()) - window);
    const DirectionSet& finest = *nonempty.back();
    for (const auto& d : finest.members) {
        bool keep = true;
        for (std::size_t k = static_cast<std::size_t>(lo); k < nonempty.size(); ++k) {
            if (nonempty[k]->min_angle_to(d) > match_tol) {
                keep = false;
                break;
            }
        }
        if (keep) out.members.push_back(d);
    }
    return out;
}

DirectionScales direction_set(const SetGerm& germ, const ScaleSchedule& schedule, double alpha,
                              int count_per_shell, std::uint64_t seed) {
    if (schedule.count < 4)
        throw std::invalid_argument("direction_set: schedule.count must be >= 4");
    auto shells = sample_annulus(germ, schedule, count_per_shell, seed);
    DirectionScales out;
    for (const auto& shell : shells) {
        out.scales.push_back(shell.scale);
        out.shell_warnings.push_back(shell.warning);
        std::vector<Direction> dirs;
        dirs.reserve(shell.points.size());
        for (const auto& x : shell.points) {
            Vec d = x - germ.base_point;
            if (d.norm() == 0.0) continue;
            dirs.push_back(Direction(d));
        }
        out.per_scale.push_back(dedup_directions(dirs, alpha));
    }
    out.limit = persistence_limit(out.per_scale, alpha, 2.0 * alpha);
    out.all_empty = out.limit.empty() &&
                    std::all_of(out.per_scale.begin(), out.per_scale.end(),
                                [](const DirectionSet& s) { return s.empty(); });
    return out;
}

BundleEstimate geometric_bundle(const SetGerm& germ, const ScaleSchedule& base_schedule,
                                const ScaleSchedule& dir_schedule, int q_count, double alpha,
                                std::uint64_t seed, const BundleOptions& opts) {
    base_schedule.validate();
    dir_schedule.validate();
    if (dir_schedule.r0 > 0.2)
        throw std::invalid_argument(
            "geometric_bundle: dir_schedule.r0 is relative to the base scale and must be <= 0.2");
    if (q_count < 1) throw std::invalid_argument("geometric_bundle: q_count must be >= 1");

    BundleEstimate out;
    out.base_point = germ.base_point;

    for (int j = 0; j < base_schedule.count; ++j) {
        const double sj = base_schedule.scale(j);
        out.base_scales.push_back(sj);
        ScaleSchedule dir_j = dir_schedule.rescaled(sj);

        ScaleSchedule q_shell(sj, 0.5, 2, base_schedule.shell_width);
        auto q_samples =
            sample_annulus(germ, q_shell, q_count, seed * 0x9E37u + static_cast<std::uint64_t>(j));

        std::vector<Point> qs = q_samples.front().points;
        bool warn = q_samples.front().warning;
        for (const auto& xq : opts.extra_q_points) {
            double r = distance(xq, germ.base_point);
            if (r >= sj * (1.0 - base_schedule.shell_width) &&
                r <= sj * (1.0 + base_schedule.shell_width))
                qs.push_back(xq);
        }

        std::vector<Direction> pool;
        auto harvest = [&](const SetGerm& at, std::uint64_t s) {
            DirectionScales ds = direction_set(at, dir_j, alpha, opts.dir_count_per_shell, s);
            for (const auto& d : ds.limit.members) pool.push_back(d);
        };
        // directions at the base point itself are part of D_A(A)
        harvest(germ, seed + 17u * static_cast<std::uint64_t>(j));
        for (std::size_t qi = 0; qi < qs.size(); ++qi)
            harvest(rebase(germ, qs[qi]),
                    seed + 1000003u * static_cast<std::uint64_t>(j) + qi);

        out.per_scale_unions.push_back(dedup_directions(pool, alpha));
        out.scale_warnings.push_back(warn);
    }
    out.limit = persistence_limit(out.per_scale_unions, alpha, 2.0 * alpha);
    return out;
}

ConeGerm bundle_cone(const BundleEstimate& estimate, double tolerance) {
    ConeGerm cone;
    cone.vertex = estimate.base_point;
    cone.link = estimate.limit;
    cone.tolerance = tolerance;
    return cone;
}

SspReport ssp_test(const SetGerm& germ, const DirectionSet& probe, const ScaleSchedule& schedule) {
    if (probe.empty()) throw std::invalid_argument("ssp_test: probe directions must be non-empty");
    SspReport rep;
    for (int k = 0; k < schedule.count; ++k) {
        double r = schedule.scale(k);
        double worst = 0.0;
        for (const auto& d : probe.members) {
            double dist = distance_to_germ(germ, germ.base_point + d.u * r, r);
            worst = std::max(worst, dist / r);
            if (!std::isfinite(worst)) break;
        }
        rep.scales.push_back(r);
        rep.gap_ratios.push_back(worst);
        if (!std::isfinite(worst)) rep.infinite_distance = true;
    }
    rep.final_ratio = rep.gap_ratios.back();

    if (rep.infinite_distance) {
        rep.verdict = SspVerdict::Fail;
        return rep;
    }
    const int k = schedule.count;
    int late_fail = 0;
    for (int i = std::max(0, k - 3); i < k; ++i)
        if (rep.gap_ratios[static_cast<std::size_t>(i)] >= 0.15) ++late_fail;

    // non-increasing trend over the last half: least-squares slope per step
    const int half = (k + 1) / 2;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = k - half; i < k; ++i) {
        double xi = i, yi = rep.gap_ratios[static_cast<std::size_t>(i)];
        sx += xi;
        sy += yi;
        sxx += xi * xi;
        sxy += xi * yi;
    }
    double slope = (half * sxy - sx * sy) / std::max(1e-300, half * sxx - sx * sx);

    if (rep.final_ratio <= 0.05 && slope <= 0.005)
        rep.verdict = SspVerdict::Pass;
    else if (late_fail >= 2)
        rep.verdict = SspVerdict::Fail;
    else
        rep.verdict = SspVerdict::Inconclusive;
    return rep;
}

DimensionEstimate dimension_of_direction_set(const DirectionSet& set, double alpha) {
    DimensionEstimate est;
    if (set.empty()) {
        est.inconclusive = true;
        est.value = 0;
        return est;
    }
    // greedy cap covering counts at dyadic radii
    std::vector<double> radii{alpha, 2.0 * alpha, 4.0 * alpha, 8.0 * alpha};
    std::vector<double> log_counts;
    for (double rho : radii) {
        std::vector<bool> covered(set.size(), false);
        int count = 0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (covered[i]) continue;
            ++count;
            for (std::size_t j = i; j < set.size(); ++j) {
                if (covered[j]) continue;
                if (set.members[i].angle_to(set.members[j]) <= rho) covered[j] = true;
            }
        }
        log_counts.push_back(std::log(static_cast<double>(count)));
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int m = static_cast<int>(radii.size());
    for (int i = 0; i < m; ++i) {
        double xi = -std::log(radii[static_cast<std::size_t>(i)]);
        double yi = log_counts[static_cast<std::size_t>(i)];
        sx += xi;
        sy += yi;
        sxx += xi * xi;
        sxy += xi * yi;
    }
    est.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double mean_x = sx / m, mean_y = sy / m;
    double rss = 0.0, tss = 0.0;
    for (int i = 0; i < m; ++i) {
        double xi = -std::log(radii[static_cast<std::size_t>(i)]);
        double yi = log_counts[static_cast<std::size_t>(i)];
        double fit = mean_y + est.slope * (xi - mean_x);
        rss += (yi - fit) * (yi - fit);
        tss += (yi - mean_y) * (yi - mean_y);
    }
    est.residual = std::sqrt(rss / m);
    int link_dim = static_cast<int>(std::lround(std::max(0.0, est.slope)));
    est.confident = std::fabs(est.slope - link_dim) <= 0.35;
    est.value = link_dim + 1;
    (void)tss;
    return est;
}

DimensionEstimate local_dimension(const SetGerm& germ, const Point& q,
                                  const ScaleSchedule& schedule, std::uint64_t seed, double alpha,
                                  int count_per_shell) {
    if (distance(q, germ.base_point) > 1.0)
        throw std::invalid_argument("local_dimension: q must be within 1 of the base point");
    SetGerm at_q = rebase(germ, q);
    DirectionScales ds = direction_set(at_q, schedule, alpha, count_per_shell, seed);
    // finest non-empty per-scale set
    const DirectionSet* finest = nullptr;
    for (auto it = ds.per_scale.rbegin(); it != ds.per_scale.rend(); ++it)
        if (!it->empty()) {
            finest = &*it;
            break;
        }
    DimensionEstimate est;
    if (!finest) {
        est.inconclusive = true;
        est.value = 0;
        return est;
    }
    return dimension_of_direction_set(*finest, alpha);
}

Frame tangent_plane(const SetGerm& germ, const Point& q, double radius, int count,
                    std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("tangent_plane: radius must be > 0");
    SetGerm at_q = rebase(germ, q);
    ScaleSchedule ladder(0.8 * radius, 0.55, 3, 0.25);
    auto shells = sample_annulus(at_q, ladder, std::max(8, count / 3), seed);
    std::vector<Point> pts;
    for (const auto& shell : shells)
        for (const auto& x : shell.points) pts.push_back(x);
    Frame f = principal_directions(pts, q);

    const double lead = f.singular_values.front();
    int tangent_rank = 0;
    for (double s : f.singular_values)
        if (s > 0.1 * lead) ++tangent_rank;
    if (tangent_rank == germ.dim)
        throw NoGapError("tangent_plane: full-rank spectrum, no normal direction at this radius");
    double s_t = f.singular_values[static_cast<std::size_t>(tangent_rank - 1)];
    double s_n = f.singular_values[static_cast<std::size_t>(tangent_rank)];
    if (s_n > 0.0 && s_t / s_n < 5.0)
        throw NoGapError("tangent_plane: ambiguous singular spectrum at this radius");
    return f;
}

}  // namespace dirgeo

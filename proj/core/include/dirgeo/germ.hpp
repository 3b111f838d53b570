#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dirgeo/map.hpp"
#include "dirgeo/schedule.hpp"
#include "dirgeo/vec.hpp"

namespace dirgeo {

struct SetGerm;

// Zero set of equality residuals, intersected with {g >= 0} for each
// inequality evaluator. Residuals must be finite on the unit ball around the
// base point.
struct ImplicitRep {
    std::vector<std::function<double(const Vec&)>> equalities;
    std::vector<std::function<double(const Vec&)>> inequalities;
};

// One parametric patch. Conical patches have map(s,u) = u * base(s) with u the
// radial parameter; the sampler solves shell radii on them exactly.
struct Patch {
    int pdim = 1;
    std::array<std::array<double, 2>, 2> box{{{0.0, 1.0}, {0.0, 1.0}}};
    std::function<Vec(double, double)> map;

    bool conical = false;
    std::function<Vec(double)> cone_base;  // set when conical; map(s,u) = u*cone_base(s)

    // parameters of the base point when it lies on this patch
    std::optional<std::array<double, 2>> anchor;
    // min distance from the base point to the patch (filled by rebase)
    double reach_hint = 0.0;

    Vec at(double s, double u) const { return map(s, u); }
};

struct ParametricRep {
    std::vector<Patch> patches;
};

struct PointCloudRep {
    // (scale, points at that scale), descending scale
    std::vector<std::pair<double, std::vector<Vec>>> per_scale;
};

// Image of another germ under a bi-Lipschitz map; sampling and distance
// delegate through the map. When the inner germ is implicit and the map is
// invertible, the composed residuals e(h^-1(y)) back the distance oracle.
struct ImageRep {
    std::shared_ptr<const SetGerm> inner;
    LipschitzMap map;
    std::shared_ptr<const ImplicitRep> composed;
};

// A pointed set (A, p): membership machinery plus the base point in the
// closure. The catalog fixes the representative radius at 1; behaviour
// outside the unit ball is up to each evaluator.
struct SetGerm {
    int dim = 3;
    Point base_point = Vec(0.0, 0.0, 0.0);
    std::string id = "germ";
    std::variant<ImplicitRep, ParametricRep, PointCloudRep, ImageRep> rep;

    // defining-formula residuals for equation-defined catalog germs,
    // independent of the representation chosen for sampling
    std::vector<std::function<double(const Vec&)>> defining_residuals;

    bool is_implicit() const { return std::holds_alternative<ImplicitRep>(rep); }
    bool is_parametric() const { return std::holds_alternative<ParametricRep>(rep); }
    const ImplicitRep& implicit() const { return std::get<ImplicitRep>(rep); }
    const ParametricRep& parametric() const { return std::get<ParametricRep>(rep); }
};

// Certified near-set points in one shell [r(1-w), r(1+w)].
struct AnnulusSample {
    double scale = 0.0;
    std::vector<Point> points;
    std::vector<double> residuals;  // distance estimates, <= tolerance * scale
    bool warning = false;           // set when the shell produced no certified point
};

struct SamplerOptions {
    int retry_factor = 20;       // rejection budget = retry_factor * count
    double residual_tol = 1e-8;  // certification threshold, relative to shell scale
    bool stratified = true;      // stratified angular draws for even link coverage
    // extra acceptance predicate on candidate points (image germs push their
    // shell membership through the map with this)
    std::function<bool(const Vec&)> accept_filter;
};

// Germ catalog. Known ids: line, plane, cone-a1, cone-a2, cone-a1plus,
// square-cone-b, bt-cone (param t), whitney-umbrella, bs-graph,
// flat-graph (params e, C), gapped-ray, oscillator-image,
// pompeiu (params n_terms, seed).
SetGerm catalog_germ(const std::string& id, const std::map<std::string, double>& params = {});

// dense nodes a_n in [0,1] used by the pompeiu germ and demo
std::vector<double> pompeiu_nodes(int n_terms, std::uint64_t seed);

// Same set viewed from a new base point. Parametric patches get their anchors
// and reach hints recomputed at q.
SetGerm rebase(const SetGerm& germ, const Point& q);

// Up to count_per_shell certified points per shell; deterministic for a fixed
// seed, with per-shell derived seeds. A shell that stays empty after the retry
// budget is recorded with a warning flag.
std::vector<AnnulusSample> sample_annulus(const SetGerm& germ, const ScaleSchedule& schedule,
                                          int count_per_shell, std::uint64_t seed,
                                          const SamplerOptions& opts = {});

// Upper bound on dist(x, A), accurate to well within 10% of scale_hint on the
// catalog; +inf sentinel when nothing is found within 10 * scale_hint.
double distance_to_germ(const SetGerm& germ, const Point& x, double scale_hint);

struct NearestPoint {
    double dist = 0.0;
    Point witness;
    bool found = false;
};
NearestPoint nearest_point(const SetGerm& germ, const Point& x, double scale_hint);

// Image germ h(A) with base point h(p). Implicit inners with invertible maps
// compose residuals; parametric inners compose patch maps; anything else is
// wrapped and delegates through h.
SetGerm pushforward_germ(const LipschitzMap& h, const SetGerm& germ);

// PointCloud germ from CSV rows (header "x,y[,z]") plus sidecar metadata JSON
// {"base_point": [...], "scales": [s0, ...]}. Points are binned to the nearest
// listed scale by distance from the base point; with no scales, one bin.
SetGerm load_pointcloud_csv(const std::string& csv_path, const std::string& meta_path);

}  // namespace dirgeo

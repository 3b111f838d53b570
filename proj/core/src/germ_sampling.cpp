#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dirgeo/germ.hpp"
#include "dirgeo/frame.hpp"
#include "dirgeo/rng.hpp"

namespace dirgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// implicit projection: Levenberg-Marquardt on the equality residual vector

struct Proj {
    Vec x;
    double dist_est = kInf;
    bool ok = false;
};

void eval_residuals(const ImplicitRep& rep, const Vec& x, std::vector<double>& e) {
    e.resize(rep.equalities.size());
    for (std::size_t i = 0; i < rep.equalities.size(); ++i) e[i] = rep.equalities[i](x);
}

double res_norm2(const std::vector<double>& e) {
    double s = 0.0;
    for (double v : e) s += v * v;
    return s;
}

bool inequalities_ok(const ImplicitRep& rep, const Vec& x, double slack) {
    for (const auto& g : rep.inequalities)
        if (g(x) < -slack) return false;
    return true;
}

// solve (A + lambda I) d = b for n<=3, symmetric positive semidefinite A
bool solve_spd(const std::array<std::array<double, 3>, 3>& a, const std::array<double, 3>& b,
               double lambda, int n, std::array<double, 3>& out) {
    double m[3][4];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i][j] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + (i == j ? lambda : 0.0);
        m[i][n] = b[static_cast<std::size_t>(i)];
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (std::fabs(m[piv][col]) < 1e-300) return false;
        if (piv != col)
            for (int j = 0; j <= n; ++j) std::swap(m[piv][j], m[col][j]);
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int j = col; j <= n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = m[i][n] / m[i][i];
    return true;
}

// Gauss-Newton step for the residual vector at x; returns false when the
// Jacobian is effectively zero.
bool gn_step(const ImplicitRep& rep, const Vec& x, const std::vector<double>& e, Vec& step) {
    const int n = x.n;
    const std::size_t m = rep.equalities.size();
    const double h = 1e-7 * std::max(1e-2, x.norm());
    std::vector<std::array<double, 3>> jac(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            jac[i][static_cast<std::size_t>(j)] = (rep.equalities[i](xp) - rep.equalities[i](xm)) / (2.0 * h);
        }
    }
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jte{};
    double jscale = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (int a = 0; a < n; ++a) {
            jte[static_cast<std::size_t>(a)] += jac[i][static_cast<std::size_t>(a)] * e[i];
            for (int b = 0; b < n; ++b)
                jtj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += jac[i][static_cast<std::size_t>(a)] * jac[i][static_cast<std::size_t>(b)];
        }
    for (int a = 0; a < n; ++a) jscale = std::max(jscale, jtj[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)]);
    if (jscale < 1e-300) return false;
    std::array<double, 3> d{};
    if (!solve_spd(jtj, jte, 1e-14 * jscale, n, d)) return false;
    step = Vec::zero(n);
    for (int a = 0; a < n; ++a) step[a] = -d[static_cast<std::size_t>(a)];
    return true;
}

Proj project_implicit(const ImplicitRep& rep, const Vec& x0, double scale, int max_iters = 200) {
    Proj out;
    Vec x = x0;
    std::vector<double> e;
    eval_residuals(rep, x, e);
    double f = res_norm2(e);
    double last_step = kInf;
    const double tol = 1e-9 * std::max(scale, 1e-12);
    for (int it = 0; it < max_iters; ++it) {
        Vec step;
        if (!gn_step(rep, x, e, step)) break;
        double sn = step.norm();
        // damped acceptance on the squared residual
        double lam = 1.0;
        bool accepted = false;
        for (int half = 0; half < 12; ++half) {
            Vec xt = x + step * lam;
            std::vector<double> et;
            eval_residuals(rep, xt, et);
            double ft = res_norm2(et);
            if (ft < f) {
                x = xt;
                e = std::move(et);
                f = ft;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        last_step = sn;
        if (!accepted) break;
        if (sn * lam < 0.2 * tol) break;
    }
    out.x = x;
    Vec step;
    if (gn_step(rep, x, e, step))
        out.dist_est = step.norm() + last_step * 1e-3;
    else
        out.dist_est = std::sqrt(f);
    out.ok = std::isfinite(out.dist_est);
    return out;
}

// ---------------------------------------------------------------------------
// parametric patch search

struct PatchHit {
    double dist = kInf;
    double s = 0.0, u = 0.0;
    Vec witness;
};

double golden_min_1d(const std::function<double(double)>& f, double a, double b, int iters,
                     double& best_t) {
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    best_t = f1 < f2 ? x1 : x2;
    return std::min(f1, f2);
}

// three-level multigrid scan plus golden polish; robust for oscillatory curves
double multigrid_min_1d(const std::function<double(double)>& f, double lo, double hi,
                        double& best_t) {
    double a = lo, b = hi;
    double bt = lo, bf = kInf;
    for (int level = 0; level < 3; ++level) {
        const int m = level == 0 ? 128 : 64;
        double lt = a, lf = kInf;
        for (int i = 0; i <= m; ++i) {
            double t = a + (b - a) * i / m;
            double v = f(t);
            if (v < lf) {
                lf = v;
                lt = t;
            }
        }
        if (lf < bf) {
            bf = lf;
            bt = lt;
        }
        double w = (b - a) / m;
        a = std::max(lo, lt - 2.0 * w);
        b = std::min(hi, lt + 2.0 * w);
    }
    double gt;
    double gf = golden_min_1d(f, a, b, 48, gt);
    if (gf < bf) {
        bf = gf;
        bt = gt;
    }
    best_t = bt;
    return bf;
}

// derivative-free compass refinement on a 2D box
double compass_min_2d(const std::function<double(double, double)>& f, double s0, double u0,
                      const std::array<std::array<double, 2>, 2>& box, double step0, double& s_out,
                      double& u_out) {
    double s = s0, u = u0, fv = f(s0, u0);
    double hs = step0 * (box[0][1] - box[0][0]);
    double hu = step0 * (box[1][1] - box[1][0]);
    for (int it = 0; it < 160; ++it) {
        bool moved = false;
        const double cand[4][2] = {{s + hs, u}, {s - hs, u}, {s, u + hu}, {s, u - hu}};
        for (const auto& c : cand) {
            double cs = std::clamp(c[0], box[0][0], box[0][1]);
            double cu = std::clamp(c[1], box[1][0], box[1][1]);
            double cf = f(cs, cu);
            if (cf < fv) {
                s = cs;
                u = cu;
                fv = cf;
                moved = true;
                break;
            }
        }
        if (!moved) {
            hs *= 0.5;
            hu *= 0.5;
            if (hs < 1e-10 && hu < 1e-10) break;
        }
    }
    s_out = s;
    u_out = u;
    return fv;
}

double dist_point_to_cone_ray(const Vec& x, const Vec& base, double u_lo, double u_hi) {
    double bn = base.norm();
    if (bn == 0.0) return x.norm();
    double t = std::clamp(x.dot(base) / (bn * bn), u_lo, u_hi);
    return distance(x, base * t);
}

PatchHit patch_nearest(const Patch& patch, const Vec& x) {
    PatchHit hit;
    if (patch.conical) {
        const double u_lo = patch.box[1][0], u_hi = patch.box[1][1];
        auto f = [&](double s) { return dist_point_to_cone_ray(x, patch.cone_base(s), u_lo, u_hi); };
        double s;
        hit.dist = multigrid_min_1d(f, patch.box[0][0], patch.box[0][1], s);
        Vec base = patch.cone_base(s);
        double bn2 = base.norm2();
        double u = bn2 == 0.0 ? 0.0 : std::clamp(x.dot(base) / bn2, u_lo, u_hi);
        hit.s = s;
        hit.u = u;
        hit.witness = base * u;
        return hit;
    }
    if (patch.pdim == 1) {
        auto f = [&](double t) { return distance(patch.at(t, 0.0), x); };
        double t;
        hit.dist = multigrid_min_1d(f, patch.box[0][0], patch.box[0][1], t);
        hit.s = t;
        hit.u = 0.0;
        hit.witness = patch.at(t, 0.0);
        return hit;
    }
    auto f = [&](double s, double u) { return distance(patch.at(s, u), x); };
    const int m = 24;
    struct Start {
        double f, s, u;
    };
    std::vector<Start> starts;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            double s = patch.box[0][0] + (patch.box[0][1] - patch.box[0][0]) * i / m;
            double u = patch.box[1][0] + (patch.box[1][1] - patch.box[1][0]) * j / m;
            starts.push_back({f(s, u), s, u});
        }
    std::sort(starts.begin(), starts.end(), [](const Start& a, const Start& b) { return a.f < b.f; });
    hit.dist = kInf;
    for (std::size_t k = 0; k < std::min<std::size_t>(3, starts.size()); ++k) {
        double s, u;
        double d = compass_min_2d(f, starts[k].s, starts[k].u, patch.box, 1.0 / m, s, u);
        if (d < hit.dist) {
            hit.dist = d;
            hit.s = s;
            hit.u = u;
            hit.witness = patch.at(s, u);
        }
    }
    return hit;
}

// rough reachable-radius interval of a patch relative to p (skip filter only)
std::pair<double, double> patch_radius_range(const Patch& patch, const Vec& p) {
    double lo = kInf, hi = 0.0;
    auto visit = [&](const Vec& v) {
        double r = distance(v, p);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    };
    if (patch.pdim == 1) {
        for (int i = 0; i <= 32; ++i)
            visit(patch.at(patch.box[0][0] + (patch.box[0][1] - patch.box[0][0]) * i / 32.0, 0.0));
    } else {
        for (int i = 0; i <= 12; ++i)
            for (int j = 0; j <= 12; ++j)
                visit(patch.at(patch.box[0][0] + (patch.box[0][1] - patch.box[0][0]) * i / 12.0,
                               patch.box[1][0] + (patch.box[1][1] - patch.box[1][0]) * j / 12.0));
    }
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// one-shell samplers

struct ShellPoint {
    Vec x;
    double residual;
};

void sample_shell(const SetGerm& germ, double lo, double hi, double tol_scale, int count, Rng& rng,
                  const SamplerOptions& opts, std::vector<ShellPoint>& out);

void sample_shell_implicit(const SetGerm& germ, double lo, double hi, double tol_scale, int count,
                           Rng& rng, const SamplerOptions& opts, std::vector<ShellPoint>& out) {
    const auto& rep = germ.implicit();
    const Vec& p = germ.base_point;
    const int budget = opts.retry_factor * count;
    const double az_offset = rng.uniform();
    const double tol = opts.residual_tol * tol_scale;
    const int az_strata = std::max(1, germ.dim == 3 ? count / 2 : count);

    auto project_probe = [&](const Vec& d, ShellPoint& sp) -> bool {
        Vec x0 = p + d * rng.uniform(lo, hi);
        Proj pr = project_implicit(rep, x0, tol_scale);
        if (!pr.ok || pr.dist_est > tol) return false;
        if (!inequalities_ok(rep, pr.x, 1e-9 * std::max(1.0, tol_scale))) return false;
        double r = distance(pr.x, p);
        if (r < lo || r > hi) return false;
        if (opts.accept_filter && !opts.accept_filter(pr.x)) return false;
        sp = {pr.x, pr.dist_est};
        return true;
    };
    auto try_accept = [&](const Vec& d) -> bool {
        ShellPoint sp;
        if (!project_probe(d, sp)) return false;
        out.push_back(sp);
        return true;
    };

    // pilot batch: detect the local direction structure so that strata can be
    // laid out in the tangent frame (a rebased smooth point sees a circle of
    // secant directions, not the whole sphere); pilot hits stay out of the
    // sample set so the stratified sweep covers the full circle
    int tangent_rank = 0;
    Frame frame;
    if (opts.stratified && germ.dim == 3) {
        std::vector<Point> dirs;
        for (int i = 0; i < 60 && static_cast<int>(dirs.size()) < 24; ++i) {
            ShellPoint sp;
            if (project_probe(rng.direction(3), sp)) dirs.push_back((sp.x - p).normalized());
        }
        if (dirs.size() >= 8) {
            frame = principal_directions(dirs, Vec::zero(3));
            if (frame.singular_values[1] < 0.2 * frame.singular_values[0])
                tangent_rank = 1;
            else if (frame.singular_values[2] < 0.35 * frame.singular_values[0])
                tangent_rank = 2;
        }
    }

    // a stratum is retried until it yields a point or the cap is hit, so
    // angular coverage of the accepted set has no rejection holes; filtered
    // sampling needs a higher cap because the filter thins each stratum
    const int fail_cap = opts.accept_filter ? 40 : 12;
    int slot = 0, fails = 0;
    for (int i = 0; i < budget && static_cast<int>(out.size()) < count; ++i) {
        Vec d;
        if (opts.stratified && germ.dim == 2) {
            double az =
                2.0 * M_PI * (static_cast<double>(slot % az_strata) + az_offset) / az_strata;
            d = Vec(std::cos(az), std::sin(az));
        } else if (opts.stratified && germ.dim == 3 && tangent_rank == 2) {
            // strata along the local tangent circle, jittered off-plane
            double az = 2.0 * M_PI * (static_cast<double>(slot % count) + az_offset) / count;
            Vec t = frame.basis[0].u * std::cos(az) + frame.basis[1].u * std::sin(az) +
                    frame.basis[2].u * rng.uniform(-0.3, 0.3);
            d = t.normalized();
        } else if (opts.stratified && germ.dim == 3 && tangent_rank == 1) {
            Vec t = frame.basis[0].u * (slot % 2 == 0 ? 1.0 : -1.0) +
                    frame.basis[1].u * rng.uniform(-0.3, 0.3) +
                    frame.basis[2].u * rng.uniform(-0.3, 0.3);
            d = t.normalized();
        } else if (opts.stratified && germ.dim == 3) {
            // paired strata: each azimuth visits both hemispheres, so
            // antipodal link circles are covered at the stratum pitch
            double az = 2.0 * M_PI * (static_cast<double>((slot / 2) % az_strata) + az_offset) /
                        az_strata;
            double z = rng.uniform(0.0, 1.0) * (slot % 2 == 0 ? 1.0 : -1.0);
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            d = Vec(r * std::cos(az), r * std::sin(az), z);
        } else {
            d = rng.direction(germ.dim);
        }
        if (try_accept(d) || ++fails >= fail_cap) {
            ++slot;
            fails = 0;
        }
    }
}

void sample_shell_parametric(const SetGerm& germ, double lo, double hi, double /*tol_scale*/,
                             int count, Rng& rng, const SamplerOptions& opts,
                             std::vector<ShellPoint>& out) {
    const auto& rep = germ.parametric();
    const Vec& p = germ.base_point;
    const bool at_origin = p.norm() < 1e-12;

    std::vector<std::size_t> viable;
    for (std::size_t pi = 0; pi < rep.patches.size(); ++pi) {
        if (rep.patches[pi].anchor) {
            viable.push_back(pi);  // contains the base point, always reachable
            continue;
        }
        auto [rmin, rmax] = patch_radius_range(rep.patches[pi], p);
        if (rmin / 1.8 <= hi && rmax * 1.8 >= lo) viable.push_back(pi);
    }
    if (viable.empty()) return;

    const int budget = opts.retry_factor * count;
    const int per_patch = std::max(1, count / static_cast<int>(viable.size()));
    std::vector<double> offsets(viable.size());
    for (auto& o : offsets) o = rng.uniform();
    // per-patch stratum slots that advance on acceptance (or persistent failure)
    const int fail_cap = opts.accept_filter ? 40 : 12;
    std::vector<int> slots(viable.size(), 0), fails(viable.size(), 0);

    // Local tangent frame at each anchored patch from the finite-difference
    // Jacobian: landing directions are stratified in this frame and resolved
    // by a small parameter solve. Straight-line parameter pulls alone approach
    // the base point almost radially whenever the anchor sits near a patch
    // coordinate center, which starves the angular coverage.
    struct AnchorFrame {
        bool usable = false;
        int rank = 0;
        Vec b0, b1;
        double step_s = 0.0, step_u = 0.0;
    };
    std::vector<AnchorFrame> frames(viable.size());
    for (std::size_t vi = 0; vi < viable.size(); ++vi) {
        const Patch& patch = rep.patches[viable[vi]];
        if (!patch.anchor || patch.pdim != 2 || (patch.conical && at_origin)) continue;
        const double as = (*patch.anchor)[0], au = (*patch.anchor)[1];
        const double hs = 1e-6 * (patch.box[0][1] - patch.box[0][0]);
        const double hu = 1e-6 * (patch.box[1][1] - patch.box[1][0]);
        // one-sided differences when the anchor sits on a box edge: composed
        // patches are often kinked exactly there
        auto fd = [&](int axis, double h) {
            double a0 = axis == 0 ? as : au;
            const auto& b = patch.box[static_cast<std::size_t>(axis)];
            double plus = std::min(a0 + h, b[1]), minus = std::max(a0 - h, b[0]);
            Vec f_plus = axis == 0 ? patch.at(plus, au) : patch.at(as, plus);
            Vec f_minus = axis == 0 ? patch.at(minus, au) : patch.at(as, minus);
            return (f_plus - f_minus) / (plus - minus);
        };
        Vec c0 = fd(0, hs);
        Vec c1 = fd(1, hu);
        if (!c0.finite() || !c1.finite()) continue;
        double n0 = c0.norm(), n1 = c1.norm();
        AnchorFrame& fr = frames[vi];
        if (n0 < 1e-300 && n1 < 1e-300) continue;
        if (n0 < n1 * 1e-9) {
            fr.b0 = c1 / n1;
            fr.rank = 1;
        } else {
            fr.b0 = c0 / n0;
            Vec t = c1 - fr.b0 * fr.b0.dot(c1);
            if (t.norm() > 1e-6 * std::max(n0, n1)) {
                fr.b1 = t.normalized();
                fr.rank = 2;
            } else {
                fr.rank = 1;
            }
        }
        double mid = 0.5 * (lo + hi);
        fr.step_s = n0 > 1e-300 ? mid / n0 : 0.0;
        fr.step_u = n1 > 1e-300 ? mid / n1 : 0.0;
        fr.usable = true;
    }

    // walk the parameters toward a point at p + rad * d; returns success
    auto solve_toward = [&](const Patch& patch, const AnchorFrame& fr, const Vec& target,
                            double rad, Vec& found) -> bool {
        const auto& box = patch.box;
        double s = (*patch.anchor)[0], u = (*patch.anchor)[1];
        double fv = distance(patch.at(s, u), target);
        double hs = std::min(fr.step_s, 0.5 * (box[0][1] - box[0][0]));
        double hu = std::min(fr.step_u, 0.5 * (box[1][1] - box[1][0]));
        if (hs <= 0.0 && hu <= 0.0) return false;
        for (int it = 0; it < 90; ++it) {
            bool moved = false;
            const double cand[4][2] = {{s + hs, u}, {s - hs, u}, {s, u + hu}, {s, u - hu}};
            for (const auto& c : cand) {
                double cs = std::clamp(c[0], box[0][0], box[0][1]);
                double cu = std::clamp(c[1], box[1][0], box[1][1]);
                double cf = distance(patch.at(cs, cu), target);
                if (cf < fv) {
                    s = cs;
                    u = cu;
                    fv = cf;
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                hs *= 0.5;
                hu *= 0.5;
                if (fv < 1e-3 * rad || (hs < 1e-14 && hu < 1e-14)) break;
            }
        }
        if (fv > 0.45 * rad) return false;
        found = patch.at(s, u);
        return true;
    };

    // sanity probe: a frame that cannot reach its own strata falls back to
    // plain anchored pulls (kinked composed patches defeat the Jacobian)
    for (std::size_t vi = 0; vi < viable.size(); ++vi) {
        AnchorFrame& fr = frames[vi];
        if (!fr.usable) continue;
        const Patch& patch = rep.patches[viable[vi]];
        const double mid = 0.5 * (lo + hi);
        int hits = 0, tries = 0;
        for (int sgn : {1, -1}) {
            Vec found;
            ++tries;
            if (solve_toward(patch, fr, p + fr.b0 * (sgn * mid), mid, found)) ++hits;
            if (fr.rank == 2) {
                ++tries;
                if (solve_toward(patch, fr, p + fr.b1 * (sgn * mid), mid, found)) ++hits;
            }
        }
        if (2 * hits < tries) fr.usable = false;
    }

    for (int i = 0; i < budget && static_cast<int>(out.size()) < count; ++i) {
        std::size_t vi = static_cast<std::size_t>(i) % viable.size();
        const Patch& patch = rep.patches[viable[vi]];
        const auto& box = patch.box;
        const int stratum = slots[vi] % per_patch;
        bool accepted = false;
        auto push_checked = [&](const Vec& x) {
            double r = distance(x, p);
            if (r < lo || r > hi) return;
            if (opts.accept_filter && !opts.accept_filter(x)) return;
            out.push_back({x, 0.0});
            accepted = true;
        };
        if (patch.conical && at_origin) {
            double s = box[0][0] +
                       (box[0][1] - box[0][0]) *
                           std::fmod(static_cast<double>(stratum) + offsets[vi],
                                     static_cast<double>(per_patch)) /
                           per_patch;
            double bn = patch.cone_base(s).norm();
            if (bn > 0.0) {
                double u = rng.uniform(lo, hi) / bn;
                if (u >= box[1][0] && u <= box[1][1]) push_checked(patch.cone_base(s) * u);
            }
        } else if (frames[vi].usable) {
            // stratified landing direction in the anchored tangent frame
            const AnchorFrame& fr = frames[vi];
            double rad = rng.uniform(lo, hi);
            Vec d;
            if (fr.rank == 2) {
                double az = 2.0 * M_PI * (static_cast<double>(stratum) + offsets[vi]) / per_patch;
                d = fr.b0 * std::cos(az) + fr.b1 * std::sin(az);
            } else {
                d = fr.b0 * (stratum % 2 == 0 ? 1.0 : -1.0);
            }
            Vec found;
            if (solve_toward(patch, fr, p + d * rad, rad, found)) push_checked(found);
        } else {
            // stratified first parameter plus a pull toward the anchor
            double s = box[0][0] + (box[0][1] - box[0][0]) *
                                       (static_cast<double>(stratum) + rng.uniform()) / per_patch;
            double u = patch.pdim == 2 ? rng.uniform(box[1][0], box[1][1]) : 0.0;
            Vec x = patch.at(s, u);
            double rho = distance(x, p);
            if (rho >= lo && rho <= hi) {
                push_checked(x);
            } else if (patch.anchor && rho > lo) {
                const double as = (*patch.anchor)[0], au = (*patch.anchor)[1];
                double target = rng.uniform(lo, std::min(hi, rho));
                if (distance(patch.at(as, au), p) <= target) {
                    double la = 0.0, lb = 1.0;
                    for (int bi = 0; bi < 60; ++bi) {
                        double lm = 0.5 * (la + lb);
                        double rm =
                            distance(patch.at(as + lm * (s - as), au + lm * (u - au)), p);
                        if (rm < target)
                            la = lm;
                        else
                            lb = lm;
                    }
                    push_checked(patch.at(as + lb * (s - as), au + lb * (u - au)));
                }
            }
        }
        if (accepted || ++fails[vi] >= fail_cap) {
            ++slots[vi];
            fails[vi] = 0;
        }
    }
}

void sample_shell_pointcloud(const SetGerm& germ, double lo, double hi, int count,
                             const SamplerOptions& opts, std::vector<ShellPoint>& out) {
    const auto& rep = std::get<PointCloudRep>(germ.rep);
    for (const auto& [scale, pts] : rep.per_scale) {
        (void)scale;
        for (const auto& x : pts) {
            if (static_cast<int>(out.size()) >= count) return;
            double r = distance(x, germ.base_point);
            if (r < lo || r > hi) continue;
            if (opts.accept_filter && !opts.accept_filter(x)) continue;
            out.push_back({x, 0.0});
        }
    }
}

void sample_shell_image(const SetGerm& germ, double lo, double hi, double tol_scale, int count,
                        Rng& rng, const SamplerOptions& opts, std::vector<ShellPoint>& out) {
    const auto& rep = std::get<ImageRep>(germ.rep);
    const double L = std::max(1e-9, rep.map.lip_estimate);
    const double Li = std::max(1e-9, rep.map.inv_lip_estimate);
    const Vec p = germ.base_point;
    const Vec p_in = rep.map.has_inverse() ? rep.map.inverse(p) : rep.inner->base_point;

    // one wide inner shell covering the whole preimage radius range; shell
    // membership of the mapped point rides along as the acceptance filter so
    // the inner stratification keeps every angular sector covered
    SetGerm inner = rebase(*rep.inner, p_in);
    auto fwd = rep.map.forward;
    auto outer_filter = opts.accept_filter;
    SamplerOptions inner_opts = opts;
    inner_opts.accept_filter = [fwd, p, lo, hi, outer_filter](const Vec& x) {
        Vec y = fwd(x);
        double r = distance(y, p);
        if (r < lo || r > hi) return false;
        return !outer_filter || outer_filter(y);
    };
    // the map distorts angular pitch by up to L * Li, so the inner run uses
    // proportionally more strata; all of them are returned and downstream
    // deduplication absorbs the surplus in the compressed sectors
    const bool isometric = std::fabs(L - 1.0) < 1e-12 && std::fabs(Li - 1.0) < 1e-12;
    const int boost = isometric ? 1 : std::clamp(static_cast<int>(std::ceil(L * Li)), 1, 8);
    const double in_lo = isometric ? lo : lo / L * 0.95;
    const double in_hi = isometric ? hi : hi * Li * 1.05;
    std::vector<ShellPoint> inner_pts;
    sample_shell(inner, in_lo, in_hi, tol_scale, count * boost, rng, inner_opts, inner_pts);
    for (const auto& sp : inner_pts) out.push_back({fwd(sp.x), sp.residual * L});
}

void sample_shell(const SetGerm& germ, double lo, double hi, double tol_scale, int count, Rng& rng,
                  const SamplerOptions& opts, std::vector<ShellPoint>& out) {
    if (germ.is_implicit())
        sample_shell_implicit(germ, lo, hi, tol_scale, count, rng, opts, out);
    else if (germ.is_parametric())
        sample_shell_parametric(germ, lo, hi, tol_scale, count, rng, opts, out);
    else if (std::holds_alternative<PointCloudRep>(germ.rep))
        sample_shell_pointcloud(germ, lo, hi, count, opts, out);
    else
        sample_shell_image(germ, lo, hi, tol_scale, count, rng, opts, out);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<AnnulusSample> sample_annulus(const SetGerm& germ, const ScaleSchedule& schedule,
                                          int count_per_shell, std::uint64_t seed,
                                          const SamplerOptions& opts) {
    schedule.validate();
    if (count_per_shell < 1)
        throw std::invalid_argument("sample_annulus: count_per_shell must be >= 1");
    std::vector<AnnulusSample> out;
    for (int k = 0; k < schedule.count; ++k) {
        double r = schedule.scale(k);
        double lo = r * (1.0 - schedule.shell_width);
        double hi = r * (1.0 + schedule.shell_width);
        Rng rng(seed + static_cast<std::uint64_t>(k));
        std::vector<ShellPoint> pts;
        sample_shell(germ, lo, hi, r, count_per_shell, rng, opts, pts);
        AnnulusSample shell;
        shell.scale = r;
        for (const auto& sp : pts) {
            shell.points.push_back(sp.x);
            shell.residuals.push_back(sp.residual);
        }
        shell.warning = shell.points.empty();
        out.push_back(std::move(shell));
    }
    return out;
}

namespace {

NearestPoint nearest_implicit(const ImplicitRep& rep, int dim, const Point& x,
                              double scale_hint) {
    NearestPoint best;
    best.dist = kInf;
    Rng rng(0xD157);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Vec x0 =
            attempt == 0 ? x : x + rng.direction(dim) * (0.5 * scale_hint * (1 << (attempt % 3)));
        Proj pr = project_implicit(rep, x0, scale_hint);
        if (!pr.ok || pr.dist_est > 0.05 * scale_hint) continue;
        if (!inequalities_ok(rep, pr.x, 1e-9 * std::max(1.0, scale_hint))) continue;
        double d = distance(pr.x, x) + pr.dist_est;
        if (d < best.dist) {
            best.dist = d;
            best.witness = pr.x;
            best.found = true;
        }
    }
    // boundary fallback: equalities plus active inequality as equality
    for (const auto& g : rep.inequalities) {
        ImplicitRep brep = rep;
        brep.equalities.push_back(g);
        brep.inequalities.clear();
        Proj pr = project_implicit(brep, x, scale_hint);
        if (!pr.ok || pr.dist_est > 0.05 * scale_hint) continue;
        if (!inequalities_ok(rep, pr.x, 1e-9 * std::max(1.0, scale_hint))) continue;
        double d = distance(pr.x, x) + pr.dist_est;
        if (d < best.dist) {
            best.dist = d;
            best.witness = pr.x;
            best.found = true;
        }
    }
    return best;
}

}  // namespace

NearestPoint nearest_point(const SetGerm& germ, const Point& x, double scale_hint) {
    if (!(scale_hint > 0.0)) throw std::invalid_argument("nearest_point: scale_hint must be > 0");
    NearestPoint best;
    best.dist = kInf;

    if (germ.is_implicit()) {
        best = nearest_implicit(germ.implicit(), germ.dim, x, scale_hint);
    } else if (germ.is_parametric()) {
        for (const auto& patch : germ.parametric().patches) {
            PatchHit hit = patch_nearest(patch, x);
            if (hit.dist < best.dist) {
                best.dist = hit.dist;
                best.witness = hit.witness;
                best.found = true;
            }
        }
    } else if (std::holds_alternative<PointCloudRep>(germ.rep)) {
        const auto& rep = std::get<PointCloudRep>(germ.rep);
        for (const auto& [scale, pts] : rep.per_scale) {
            (void)scale;
            for (const auto& q : pts) {
                double d = distance(q, x);
                if (d < best.dist) {
                    best.dist = d;
                    best.witness = q;
                    best.found = true;
                }
            }
        }
    } else {
        const auto& rep = std::get<ImageRep>(germ.rep);
        if (rep.composed) {
            best = nearest_implicit(*rep.composed, germ.dim, x, scale_hint);
        } else if (rep.map.has_inverse()) {
            Vec x_in = rep.map.inverse(x);
            NearestPoint np =
                nearest_point(*rep.inner, x_in, scale_hint * rep.map.inv_lip_estimate);
            if (np.found) {
                best.witness = rep.map.forward(np.witness);
                best.dist = distance(best.witness, x);
                best.found = true;
                // local polish around the inner witness
                SetGerm local = rebase(*rep.inner, np.witness);
                double r = std::max(1e-6 * scale_hint, 0.05 * scale_hint);
                Rng rng(0xF0CA1);
                for (int round = 0; round < 3; ++round) {
                    std::vector<ShellPoint> pts;
                    SamplerOptions so;
                    sample_shell(local, r * 0.2, r, scale_hint, 40, rng, so, pts);
                    for (const auto& sp : pts) {
                        Vec y = rep.map.forward(sp.x);
                        double d = distance(y, x);
                        if (d < best.dist) {
                            best.dist = d;
                            best.witness = y;
                        }
                    }
                    r *= 0.2;
                }
            }
        } else {
            // sampled fallback with densification near the best hit
            Rng rng(0xF0CA2);
            double rad = distance(x, germ.base_point);
            SamplerOptions so;
            std::vector<ShellPoint> pts;
            double L = std::max(1.0, rep.map.lip_estimate);
            double Li = std::max(1.0, rep.map.inv_lip_estimate);
            sample_shell(germ, rad / (L * Li) * 0.5, rad * L * Li + scale_hint, scale_hint, 400,
                         rng, so, pts);
            for (const auto& sp : pts) {
                double d = distance(sp.x, x);
                if (d < best.dist) {
                    best.dist = d;
                    best.witness = sp.x;
                    best.found = true;
                }
            }
        }
    }
    if (best.dist > 10.0 * scale_hint) best.found = false;
    return best;
}

double distance_to_germ(const SetGerm& germ, const Point& x, double scale_hint) {
    NearestPoint np = nearest_point(germ, x, scale_hint);
    return np.found ? np.dist : kInf;
}

SetGerm rebase(const SetGerm& germ, const Point& q) {
    SetGerm out = germ;
    out.base_point = q;
    if (out.is_parametric()) {
        auto& rep = std::get<ParametricRep>(out.rep);
        for (auto& patch : rep.patches) {
            PatchHit hit = patch_nearest(patch, q);
            patch.reach_hint = hit.dist;
            if (hit.dist <= 1e-6 * std::max(1.0, q.norm()))
                patch.anchor = {{hit.s, hit.u}};
            else
                patch.anchor.reset();
        }
    } else if (std::holds_alternative<ImageRep>(out.rep)) {
        auto& rep = std::get<ImageRep>(out.rep);
        if (!rep.map.has_inverse())
            throw std::invalid_argument("rebase: image germ lacks an inverse map");
        auto inner = std::make_shared<SetGerm>(rebase(*rep.inner, rep.map.inverse(q)));
        rep.inner = inner;
    }
    return out;
}

SetGerm pushforward_germ(const LipschitzMap& h, const SetGerm& germ) {
    if (h.dim != germ.dim) throw std::invalid_argument("pushforward_germ: dimension mismatch");
    SetGerm out;
    out.dim = germ.dim;
    out.base_point = h.forward(germ.base_point);
    out.id = h.name + "(" + germ.id + ")";

    if (germ.is_implicit() && h.has_inverse()) {
        auto rep = std::make_shared<ImplicitRep>();
        const auto& in = germ.implicit();
        auto hinv = h.inverse;
        for (const auto& e : in.equalities)
            rep->equalities.push_back([e, hinv](const Vec& y) { return e(hinv(y)); });
        for (const auto& g : in.inequalities)
            rep->inequalities.push_back([g, hinv](const Vec& y) { return g(hinv(y)); });
        out.defining_residuals = rep->equalities;
        out.rep = ImageRep{std::make_shared<SetGerm>(germ), h, std::move(rep)};
        return out;
    }
    if (germ.is_parametric()) {
        ParametricRep rep = germ.parametric();
        for (auto& patch : rep.patches) {
            auto inner_map = patch.map;
            auto fwd = h.forward;
            patch.map = [inner_map, fwd](double s, double u) { return fwd(inner_map(s, u)); };
            if (patch.conical) {
                if (h.linear) {
                    auto base = patch.cone_base;
                    patch.cone_base = [base, fwd](double s) { return fwd(base(s)); };
                } else {
                    patch.conical = false;
                    patch.cone_base = nullptr;
                }
            }
        }
        out.rep = std::move(rep);
        return out;
    }
    if (std::holds_alternative<PointCloudRep>(germ.rep)) {
        PointCloudRep rep = std::get<PointCloudRep>(germ.rep);
        for (auto& [scale, pts] : rep.per_scale)
            for (auto& x : pts) x = h.forward(x);
        out.rep = std::move(rep);
        return out;
    }
    if (std::holds_alternative<ImageRep>(germ.rep)) {
        const auto& in = std::get<ImageRep>(germ.rep);
        std::shared_ptr<ImplicitRep> composed;
        if (in.composed && h.has_inverse()) {
            composed = std::make_shared<ImplicitRep>();
            auto hinv = h.inverse;
            for (const auto& e : in.composed->equalities)
                composed->equalities.push_back([e, hinv](const Vec& y) { return e(hinv(y)); });
            for (const auto& g : in.composed->inequalities)
                composed->inequalities.push_back([g, hinv](const Vec& y) { return g(hinv(y)); });
            out.defining_residuals = composed->equalities;
        }
        out.rep = ImageRep{in.inner, compose_maps({in.map, h}), composed};
        return out;
    }
    out.rep = ImageRep{std::make_shared<SetGerm>(germ), h, nullptr};
    return out;
}

}  // namespace dirgeo

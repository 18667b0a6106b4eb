#pragma once

// Antipeak-function checking and the mean-value certificate.
//
// A strong antipeak at infinity is a bounded continuous positive psh
// function tending to 0 at infinity. antipeak_check verifies the measurable
// surrogates on samples: positivity margin, global bound C, the decay table
// c_R = sup outside B_R, and the sub-mean-value property on random complex
// lines. mean_value_certificate rasterizes the component U of
// f^{-1}(f(Delta_k) cap B_R) through 0, estimates the harmonic measure of
// cl(U) cap dDelta_k by walk-on-spheres against the rasterized inner
// boundary, and evaluates both sides of alpha <= C e + c_R (1 - e).

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wermerlab/disks.hpp"
#include "wermerlab/harmonic.hpp"
#include "wermerlab/kobayashi.hpp"
#include "wermerlab/raster.hpp"
#include "wermerlab/rng.hpp"

namespace wermerlab {

using ScalarField = std::function<double(const Point3&)>;
using PointSampler = std::function<Point3(Rng&)>;
using FarSampler = std::function<Point3(double R, Rng&)>;

inline double point_norm(const Point3& p, int dim) {
    double n2 = 0.0;
    for (int i = 0; i < dim; ++i) n2 += std::norm(p[i]);
    return std::sqrt(n2);
}

/// |h| of a holomorphic witness as an antipeak candidate.
inline ScalarField modulus_candidate(std::function<cplx(const Point3&)> h) {
    return [h = std::move(h)](const Point3& p) { return std::abs(h(p)); };
}

struct DecayEntry {
    double R = 0.0;
    double c_R = 0.0;  // sampled sup of the candidate outside B_R
    long samples = 0;
};

struct CoreProbe {
    double min_value = kInf;
    double max_value = -kInf;
    bool decays_on_core = false;  // positive candidate decaying along the core is inconsistent
};

struct AntipeakReport {
    double positivity_margin = kInf;  // min sampled value
    double upper_bound = -kInf;       // max sampled value (the constant C)
    std::vector<DecayEntry> decay_profile;
    long psh_violations = 0;
    long psh_lines = 0;
    long samples = 0;
    bool decays = false;  // last c_R below a tenth of the bound
    std::optional<CoreProbe> core_probe;
};

struct AntipeakOptions {
    int interior_samples = 2000;
    int far_samples = 1500;  // per decay radius
    int line_checks = 400;
    double line_radius = 0.05;
    int circle_points = 24;
    double psh_slack = 1e-6;
    double core_decay_threshold = 1e-3;
};

inline AntipeakReport antipeak_check(const Membership& inside, const ScalarField& phi, int dim,
                                     const PointSampler& sampler, const FarSampler& far_sampler,
                                     const std::vector<double>& radii, std::uint64_t seed,
                                     const AntipeakOptions& opts = {},
                                     const std::vector<Point3>& core_samples = {}) {
    AntipeakReport rep;
    Rng rng = Rng::stream(seed, 0xa17e);
    std::vector<Point3> pts;
    pts.reserve(opts.interior_samples);
    for (int i = 0; i < opts.interior_samples; ++i) {
        const Point3 p = sampler(rng);
        if (!inside(p)) continue;
        pts.push_back(p);
        const double v = phi(p);
        rep.positivity_margin = std::min(rep.positivity_margin, v);
        rep.upper_bound = std::max(rep.upper_bound, v);
        ++rep.samples;
    }
    double prev_R = -kInf;
    for (double R : radii) {
        if (R <= prev_R) throw std::invalid_argument("antipeak_check: radii must increase");
        prev_R = R;
        DecayEntry entry;
        entry.R = R;
        for (int i = 0; i < opts.far_samples; ++i) {
            const Point3 p = far_sampler(R, rng);
            if (!inside(p) || point_norm(p, dim) < R) continue;
            entry.c_R = std::max(entry.c_R, phi(p));
            rep.upper_bound = std::max(rep.upper_bound, phi(p));
            ++entry.samples;
        }
        rep.decay_profile.push_back(entry);
    }
    // sub-mean-value on random complex lines (psh surrogate)
    for (int i = 0; i < opts.line_checks && !pts.empty(); ++i) {
        const Point3 p = pts[rng.below(pts.size())];
        Point3 u{0.0, 0.0, 0.0};
        double n2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            u[c] = rng.gauss_c();
            n2 += std::norm(u[c]);
        }
        const double t = opts.line_radius * rng.uniform(0.2, 1.0) / std::sqrt(n2);
        double mean = 0.0;
        bool usable = true;
        for (int a = 0; a < opts.circle_points; ++a) {
            const double th = 6.283185307179586 * a / opts.circle_points;
            const cplx e = t * cplx(std::cos(th), std::sin(th));
            Point3 q = p;
            for (int c = 0; c < dim; ++c) q[c] += e * u[c];
            if (!inside(q)) {
                usable = false;
                break;
            }
            mean += phi(q);
        }
        if (!usable) continue;
        mean /= opts.circle_points;
        ++rep.psh_lines;
        if (phi(p) > mean + opts.psh_slack) ++rep.psh_violations;
    }
    if (!rep.decay_profile.empty() && rep.upper_bound > 0.0)
        rep.decays = rep.decay_profile.back().c_R < 0.1 * rep.upper_bound;
    if (!core_samples.empty()) {
        CoreProbe probe;
        for (const Point3& p : core_samples) {
            const double v = phi(p);
            probe.min_value = std::min(probe.min_value, v);
            probe.max_value = std::max(probe.max_value, v);
        }
        // a candidate that is positive yet decays below threshold along the
        // unbounded core samples cannot be constant there: inconsistent
        probe.decays_on_core =
            probe.min_value < opts.core_decay_threshold * std::max(1.0, probe.max_value);
        rep.core_probe = probe;
    }
    return rep;
}

// ---- mean-value certificate ---------------------------------------------------

struct MvcReport {
    double alpha = 0.0;    // phi at f(0)
    double epsilon = 0.0;  // omega(0, cl(U) cap dDelta_k, U)
    double eps_stderr = 0.0;
    double rhs = 0.0;  // C eps + c_R (1 - eps)
    double slack = 0.0;
    long inner_boundary_cells = 0;
    bool violated = false;  // alpha > rhs beyond 3 sigma: computation bug
};

struct MvcOptions {
    int raster_cells = 192;
    long walkers = 20000;
    long max_steps = 200000;
    int verify_grid = 128;
};

inline MvcReport mean_value_certificate(const HoloDisk& f, const Membership& inside,
                                        const ScalarField& phi, double k, double R, double C,
                                        double c_R, std::uint64_t seed,
                                        const MvcOptions& opts = {}) {
    if (!(k > 0.0) || !(R > 0.0)) throw std::invalid_argument("mvc: k, R > 0");
    // pre: f maps sample points into the domain
    for (int i = 0; i < opts.verify_grid; ++i) {
        const double th = 6.283185307179586 * i / opts.verify_grid;
        const double rr = k * std::sqrt((i + 0.5) / opts.verify_grid);
        if (!inside(f.eval(rr * cplx(std::cos(th), std::sin(th)))))
            throw std::invalid_argument("mvc: disk leaves the domain on samples");
    }
    const int dim = f.dim;
    auto below_R = [&](cplx lam) { return point_norm(f.eval(lam), dim) < R; };
    if (!below_R(0.0)) throw numeric_error("mvc: component extraction failure (|f(0)| >= R)");

    // raster Delta_k and flood the component of {|f| < R} through 0
    DiskRaster raster = rasterize_disk(0.0, k, opts.raster_cells, below_R);
    const int cells = raster.cells;
    const int cx0 = cells / 2, cy0 = cells / 2;
    if (!raster.mark[raster.index(cx0, cy0)])
        throw numeric_error("mvc: raster origin cell not in the sublevel component");
    std::vector<std::uint8_t> in_u(raster.mark.size(), 0);
    std::vector<int> stack{raster.index(cx0, cy0)};
    in_u[stack[0]] = 1;
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        const int x = id % cells, y = id / cells;
        const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (auto& d : nb) {
            const int nx = x + d[0], ny = y + d[1];
            if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) continue;
            const int nid = raster.index(nx, ny);
            if (raster.mark[nid] && !in_u[nid]) {
                in_u[nid] = 1;
                stack.push_back(nid);
            }
        }
    }
    // inner boundary: U-cells adjacent to an inside-but-not-U cell
    std::vector<cplx> cloud;
    for (int y = 0; y < cells; ++y) {
        for (int x = 0; x < cells; ++x) {
            const int id = raster.index(x, y);
            if (!in_u[id]) continue;
            const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (auto& d : nb) {
                const int nx = x + d[0], ny = y + d[1];
                if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) continue;
                const int nid = raster.index(nx, ny);
                if (raster.inside[nid] && !in_u[nid]) {
                    cloud.push_back(raster.cell_center(x, y));
                    break;
                }
            }
        }
    }
    MvcReport rep;
    rep.inner_boundary_cells = static_cast<long>(cloud.size());

    // exact distance transform on the raster; a query inside a cell is within
    // half a cell diagonal of the cell center, so subtracting it keeps the
    // walk-on-spheres step conservative
    const double h = raster.cell_size();
    std::vector<std::uint8_t> edge_seed(raster.mark.size(), 0);
    for (int y = 0; y < cells; ++y) {
        for (int x = 0; x < cells; ++x) {
            const int id = raster.index(x, y);
            if (!in_u[id]) continue;
            const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (auto& dd : nb) {
                const int nx = x + dd[0], ny = y + dd[1];
                if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) continue;
                const int nid = raster.index(nx, ny);
                if (raster.inside[nid] && !in_u[nid]) {
                    edge_seed[id] = 1;
                    break;
                }
            }
        }
    }
    const std::vector<double> edt =
        cloud.empty() ? std::vector<double>() : distance_transform(cells, cells, edge_seed);
    auto cloud_distance = [&](cplx p) {
        if (cloud.empty()) return kInf;
        int bx = std::clamp(static_cast<int>((p.real() + k) / h), 0, cells - 1);
        int by = std::clamp(static_cast<int>((p.imag() + k) / h), 0, cells - 1);
        const double d = edt[static_cast<size_t>(by) * cells + bx] * h;
        return std::max(d - 0.7072 * h, 0.0);
    };

    // walk-on-spheres on U: absorb on the outer circle or the inner cloud
    const double shell = std::max(1e-4 * k, h);
    long circle_hits = 0, used = 0;
    for (long wlk = 0; wlk < opts.walkers; ++wlk) {
        Rng rng = Rng::stream(seed, 0xb0b ^ static_cast<std::uint64_t>(wlk));
        cplx x = 0.0;
        for (long step = 0; step < opts.max_steps; ++step) {
            const double dc = k - std::abs(x);
            const double dcl = cloud_distance(x);
            const double d = std::min(dc, dcl);
            if (d <= shell) {
                ++used;
                if (dc <= dcl) ++circle_hits;
                break;
            }
            x += d * rng.unit();
        }
    }
    rep.epsilon = used > 0 ? static_cast<double>(circle_hits) / used : 0.0;
    rep.eps_stderr = used > 0 ? std::sqrt(rep.epsilon * (1.0 - rep.epsilon) / used) : 0.0;
    rep.alpha = phi(f.eval(0.0));
    rep.rhs = C * rep.epsilon + c_R * (1.0 - rep.epsilon);
    rep.slack = rep.rhs - rep.alpha;
    const double sigma_rhs = std::abs(C - c_R) * rep.eps_stderr;
    rep.violated = rep.alpha > rep.rhs + 3.0 * sigma_rhs + 1e-12;
    return rep;
}

}  // namespace wermerlab

#pragma once

// Harmonic-measure estimation by walk-on-spheres on planar disk domains with
// polygonal slits (pure Dirichlet exits, no reflection), and the
// distance-vs-harmonic-measure inequality check
//
//   dist(0, dU) >= (pi^2 k / 16) * omega(0, cl(U) cap dDelta_k(0), U)^2
//
// for simply connected U inside Delta_k(0) containing 0.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wermerlab/complex_util.hpp"
#include "wermerlab/rng.hpp"

namespace wermerlab {

struct Slit {
    cplx a, b;  // segment endpoints
};

/// Disk of radius R about 0 minus a union of segments.
struct SlitDiskDomain {
    double R = 1.0;
    std::vector<Slit> slits;

    double boundary_distance(cplx x) const {
        double d = R - std::abs(x);
        for (const Slit& s : slits) d = std::min(d, segment_distance(x, s.a, s.b));
        return d;
    }
};

struct ExitEvent {
    bool on_circle = false;
    double angle = 0.0;  // defined when on_circle
    int slit = -1;
    cplx where;
};

using BoundarySubset = std::function<bool(const ExitEvent&)>;

inline BoundarySubset full_boundary() {
    return [](const ExitEvent&) { return true; };
}

inline BoundarySubset circle_part() {
    return [](const ExitEvent& e) { return e.on_circle; };
}

/// Arc theta0 <= angle < theta1 on the outer circle (wrapping allowed).
inline BoundarySubset circle_arc(double theta0, double theta1) {
    return [theta0, theta1](const ExitEvent& e) {
        if (!e.on_circle) return false;
        const double two_pi = 6.283185307179586;
        double a = std::fmod(e.angle - theta0, two_pi);
        if (a < 0) a += two_pi;
        double len = std::fmod(theta1 - theta0, two_pi);
        if (len < 0) len += two_pi;
        if (len == 0.0) len = two_pi;
        return a < len;
    };
}

struct HarmonicMeasureEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long walkers = 0;   // requested
    long used = 0;      // terminated within the step cap
    long dropped = 0;   // hit the step cap; excluded from the estimate
    std::uint64_t seed = 0;
};

struct WosOptions {
    double shell_factor = 1e-4;  // absorption shell = factor * R
    long max_steps = 1'000'000;
};

/// omega(p, subset, domain) by walk-on-spheres; unbiased up to the
/// absorption-shell tolerance, stderr from binomial variance. Walkers use
/// independent streams of the root seed, so the estimate does not depend on
/// evaluation order.
inline HarmonicMeasureEstimate harmonic_measure(const SlitDiskDomain& dom,
                                                const BoundarySubset& subset, cplx p,
                                                long walkers, std::uint64_t seed,
                                                const WosOptions& opts = {}) {
    if (dom.boundary_distance(p) <= 0.0)
        throw std::invalid_argument("harmonic_measure: start point not interior");
    HarmonicMeasureEstimate est;
    est.walkers = walkers;
    est.seed = seed;
    const double shell = opts.shell_factor * dom.R;
    long hits = 0;
    for (long i = 0; i < walkers; ++i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        cplx x = p;
        bool absorbed = false;
        for (long step = 0; step < opts.max_steps; ++step) {
            const double d = dom.boundary_distance(x);
            if (d <= shell) {
                absorbed = true;
                break;
            }
            x += d * rng.unit();
        }
        if (!absorbed) {
            ++est.dropped;
            continue;
        }
        ExitEvent e;
        e.where = x;
        const double dc = dom.R - std::abs(x);
        double ds = kInf;
        int which = -1;
        for (size_t s = 0; s < dom.slits.size(); ++s) {
            const double d = segment_distance(x, dom.slits[s].a, dom.slits[s].b);
            if (d < ds) {
                ds = d;
                which = static_cast<int>(s);
            }
        }
        if (dc <= ds) {
            e.on_circle = true;
            e.angle = std::arg(x);
        } else {
            e.slit = which;
        }
        ++est.used;
        if (subset(e)) ++hits;
    }
    if (est.used > 0) {
        est.value = static_cast<double>(hits) / est.used;
        est.stderr_ = std::sqrt(est.value * (1.0 - est.value) / est.used);
    }
    return est;
}

struct Sh93Report {
    double k = 0.0;
    HarmonicMeasureEstimate omega;  // of cl(U) cap dDelta_k at 0
    double dist = 0.0;              // Euclidean dist(0, dU)
    double bound = 0.0;             // (pi^2 k / 16) omega^2
    double bound_minus_3sigma = 0.0;
    bool pass = false;
};

/// Checks dist(0, dU) >= (pi^2 k / 16) omega^2 - 3 sigma for
/// U = Delta_k(0) minus the given slits (simply connected by construction
/// for radial slits). Rejects geometries where a slit touches the origin.
inline Sh93Report sh93_bound_check(double k, const std::vector<Slit>& slits, long walkers,
                                   std::uint64_t seed, const WosOptions& opts = {}) {
    if (!(k > 0.0)) throw std::invalid_argument("sh93: k > 0 required");
    SlitDiskDomain dom;
    dom.R = k;
    dom.slits = slits;
    for (const Slit& s : slits) {
        if (segment_distance(0.0, s.a, s.b) <= 0.0)
            throw std::invalid_argument("sh93: slit passes through the origin");
        if (std::abs(s.a) > k || std::abs(s.b) > k)
            throw std::invalid_argument("sh93: slit leaves the disk");
    }
    Sh93Report rep;
    rep.k = k;
    rep.omega = harmonic_measure(dom, circle_part(), 0.0, walkers, seed, opts);
    rep.dist = dom.boundary_distance(0.0);
    const double c = 9.869604401089358 * k / 16.0;  // pi^2 k / 16
    rep.bound = c * rep.omega.value * rep.omega.value;
    const double sigma_bound = c * 2.0 * rep.omega.value * rep.omega.stderr_;
    rep.bound_minus_3sigma = rep.bound - 3.0 * sigma_bound;
    rep.pass = rep.dist >= rep.bound_minus_3sigma;
    return rep;
}

}  // namespace wermerlab

#pragma once

// The convex profile rho. Built in three steps from an increasing positive
// sequence c(0), c(1), ...:
//
//   1. rho_1: piecewise affine, rho_1 = c(1) on [0,1]; on (n, n+1] the
//      previous affine piece is kept if it already reaches c(n+1) at n+1,
//      otherwise it is replaced by the chord rising to c(n+1).
//   2. even symmetrization rho~_1(t) = rho_1(|t|), mollified with an even
//      bump supported in [-1/4, 1/4]. The bump is realized as a symmetric
//      quadrature discretization (Simpson nodes times exp(-1/(1-(4s)^2)),
//      normalized), so convexity, evenness and the Jensen bound
//      rho~_1 * chi >= rho_1 hold exactly, not just up to quadrature error.
//   3. + t^2 for strict convexity.
//
// The result satisfies rho(t) > c(n) on (n, n+1] and rho'(0) = 0.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wermerlab/complex_util.hpp"

namespace wermerlab {

struct ConvexProfile {
    std::vector<double> knots;       // rho_1 at integers 0..N
    std::vector<double> slopes;      // affine pieces on (n, n+1], n = 0..N-1
    std::vector<double> intercepts;  // rho_1(t) = slopes[n] t + intercepts[n]
    double mollifier_halfwidth = 0.25;
    bool quadratic = true;
    int mollifier_nodes = 129;

    int horizon() const { return static_cast<int>(slopes.size()); }
};

/// rho == 0 surrogate (tests and flat-domain runs).
inline ConvexProfile zero_profile() {
    ConvexProfile p;
    p.knots = {0.0, 0.0};
    p.slopes = {0.0};
    p.intercepts = {0.0};
    p.quadratic = false;
    return p;
}

inline ConvexProfile build_rho1(const std::vector<double>& c, int N) {
    if (N < 1) throw std::invalid_argument("build_rho1: horizon N >= 1");
    if (static_cast<int>(c.size()) < N + 1)
        throw std::invalid_argument("build_rho1: need c(0)..c(N)");
    for (size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] > 0.0)) throw std::invalid_argument("build_rho1: c must be positive");
        if (i > 0 && !(c[i] > c[i - 1]))
            throw std::invalid_argument("build_rho1: c must be strictly increasing");
    }
    ConvexProfile p;
    p.slopes.assign(N, 0.0);
    p.intercepts.assign(N, 0.0);
    p.knots.assign(N + 1, 0.0);
    p.slopes[0] = 0.0;
    p.intercepts[0] = c[1];
    p.knots[0] = c[1];
    p.knots[1] = c[1];
    for (int n = 1; n < N; ++n) {
        const double a = p.slopes[n - 1], b = p.intercepts[n - 1];
        const double value_n = a * n + b;
        if (a * (n + 1) + b >= c[n + 1]) {
            p.slopes[n] = a;
            p.intercepts[n] = b;
        } else {
            // chord from (n, rho_1(n)) to (n+1, c(n+1))
            p.slopes[n] = c[n + 1] - value_n;
            p.intercepts[n] = value_n - p.slopes[n] * n;
        }
        p.knots[n + 1] = p.slopes[n] * (n + 1) + p.intercepts[n];
    }
    return p;
}

inline double rho1_eval(const ConvexProfile& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("rho1_eval: t >= 0 required");
    if (p.slopes.empty()) return 0.0;
    int idx = (t <= 1.0) ? 0 : static_cast<int>(std::ceil(t)) - 1;
    // beyond the horizon the last affine piece extends rho_1 (keeps convexity;
    // the true induction would only be steeper)
    idx = std::min(idx, p.horizon() - 1);
    return p.slopes[idx] * t + p.intercepts[idx];
}

namespace detail {

struct MollifierRule {
    std::vector<double> offsets;  // symmetric nodes in [-h, h]
    std::vector<double> weights;  // nonnegative, sum exactly normalized to 1
};

inline MollifierRule make_mollifier_rule(double halfwidth, int nodes) {
    if (nodes < 5 || nodes % 2 == 0)
        throw std::invalid_argument("mollifier: odd node count >= 5 required");
    MollifierRule rule;
    rule.offsets.resize(nodes);
    rule.weights.resize(nodes);
    const int mid = (nodes - 1) / 2;
    const double step = halfwidth / mid;
    double total = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double s = (i - mid) * step;  // exactly antisymmetric node layout
        rule.offsets[i] = s;
        const double u = s / halfwidth;
        const double bump = (std::abs(u) < 1.0) ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
        double simpson = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[i] = simpson * bump;
        total += rule.weights[i];
    }
    for (double& w : rule.weights) w /= total;
    return rule;
}

inline const MollifierRule& mollifier_rule(const ConvexProfile& p) {
    thread_local double cached_h = -1.0;
    thread_local int cached_n = -1;
    thread_local MollifierRule cached;
    if (cached_h != p.mollifier_halfwidth || cached_n != p.mollifier_nodes) {
        cached = make_mollifier_rule(p.mollifier_halfwidth, p.mollifier_nodes);
        cached_h = p.mollifier_halfwidth;
        cached_n = p.mollifier_nodes;
    }
    return cached;
}

}  // namespace detail

/// rho(t) = (rho~_1 * chi)(t) + t^2.
inline double rho_eval(const ConvexProfile& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("rho_eval: t >= 0 required");
    if (p.slopes.empty()) return p.quadratic ? t * t : 0.0;
    const auto& rule = detail::mollifier_rule(p);
    double conv = 0.0;
    for (size_t i = 0; i < rule.offsets.size(); ++i)
        conv += rule.weights[i] * rho1_eval(p, std::abs(t - rule.offsets[i]));
    return conv + (p.quadratic ? t * t : 0.0);
}

struct RhoCheckReport {
    bool ok = false;
    // rho(t) - c(n) minima over the sampled grids
    double worst_lemma_margin = kInf;   // over (n, n+1], n = 0..lemma_n_max
    double worst_conveq_margin = kInf;  // over [n-1, n+2], n = 1..conveq_n_max
    double lemma_witness_t = 0.0;
    int lemma_witness_n = -1;
    double conveq_witness_t = 0.0;
    int conveq_witness_n = -1;
};

/// Grid check of the two profile inequalities against the supplied sequence:
/// rho > c(n) on (n, n+1] (strict, margin >= 1e-12 expected) and
/// rho >= c(n) on [n-1, n+2].
inline RhoCheckReport rho_check(const ConvexProfile& p, const std::vector<double>& c,
                                int lemma_n_max, int conveq_n_max, double step = 1e-2) {
    RhoCheckReport rep;
    for (int n = 0; n <= lemma_n_max; ++n) {
        if (n >= static_cast<int>(c.size())) break;
        const long cells = std::lround(1.0 / step);
        for (long i = 1; i <= cells; ++i) {
            const double t = n + static_cast<double>(i) / cells;
            const double margin = rho_eval(p, t) - c[n];
            if (margin < rep.worst_lemma_margin) {
                rep.worst_lemma_margin = margin;
                rep.lemma_witness_t = t;
                rep.lemma_witness_n = n;
            }
        }
    }
    for (int n = 1; n <= conveq_n_max; ++n) {
        if (n >= static_cast<int>(c.size())) break;
        const long cells = std::lround(3.0 / step);
        for (long i = 0; i <= cells; ++i) {
            const double t0 = std::max(0.0, static_cast<double>(n - 1));
            const double t = t0 + (n + 2.0 - t0) * static_cast<double>(i) / cells;
            const double margin = rho_eval(p, t) - c[n];
            if (margin < rep.worst_conveq_margin) {
                rep.worst_conveq_margin = margin;
                rep.conveq_witness_t = t;
                rep.conveq_witness_n = n;
            }
        }
    }
    rep.ok = rep.worst_lemma_margin >= 1e-12 && rep.worst_conveq_margin >= 0.0;
    return rep;
}

inline void validate_profile(const ConvexProfile& p) {
    if (p.slopes.size() != p.intercepts.size())
        throw std::invalid_argument("profile: slope/intercept size mismatch");
    if (p.knots.size() != p.slopes.size() + 1)
        throw std::invalid_argument("profile: knot count must be horizon + 1");
    for (size_t n = 0; n < p.slopes.size(); ++n) {
        if (n > 0 && p.slopes[n] < p.slopes[n - 1] - 1e-12)
            throw std::invalid_argument("profile: slopes must be nondecreasing");
        const double v = p.slopes[n] * (n + 1.0) + p.intercepts[n];
        if (std::abs(v - p.knots[n + 1]) > 1e-9 * (1.0 + std::abs(v)))
            throw std::invalid_argument("profile: knots inconsistent with affine pieces at n=" +
                                        std::to_string(n));
        if (p.knots[n] < -1e-12) throw std::invalid_argument("profile: rho_1 must be >= 0");
    }
}

}  // namespace wermerlab

#pragma once

// Branches of the multivalued function  w = sum_{j<=m} eps_j sqrt(z - a_j).
//
// The value multiset at a point is { sum eps_j s_j sqrt(z - a_j) : s in
// {+-1}^m } with per-term principal roots, and is enumerated by Gray code.
// Tracking *which* branch along a curve is analytic continuation: each term
// continues independently, and a step of length at most 0.45 * dist(z, a_j)
// keeps the nearest-square-root selection unambiguous (the wrong root is at
// least three times as far).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "wermerlab/complex_util.hpp"
#include "wermerlab/lattice.hpp"
#include "wermerlab/schedule.hpp"

namespace wermerlab {

// Normalizes signed zeros so the principal determination does not depend on
// how a point on the real axis was produced.
inline cplx canon(cplx z) {
    double re = z.real(), im = z.imag();
    if (re == 0.0) re = 0.0;
    if (im == 0.0) im = 0.0;
    return cplx(re, im);
}

struct BranchSignature {
    std::vector<int> signs;  // each +1 or -1
    cplx reference;

    int level() const { return static_cast<int>(signs.size()); }

    static BranchSignature all_plus(int level, cplx reference) {
        return BranchSignature{std::vector<int>(level, 1), reference};
    }
};

inline void validate_signature(const BranchSignature& sig) {
    if (sig.signs.empty()) throw std::invalid_argument("signature: empty");
    for (int s : sig.signs)
        if (s != 1 && s != -1) throw std::invalid_argument("signature: signs must be +-1");
    for (int j = 1; j <= sig.level(); ++j)
        if (std::abs(sig.reference - spiral_point(j)) == 0.0)
            throw std::invalid_argument("signature: reference sits on a branch point");
}

struct ContinuationPath {
    std::vector<cplx> waypoints;
    double max_step = kInf;

    static ContinuationPath straight(cplx a, cplx b, int segments = 1) {
        ContinuationPath p;
        p.waypoints.reserve(segments + 1);
        for (int i = 0; i <= segments; ++i) {
            const double t = static_cast<double>(i) / segments;
            p.waypoints.push_back(canon(i == segments ? b : a + t * (b - a)));
        }
        return p;
    }

    /// Closed circle around `center`, `turns` anticlockwise turns (negative
    /// for clockwise), starting and ending at angle `start_angle`.
    static ContinuationPath circle(cplx center, double radius, int turns, int samples,
                                   double start_angle = 0.0) {
        ContinuationPath p;
        const int total = samples * std::abs(turns);
        p.waypoints.reserve(total + 1);
        const double sgn = turns >= 0 ? 1.0 : -1.0;
        for (int i = 0; i <= total; ++i) {
            const double th = start_angle + sgn * 6.283185307179586 * i / samples;
            p.waypoints.push_back(canon(center + radius * cplx(std::cos(th), std::sin(th))));
        }
        p.waypoints.back() = p.waypoints.front();  // close exactly
        return p;
    }

    ContinuationPath& append(const ContinuationPath& other) {
        if (!waypoints.empty() && !other.waypoints.empty() &&
            std::abs(waypoints.back() - other.waypoints.front()) > 1e-12)
            throw std::invalid_argument("path append: endpoints do not meet");
        waypoints.insert(waypoints.end(),
                         other.waypoints.begin() + (waypoints.empty() ? 0 : 1),
                         other.waypoints.end());
        return *this;
    }
};

struct ContinuationOptions {
    double branch_clearance = 1e-6;  // minimal allowed distance to any a_j
    double step_fraction = 0.45;     // step length / distance to nearest a_j
    long max_substeps = 4'000'000;   // per path; exceeding is a step-control failure
};

/// Per-term square-root determinations carried along a curve.
struct BranchState {
    cplx z;
    std::vector<cplx> roots;  // roots[j-1]^2 == z - a_j with the tracked sign
};

inline BranchState branch_state_at(const BranchSignature& sig) {
    validate_signature(sig);
    BranchState st;
    st.z = canon(sig.reference);
    st.roots.resize(sig.level());
    for (int j = 1; j <= sig.level(); ++j)
        st.roots[j - 1] = static_cast<double>(sig.signs[j - 1]) *
                          principal_sqrt(canon(st.z - spiral_point(j)));
    return st;
}

/// Continues `st` along the straight segment to `target`.
inline void continue_state(BranchState& st, cplx target, const ContinuationOptions& opts,
                           long& substep_budget) {
    target = canon(target);
    const int level = static_cast<int>(st.roots.size());
    for (int j = 1; j <= level; ++j) {
        if (segment_distance(spiral_point(j), st.z, target) < opts.branch_clearance)
            throw std::invalid_argument("continuation path too close to branch point a_" +
                                        std::to_string(j));
    }
    while (st.z != target) {
        double dmin = kInf;
        for (int j = 1; j <= level; ++j) dmin = std::min(dmin, std::abs(st.z - spiral_point(j)));
        const double remaining = std::abs(target - st.z);
        cplx next;
        if (remaining <= opts.step_fraction * dmin) {
            next = target;
        } else {
            next = canon(st.z + (opts.step_fraction * dmin / remaining) * (target - st.z));
        }
        for (int j = 1; j <= level; ++j) {
            const cplx p = principal_sqrt(canon(next - spiral_point(j)));
            st.roots[j - 1] = (std::abs(p - st.roots[j - 1]) <= std::abs(-p - st.roots[j - 1]))
                                  ? p
                                  : -p;
        }
        st.z = next;
        if (--substep_budget < 0)
            throw numeric_error("continuation step control failure: substep budget exhausted");
    }
}

inline BranchState continue_along(const EpsilonSchedule& s, const BranchSignature& sig,
                                  const ContinuationPath& path,
                                  const ContinuationOptions& opts = {}) {
    if (path.waypoints.size() < 1) throw std::invalid_argument("empty continuation path");
    if (sig.level() > s.m) throw std::invalid_argument("signature deeper than schedule");
    if (std::abs(path.waypoints.front() - sig.reference) > 1e-12)
        throw std::invalid_argument("path must start at the signature reference point");
    for (size_t i = 0; i + 1 < path.waypoints.size(); ++i)
        if (std::abs(path.waypoints[i + 1] - path.waypoints[i]) > path.max_step)
            throw std::invalid_argument("consecutive waypoints exceed max_step");
    BranchState st = branch_state_at(sig);
    long budget = opts.max_substeps;
    for (size_t i = 1; i < path.waypoints.size(); ++i)
        continue_state(st, path.waypoints[i], opts, budget);
    return st;
}

inline cplx state_value(const EpsilonSchedule& s, const BranchState& st) {
    cplx w = 0.0;
    for (size_t j = 0; j < st.roots.size(); ++j) w += s.eps[j] * st.roots[j];
    return w;
}

inline cplx state_derivative(const EpsilonSchedule& s, const BranchState& st) {
    cplx d = 0.0;
    for (size_t j = 0; j < st.roots.size(); ++j) d += s.eps[j] / (2.0 * st.roots[j]);
    return d;
}

inline cplx state_second_derivative(const EpsilonSchedule& s, const BranchState& st) {
    cplx d = 0.0;
    for (size_t j = 0; j < st.roots.size(); ++j) {
        const cplx v = st.roots[j];
        d -= s.eps[j] / (4.0 * v * v * v);
    }
    return d;
}

/// Signature of the state relative to the principal determination at st.z.
inline BranchSignature state_signature(const BranchState& st) {
    BranchSignature sig;
    sig.reference = st.z;
    sig.signs.resize(st.roots.size());
    for (size_t j = 0; j < st.roots.size(); ++j) {
        const cplx p = principal_sqrt(canon(st.z - spiral_point(static_cast<int>(j) + 1)));
        sig.signs[j] = (std::abs(p - st.roots[j]) <= std::abs(-p - st.roots[j])) ? 1 : -1;
    }
    return sig;
}

/// Analytic continuation of the branch along `path`; value at the endpoint.
inline cplx branch_eval(const EpsilonSchedule& s, const BranchSignature& sig,
                        const ContinuationPath& path, const ContinuationOptions& opts = {}) {
    return state_value(s, continue_along(s, sig, path, opts));
}

/// d/dz of the same branch at the path endpoint.
inline cplx branch_derivative(const EpsilonSchedule& s, const BranchSignature& sig,
                              const ContinuationPath& path,
                              const ContinuationOptions& opts = {}) {
    return state_derivative(s, continue_along(s, sig, path, opts));
}

/// Continuation around a closed loop: the returned signature flips exactly
/// the signs of the terms whose a_j has odd winding number.
inline BranchSignature monodromy(const EpsilonSchedule& s, const BranchSignature& sig,
                                 const ContinuationPath& loop,
                                 const ContinuationOptions& opts = {}) {
    if (loop.waypoints.size() < 2 ||
        std::abs(loop.waypoints.front() - loop.waypoints.back()) > 1e-12)
        throw std::invalid_argument("monodromy: path is not a closed loop");
    BranchState st = continue_along(s, sig, loop, opts);
    BranchSignature out = state_signature(st);
    out.reference = sig.reference;
    return out;
}

/// Direct principal-determination branch value at z (no continuation).
inline cplx branch_value_direct(const EpsilonSchedule& s, const BranchSignature& sig, cplx z) {
    cplx w = 0.0;
    for (int j = 1; j <= sig.level(); ++j)
        w += s.eps_at(j) * static_cast<double>(sig.signs[j - 1]) *
             principal_sqrt(canon(z - spiral_point(j)));
    return w;
}

// ---- Gray-code enumeration of the branch-value multiset --------------------

inline void check_enumerable(int level) {
    if (level < 1 || level > 24)
        throw std::invalid_argument("branch enumeration: level out of range [1,24]");
}

/// Calls fn(value) for each of the 2^level branch values of E_level at z.
template <typename Fn>
inline void for_each_branch_value(const EpsilonSchedule& s, int level, cplx z, Fn&& fn) {
    check_enumerable(level);
    std::vector<cplx> terms(level);
    cplx sum = 0.0;
    for (int j = 1; j <= level; ++j) {
        terms[j - 1] = s.eps_at(j) * principal_sqrt(canon(z - spiral_point(j)));
        sum += terms[j - 1];
    }
    std::vector<int> signs(level, 1);
    fn(sum);
    const std::uint64_t count = 1ULL << level;
    for (std::uint64_t i = 1; i < count; ++i) {
        const int j = std::countr_zero(i);
        sum -= 2.0 * static_cast<double>(signs[j]) * terms[j];
        signs[j] = -signs[j];
        fn(sum);
    }
}

inline std::vector<cplx> branch_values(const EpsilonSchedule& s, int level, cplx z) {
    std::vector<cplx> vals;
    vals.reserve(1ULL << level);
    for_each_branch_value(s, level, z, [&](cplx w) { vals.push_back(w); });
    return vals;
}

/// min over the 2^level branch values of |w - f_s(z)|.
inline double min_branch_distance(const EpsilonSchedule& s, int level, cplx z, cplx w) {
    double best = kInf;
    for_each_branch_value(s, level, z, [&](cplx v) { best = std::min(best, std::abs(w - v)); });
    return best;
}

/// Level-m surrogate of the tube E^delta.
inline bool tube_contains(const EpsilonSchedule& s, int level, double delta, cplx z, cplx w) {
    if (!(delta > 0.0)) throw std::invalid_argument("tube_contains: delta must be positive");
    return min_branch_distance(s, level, z, w) < delta;
}

// ---- closest pair (for the sampled kappa_k infimum) -------------------------

inline double closest_pair_distance(std::vector<cplx> pts) {
    const size_t n = pts.size();
    if (n < 2) throw std::invalid_argument("closest_pair_distance: need two points");
    std::sort(pts.begin(), pts.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    std::multiset<std::pair<double, double>> active;  // (im, re)
    double best = kInf;
    size_t left = 0;
    for (const cplx p : pts) {
        while (left < n && p.real() - pts[left].real() > best) {
            active.erase(active.find({pts[left].imag(), pts[left].real()}));
            ++left;
        }
        auto lo = active.lower_bound({p.imag() - best, -kInf});
        auto hi = active.upper_bound({p.imag() + best, kInf});
        for (auto it = lo; it != hi; ++it)
            best = std::min(best, std::abs(p - cplx(it->second, it->first)));
        active.insert({p.imag(), p.real()});
    }
    return best;
}

// ---- kappa_k: sampled infimum and certified lower bound ---------------------

/// Sampled minimum over |z - a_k| = r of the pairwise branch distances of
/// E_{k-1}. Requires levels 1..k-1 of the schedule.
inline double kappa_circle_min(const EpsilonSchedule& s, int k, double r, int circle_samples) {
    if (k < 2) throw std::invalid_argument("kappa: k >= 2 required");
    check_enumerable(k - 1);
    const cplx ak = spiral_point(k);
    double kappa = kInf;
    for (int i = 0; i < circle_samples; ++i) {
        const double th = 6.283185307179586 * i / circle_samples;
        const cplx z = canon(ak + r * cplx(std::cos(th), std::sin(th)));
        std::vector<cplx> vals = branch_values(s, k - 1, z);
        const double d = closest_pair_distance(std::move(vals));
        if (!(d > 0.0))
            throw numeric_error("kappa_k: duplicated branch values on sampling circle");
        kappa = std::min(kappa, d);
    }
    return kappa;
}

/// Certified log-space lower bound: two branches differing on an index set D
/// with smallest element j0 are at least
///   2 (eps_j0 L_j0 - sum_{j0<j<k} eps_j U_j)
/// apart on the circle, where L/U bound sqrt|z - a_j| from below/above.
inline double log_kappa_lower_bound(const EpsilonSchedule& s, int k, double r) {
    const cplx ak = spiral_point(k);
    std::vector<double> U(k);  // 0.5 log(|a_k - a_j| + r)
    double u_max = -kInf;
    for (int j = 1; j < k; ++j) {
        U[j] = 0.5 * std::log(std::abs(ak - spiral_point(j)) + r);
        u_max = std::max(u_max, U[j]);
    }
    double best = kInf;
    for (int j0 = 1; j0 < k; ++j0) {
        const double dist0 = std::abs(ak - spiral_point(j0));
        const double L = 0.5 * std::log(std::max(dist0 - r, 0.0));
        if (L == -kInf) return -kInf;
        const double base = s.log_eps_at(j0) + L;
        double ratio = 0.0;
        for (int j = j0 + 1; j < k; ++j) {
            // (p-eq) certifies eps_i <= eps_j 2^{-(i-j)}, so the remaining
            // tail is at most twice the current term: stop once negligible
            const double guard = 2.0 * std::exp(s.log_eps_at(j) + u_max - base);
            if (guard < 1e-12) {
                ratio += guard;
                break;
            }
            ratio += std::exp(s.log_eps_at(j) + U[j] - base);
        }
        if (ratio >= 1.0) return -kInf;
        best = std::min(best, std::log(2.0) + base + std::log1p(-ratio));
    }
    return best;
}

// ---- schedule construction ---------------------------------------------------

struct ScheduleBuildOptions {
    double safety = 0.5;        // fraction of the allowed eps_k bound actually used
    int circle_samples = 2048;  // kappa sampling density
    int kappa_exact_cap = 12;   // sampled kappa for k <= cap, certified bound beyond
    double initial_radius = 0.25;
    int max_radius_retries = 6;
};

/// Builds a certified schedule level by level; see the file header for the
/// constraints. Deterministic.
inline EpsilonSchedule build_schedule(int target_m, const ScheduleBuildOptions& opts = {}) {
    if (target_m < 1) throw std::invalid_argument("build_schedule: target_m >= 1");
    if (!(opts.safety > 0.0 && opts.safety < 1.0))
        throw std::invalid_argument("build_schedule: safety in (0,1)");
    EpsilonSchedule s;
    s.m = target_m;
    s.safety = opts.safety;
    s.eps.assign(target_m, 0.0);
    s.log_eps.assign(target_m, 0.0);
    s.radii.assign(target_m, 0.0);
    s.kappas.assign(target_m, 0.0);
    s.log_kappas.assign(target_m, -kInf);
    s.kappa_sampled.assign(target_m, 0);
    s.eps[0] = 1.0;  // eps_1 = 1
    s.log_eps[0] = 0.0;

    for (int k = 2; k <= target_m; ++k) {
        double r = opts.initial_radius;
        double log_kappa = -kInf;
        bool sampled = false;
        int tries = 0;
        for (; tries <= opts.max_radius_retries; ++tries, r *= 0.5) {
            if (k <= opts.kappa_exact_cap) {
                // branch gaps shrink like eps_{k-1}; once they dip under the
                // enumeration roundoff the sampled infimum is meaningless and
                // the certified bound takes over
                const double scale = sup_norm(spiral_point(k)) + 2.0;
                const double floor = 64.0 * std::ldexp(1.0, k - 1) * 8.9e-16 * scale;
                double kap = 0.0;
                try {
                    kap = kappa_circle_min(s, k, r, opts.circle_samples);
                } catch (const numeric_error&) {
                    kap = 0.0;
                }
                if (kap > floor) {
                    log_kappa = std::log(kap);
                    sampled = true;
                    break;
                }
            }
            const double lb = log_kappa_lower_bound(s, k, r);
            if (lb > -kInf) {
                log_kappa = lb;
                break;
            }
        }
        if (log_kappa == -kInf)
            throw numeric_error("build_schedule: failed to certify kappa_" + std::to_string(k) +
                                " > 0 after radius retries");
        s.radii[k - 1] = r;
        s.log_kappas[k - 1] = log_kappa;
        s.kappas[k - 1] = std::exp(log_kappa);
        s.kappa_sampled[k - 1] = sampled ? 1 : 0;

        // (k-eq) bound: eps_k < kappa_k / (4 sqrt(r_k)).
        double bound = log_kappa - std::log(4.0) - 0.5 * std::log(r);
        // (p-eq) bounds: eps_k < eps_p sqrt(r_p) / (2^(k-p+2) sqrt(|a_k-a_p| + r_p)).
        const cplx ak = spiral_point(k);
        for (int p = 2; p < k; ++p) {
            const double b = s.log_shift_scale(p) - (k - p + 2) * std::log(2.0) -
                             0.5 * std::log(std::abs(ak - spiral_point(p)) + s.radius_at(p));
            bound = std::min(bound, b);
        }
        s.log_eps[k - 1] = std::log(opts.safety) + bound;
        s.eps[k - 1] = std::exp(s.log_eps[k - 1]);
        if (!(s.log_eps[k - 1] < s.log_eps[k - 2]))
            throw numeric_error("build_schedule: eps failed to decrease at k=" +
                                std::to_string(k));
    }
    return s;
}

// ---- alpha(n): branch slope bound over the frame S_n -------------------------

struct AlphaEstimate {
    double value = 0.0;
    double frame_spacing = 0.0;
    int circle_points = 0;
    long samples = 0;
};

/// Sampled sup over all 2^level signatures, frame grid points p of S_n and
/// z on the circle |z - p| = 1/8 (max modulus: the disk sup sits on the
/// boundary circle) of |d/dz sum eps_j s_j sqrt(z - a_j)|.
inline AlphaEstimate alpha_bound(const EpsilonSchedule& s, int level, int n,
                                 int frame_density = 6, int circle_points = 16) {
    check_enumerable(level);
    AlphaEstimate est;
    est.frame_spacing = 1.0 / frame_density;
    est.circle_points = circle_points;
    const double h = est.frame_spacing;
    const double outer = n + 0.75;
    std::vector<cplx> terms(level);
    const long steps = static_cast<long>(std::floor(2.0 * outer / h)) + 1;
    double max2 = 0.0;
    for (long ix = 0; ix <= steps; ++ix) {
        const double x = -outer + ix * h;
        for (long iy = 0; iy <= steps; ++iy) {
            const double y = -outer + iy * h;
            const cplx p(x, y);
            if (!s_frame_contains(n, p)) continue;
            for (int c = 0; c <= circle_points; ++c) {
                const cplx z =
                    c == circle_points
                        ? p
                        : canon(p + 0.125 * cplx(std::cos(6.283185307179586 * c / circle_points),
                                                 std::sin(6.283185307179586 * c / circle_points)));
                ++est.samples;
                cplx sum = 0.0;
                for (int j = 1; j <= level; ++j) {
                    terms[j - 1] = s.eps_at(j) / (2.0 * principal_sqrt(canon(z - spiral_point(j))));
                    sum += terms[j - 1];
                }
                max2 = std::max(max2, std::norm(sum));
                if (level >= 2) {
                    // Gray code over signs of terms 2..level (global sign is free).
                    std::vector<int> signs(level, 1);
                    const std::uint64_t count = 1ULL << (level - 1);
                    for (std::uint64_t i = 1; i < count; ++i) {
                        const int j = std::countr_zero(i) + 1;
                        sum -= 2.0 * static_cast<double>(signs[j]) * terms[j];
                        signs[j] = -signs[j];
                        max2 = std::max(max2, std::norm(sum));
                    }
                }
            }
        }
    }
    est.value = std::sqrt(max2);
    return est;
}

/// First index k (within the computed range) with alpha(j) < 1/2 for all
/// j >= k; 0 when the tail never drops below 1/2.
inline int q0_from_alphas(const std::vector<double>& alphas_from_n1) {
    int q0 = 0;
    for (int i = static_cast<int>(alphas_from_n1.size()) - 1; i >= 0; --i) {
        if (alphas_from_n1[i] < 0.5)
            q0 = i + 1;
        else
            break;
    }
    return q0;
}

// ---- shift error --------------------------------------------------------------

/// Shift error of (a delta-tube around) E_m over the anticlockwise circle
/// |z - a_p| = r_p: per-term continuation around the loop flips exactly the
/// terms winding the circle (generically only term p), and the minimum over
/// the 2^m liftings of the endpoint gap follows by sign algebra. For
/// delta > 0 the result is the certified tube bound max(theta_0 - 2 delta, 0).
inline double shift_error(const EpsilonSchedule& s, int p, double delta = 0.0,
                          int circle_samples = 512) {
    if (p < 2 || p > s.m) throw std::invalid_argument("shift_error: need 2 <= p <= m");
    if (delta < 0.0) throw std::invalid_argument("shift_error: delta >= 0 required");
    check_enumerable(s.m);
    const cplx ap = spiral_point(p);
    const double r = s.radius_at(p);
    const ContinuationPath loop = ContinuationPath::circle(ap, r, 1, circle_samples);
    const BranchSignature start = BranchSignature::all_plus(s.m, loop.waypoints.front());
    const BranchState st0 = branch_state_at(start);
    const BranchState st1 = continue_along(s, start, loop);
    std::vector<cplx> flipped_terms;
    for (int j = 0; j < s.m; ++j) {
        const bool flips = std::abs(st1.roots[j] - st0.roots[j]) >
                           std::abs(st1.roots[j] + st0.roots[j]);
        if (flips) flipped_terms.push_back(s.eps[j] * st0.roots[j]);
    }
    double theta = 0.0;
    if (!flipped_terms.empty()) {
        // theta_0 = 2 min over signs of |sum_{j in F} eps_j s_j root_j|.
        cplx sum = 0.0;
        for (cplx t : flipped_terms) sum += t;
        double min2 = std::norm(sum);
        const int f = static_cast<int>(flipped_terms.size());
        std::vector<int> signs(f, 1);
        for (std::uint64_t i = 1; i < (1ULL << (f - 1)); ++i) {
            const int j = std::countr_zero(i) + 1;
            sum -= 2.0 * static_cast<double>(signs[j]) * flipped_terms[j];
            signs[j] = -signs[j];
            min2 = std::min(min2, std::norm(sum));
        }
        theta = 2.0 * std::sqrt(min2);
    }
    return std::max(theta - 2.0 * delta, 0.0);
}

}  // namespace wermerlab

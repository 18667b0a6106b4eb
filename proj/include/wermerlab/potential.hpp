#pragma once

// The level-m potential
//
//   phi_m(z, w) = 2^-m sum_{s in {+-1}^m} log |w - f_s(z)|,
//
// single-valued (the branch multiset is determination independent),
// pluriharmonic off E_m and -inf exactly on it, the defining function
// Psi(rho)(z,w) = exp(phi_m + rho(|Re z|) + rho(|Im z|)), membership tests
// for Omega_Psi and the sublevel sets F_d, and the calibration constants
// kappa(n), q(n), c(n).
//
// Deep schedules make kappa(n) smaller than double range, so tube radii and
// the q(n) shell calibration are carried in logs throughout.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wermerlab/branches.hpp"
#include "wermerlab/profile.hpp"
#include "wermerlab/rng.hpp"

namespace wermerlab {

struct DomainParams {
    EpsilonSchedule schedule;
    int level = 1;  // evaluation truncation of E; every enumeration uses it
    ConvexProfile profile;
};

inline void validate_params(const DomainParams& p) {
    if (p.level < 1 || p.level > p.schedule.m)
        throw std::invalid_argument("DomainParams: level must be in [1, schedule.m]");
    check_enumerable(p.level);
    validate_profile(p.profile);
}

inline double phi_m(const DomainParams& p, cplx z, cplx w) {
    double sum = 0.0;
    for_each_branch_value(p.schedule, p.level, z,
                          [&](cplx v) { sum += std::log(std::abs(w - v)); });
    return std::ldexp(sum, -p.level);  // 2^-m * sum
}

/// log Psi = phi_m + rho(|Re z|) + rho(|Im z|); -inf exactly on E_m.
inline double log_psi(const DomainParams& p, cplx z, cplx w) {
    const double ph = phi_m(p, z, w);
    if (ph == -kInf) return -kInf;
    return ph + rho_eval(p.profile, std::abs(z.real())) + rho_eval(p.profile, std::abs(z.imag()));
}

struct PsiValue {
    double value = 0.0;
    double log_value = -kInf;
    bool overflow = false;
};

inline PsiValue psi_ex(const DomainParams& p, cplx z, cplx w) {
    PsiValue out;
    out.log_value = log_psi(p, z, w);
    if (out.log_value > 709.0) {
        out.value = kInf;
        out.overflow = true;
    } else {
        out.value = out.log_value == -kInf ? 0.0 : std::exp(out.log_value);
    }
    return out;
}

inline double psi(const DomainParams& p, cplx z, cplx w) { return psi_ex(p, z, w).value; }

/// Omega_Psi = { Re zeta > Psi(z, w) }, strict.
inline bool omega_contains(const DomainParams& p, cplx z, cplx w, cplx zeta) {
    return zeta.real() > psi(p, z, w);
}

/// F_d = { Psi < 2d }, strict; compared in logs.
inline bool f_d_contains(const DomainParams& p, double d, cplx z, cplx w) {
    if (!(d > 0.0)) throw std::invalid_argument("f_d_contains: d > 0 required");
    return log_psi(p, z, w) < std::log(2.0 * d);
}

// ---- kappa(n) ----------------------------------------------------------------

struct RegionKappa {
    double value = 0.0;      // may underflow to 0 for deep schedules
    double log_value = kInf; // authoritative
    int count = 0;           // how many levels p with a_p in S~_n entered the min
    int argmin_p = 0;
    bool full_coverage = false;  // schedule reaches every lattice point of S~_n
};

/// kappa(n) = min over p in [2, m] with a_p in S~_n of eps_p sqrt(r_p) / 4.
/// r_1 is never defined, so p = 1 is excluded. Throws when no level of the
/// schedule reaches S~_n.
inline RegionKappa kappa_region(const EpsilonSchedule& s, int n) {
    if (n < 1) throw std::invalid_argument("kappa_region: n >= 1");
    RegionKappa out;
    for (int p = 2; p <= s.m; ++p) {
        if (!s_tilde_contains(n, spiral_point(p))) continue;
        const double lg = s.log_shift_scale(p) - std::log(4.0);
        ++out.count;
        if (lg < out.log_value) {
            out.log_value = lg;
            out.argmin_p = p;
        }
    }
    if (out.count == 0)
        throw std::invalid_argument("kappa_region: schedule too short for region index " +
                                    std::to_string(n));
    const std::int64_t last_needed = (2 * (n + 2) + 1) * static_cast<std::int64_t>(2 * (n + 2) + 1);
    out.full_coverage = s.m >= last_needed;
    out.value = std::exp(out.log_value);
    return out;
}

// ---- q(n): shell calibration ---------------------------------------------------

struct QCalibrationOptions {
    double z_density = 3.0;   // grid points per unit in each coordinate
    int theta_samples = 16;   // shell angles (used when the tube is at double scale)
    double margin = 1.0;      // safety added on top of the sampled sup
    std::vector<double> collision_ring_radii = {1e-1, 1e-2, 1e-3, 1e-4, 1e-6};
    int collision_ring_points = 8;
};

struct QCalibration {
    double q = 0.0;
    double sampled_sup = -kInf;
    double margin = 0.0;
    long shell_points = 0;
    double grid_spacing = 0.0;
};

namespace detail {

// log |Delta + t e^{i theta}| with t given as log t (t may be far below
// double range; whichever of the two magnitudes dominates wins).
inline double log_dist_perturbed(cplx delta, double log_t, double theta) {
    const double ad = std::abs(delta);
    const double log_ad = ad > 0.0 ? std::log(ad) : -kInf;
    if (log_ad > log_t + 36.0) return log_ad;
    if (log_t > log_ad + 36.0) return log_t;
    const double t = std::exp(log_t);
    return std::log(std::abs(delta + t * cplx(std::cos(theta), std::sin(theta))));
}

}  // namespace detail

/// Sampled sup of -phi_m over the boundary shell of the log_tube_radius-tube
/// around E_level, restricted to (S~_n x C), plus a margin. For fixed z the
/// maximum of -phi_m over the tube complement sits on the boundary of the
/// union of branch disks (harmonicity / maximum principle), so shell points
/// falling inside a neighbouring branch disk are skipped. Grid points near
/// branch points are augmented with shrinking rings because the sup
/// concentrates where branches collide.
inline QCalibration calibrate_q(const DomainParams& p, int n, double log_tube_radius,
                                const QCalibrationOptions& opts = {}) {
    if (!(log_tube_radius < kInf)) throw std::invalid_argument("calibrate_q: tube radius");
    QCalibration out;
    out.margin = opts.margin;
    out.grid_spacing = 1.0 / opts.z_density;
    const int m = p.level;
    const std::uint64_t count = 1ULL << m;
    const double inv2m = std::ldexp(1.0, -m);
    const double tube_lin = std::exp(log_tube_radius);  // may underflow to 0

    std::vector<cplx> vals;
    std::vector<double> sum_logs(count);

    auto visit_z = [&](cplx z) {
        vals = branch_values(p.schedule, m, z);
        std::fill(sum_logs.begin(), sum_logs.end(), 0.0);
        bool theta_matters = false;
        for (std::uint64_t a = 0; a < count; ++a) {
            for (std::uint64_t b = a + 1; b < count; ++b) {
                const double d = std::abs(vals[a] - vals[b]);
                double term;
                if (d > 1e9 * tube_lin && d > 0.0) {
                    term = std::log(d);
                } else {
                    // branch values collide at the tube scale; the exact
                    // shell evaluation below redoes these values per angle
                    theta_matters = true;
                    term = std::max(std::log(d), log_tube_radius);
                }
                sum_logs[a] += term;
                sum_logs[b] += term;
            }
        }
        if (!theta_matters) {
            for (std::uint64_t a = 0; a < count; ++a) {
                out.sampled_sup = std::max(out.sampled_sup,
                                           -inv2m * (log_tube_radius + sum_logs[a]));
                ++out.shell_points;
            }
            return;
        }
        // Exact per-angle shell evaluation with the inside-the-union skip.
        for (std::uint64_t a = 0; a < count; ++a) {
            for (int t = 0; t < opts.theta_samples; ++t) {
                const double theta = 6.283185307179586 * t / opts.theta_samples;
                double sum = log_tube_radius;
                bool inside_union = false;
                for (std::uint64_t b = 0; b < count && !inside_union; ++b) {
                    if (b == a) continue;
                    const double lg =
                        detail::log_dist_perturbed(vals[a] - vals[b], log_tube_radius, theta);
                    if (lg < log_tube_radius - 1e-12) inside_union = true;
                    sum += lg;
                }
                if (inside_union) continue;
                out.sampled_sup = std::max(out.sampled_sup, -inv2m * sum);
                ++out.shell_points;
            }
        }
    };

    // Frame grid, offset off the lattice.
    const double h = out.grid_spacing;
    const double lo = -(n + 2.0);
    const long cells = static_cast<long>(std::floor(2.0 * (n + 2.0) / h));
    for (long ix = 0; ix <= cells; ++ix) {
        const double x = lo + (ix + 0.381966) * h;
        if (x > n + 2.0) continue;
        for (long iy = 0; iy <= cells; ++iy) {
            const double y = lo + (iy + 0.381966) * h;
            if (y > n + 2.0) continue;
            const cplx z(x, y);
            if (!s_tilde_contains(n, z)) continue;
            visit_z(z);
        }
    }
    // Shrinking rings around the branch points lying in (or near) the frame.
    for (int j = 1; j <= m; ++j) {
        const cplx aj = spiral_point(j);
        if (!s_tilde_contains(n, aj)) continue;
        for (double r : opts.collision_ring_radii) {
            for (int t = 0; t < opts.collision_ring_points; ++t) {
                const double th = 6.283185307179586 * (t + 0.5) / opts.collision_ring_points;
                const cplx z = aj + r * cplx(std::cos(th), std::sin(th));
                if (!s_tilde_contains(n, z)) continue;
                visit_z(z);
            }
        }
    }
    if (out.shell_points == 0) throw numeric_error("calibrate_q: empty shell sample");
    out.q = out.sampled_sup + opts.margin;
    return out;
}

// ---- c(n) ----------------------------------------------------------------------

/// c(n) = q(n) + n for n < q0 and q~(n) + n for n >= q0 (1-based arrays).
inline std::vector<double> build_c_sequence(const std::vector<double>& q,
                                            const std::vector<double>& q_tilde, int q0) {
    if (q_tilde.size() != q.size())
        throw std::invalid_argument("build_c_sequence: q and q~ length mismatch");
    std::vector<double> c(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (n >= q0 && q_tilde[i] < q[i])
            throw std::invalid_argument("build_c_sequence: q~(n) >= q(n) required");
        c[i] = (n < q0 ? q[i] : q_tilde[i]) + n;
    }
    for (size_t i = 1; i < c.size(); ++i)
        if (!(c[i] > c[i - 1]))
            throw numeric_error("build_c_sequence: non-monotone c sequence at n=" +
                                std::to_string(i + 1));
    return c;
}

inline double calibrate_c(int n, int q0, double q_n, double q_tilde_n) {
    if (n >= q0 && q_tilde_n < q_n)
        throw std::invalid_argument("calibrate_c: q~(n) >= q(n) required for n >= q0");
    return (n < q0 ? q_n : q_tilde_n) + n;
}

// ---- sublevel inclusion audit ---------------------------------------------------

struct SublevelAudit {
    long samples = 0;
    long f_d_hits = 0;
    long violations = 0;  // points of F_d cap (S~_n x C) outside E^kappa(n)
    double worst_excess = -kInf;  // max over hits of log(dist) - log(kappa)
};

/// Rejection-sampling audit of F_d cap (S~_n x C) subset E^kappa(n). Points
/// are drawn with w at log-uniform distances from a random branch value,
/// banded around the F_d threshold so that the sublevel set is actually hit;
/// distances are carried in logs since both kappa(n) and the F_d fiber
/// thickness sit far below double range for calibrated profiles.
inline SublevelAudit audit_sublevel_inclusion(const DomainParams& p, int n, double d,
                                              double log_kappa_n, long samples,
                                              std::uint64_t seed) {
    if (!(d > 0.0)) throw std::invalid_argument("audit: d > 0");
    SublevelAudit rep;
    Rng rng = Rng::stream(seed, 2166136261u ^ static_cast<std::uint64_t>(n));
    const int m = p.level;
    const std::uint64_t count = 1ULL << m;
    const double inv2m = std::ldexp(1.0, -m);
    const double log_2d = std::log(2.0 * d);
    std::vector<double> terms(count);
    for (long it = 0; it < samples; ++it) {
        // z uniform over the frame S~_n
        cplx z;
        do {
            z = cplx(rng.uniform(-(n + 2.0), n + 2.0), rng.uniform(-(n + 2.0), n + 2.0));
        } while (!s_tilde_contains(n, z));
        const std::vector<cplx> vals = branch_values(p.schedule, m, z);
        const std::uint64_t sig = rng.below(count);
        double base = 0.0;  // sum over other signatures of log|Delta|
        for (std::uint64_t b = 0; b < count; ++b) {
            if (b == sig) continue;
            base += std::log(std::abs(vals[sig] - vals[b]));
        }
        const double rho2 = rho_eval(p.profile, std::abs(z.real())) +
                            rho_eval(p.profile, std::abs(z.imag()));
        // log-distance threshold below which (z, w) enters F_d
        const double l_star = (log_2d - rho2) / inv2m - base;
        if (!std::isfinite(l_star)) continue;  // sampled an exact branch collision
        const double theta = rng.uniform(0.0, 6.283185307179586);
        const double L = rng.uniform01() < 0.7
                             ? rng.uniform(l_star - 8.0, l_star + 8.0)
                             : rng.uniform(std::min(l_star, log_kappa_n) - 64.0, 2.0);
        // exact factorized phi at w = vals[sig] + e^L e^{i theta}
        double sum = L;
        double log_min_dist = L;
        for (std::uint64_t b = 0; b < count; ++b) {
            if (b == sig) continue;
            const double lg = detail::log_dist_perturbed(vals[sig] - vals[b], L, theta);
            sum += lg;
            log_min_dist = std::min(log_min_dist, lg);
        }
        const double log_psi_val = inv2m * sum + rho2;
        ++rep.samples;
        if (log_psi_val < log_2d) {
            ++rep.f_d_hits;
            if (!(log_min_dist < log_kappa_n)) {
                ++rep.violations;
                rep.worst_excess = std::max(rep.worst_excess, log_min_dist - log_kappa_n);
            }
        }
    }
    return rep;
}

}  // namespace wermerlab

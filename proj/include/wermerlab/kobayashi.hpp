#pragma once

// Numerical Kobayashi pseudometric bounds.
//
// Upper bounds come from explicit admissible disks: holomorphic maps
// f: Delta_r(0) -> M with f(0) = z, f'(0) = v, image verified on a grid;
// every found disk certifies k(z; v) <= 1/r. Lower bounds come from the
// decreasing property under holomorphic maps; for the rigid domains here
// the projection (z, w, zeta) -> zeta into the right half plane gives
// k(point; v) >= |v_zeta| / (2 Re zeta).

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wermerlab/potential.hpp"
#include "wermerlab/rng.hpp"

namespace wermerlab {

using Point3 = std::array<cplx, 3>;
using Membership = std::function<bool(const Point3&)>;
using DiskMap = std::function<Point3(cplx)>;

struct DiskCandidate {
    DiskMap map;
    std::string label;
};

using CandidateGen = std::function<DiskCandidate(int trial, Rng&)>;

// Exact model metrics, used as oracles and as certified lower bounds.
inline double disk_metric(cplx z, cplx v) { return std::abs(v) / (1.0 - std::norm(z)); }
inline double halfplane_metric(cplx zeta, cplx v) { return std::abs(v) / (2.0 * zeta.real()); }
inline double ball_metric_at_center(double R, const Point3& v, int dim) {
    double n2 = 0.0;
    for (int i = 0; i < dim; ++i) n2 += std::norm(v[i]);
    return std::sqrt(n2) / R;
}

struct MetricEstimate {
    Point3 point{};
    Point3 direction{};
    int dim = 1;
    double upper = kInf;
    double lower = 0.0;
    std::string upper_method;
    std::string lower_method;
};

struct DiskGrowthOptions {
    double r_start = 1e-3;
    int doublings = 60;
    int bisections = 48;
    int grid_boundary = 64;
    int grid_interior = 64;
};

/// Largest grid-admissible radius of the candidate map (0 when even r_start
/// fails). The image is sampled on the boundary circle and a deterministic
/// interior fill.
inline double grow_disk_radius(const Membership& inside, const DiskMap& map,
                               const DiskGrowthOptions& opts = {}) {
    auto admissible = [&](double r) {
        for (int i = 0; i < opts.grid_boundary; ++i) {
            const double th = 6.283185307179586 * i / opts.grid_boundary;
            if (!inside(map(r * cplx(std::cos(th), std::sin(th))))) return false;
        }
        for (int i = 0; i < opts.grid_interior; ++i) {
            const double rr = r * std::sqrt((i + 0.5) / opts.grid_interior);
            const double th = 6.283185307179586 * std::fmod(0.6180339887498949 * i, 1.0);
            if (!inside(map(rr * cplx(std::cos(th), std::sin(th))))) return false;
        }
        return true;
    };
    if (!admissible(opts.r_start)) return 0.0;
    double lo = opts.r_start, hi = opts.r_start;
    for (int i = 0; i < opts.doublings; ++i) {
        if (!admissible(2.0 * hi)) break;
        hi *= 2.0;
        lo = hi;
    }
    double bad = 2.0 * hi;
    for (int i = 0; i < opts.bisections; ++i) {
        const double mid = 0.5 * (lo + bad);
        (admissible(mid) ? lo : bad) = mid;
    }
    return lo;
}

struct FamilySpec {
    int trials = 24;
    int max_degree = 3;
    double coeff_scale = 0.25;
    std::vector<DiskCandidate> extra;  // domain-specific candidates (e.g. Moebius)
};

struct UpperEstimate {
    double value = kInf;  // inf over found disks of 1/r
    double best_radius = 0.0;
    std::string best_label;
    int admissible_trials = 0;
};

/// Sampled upper bound: polynomial disks f(l) = z + l v + sum c_k l^k with
/// scaled Gaussian coefficients, plus any caller-provided candidates, each
/// grown by doubling and bisection to grid-inclusion failure.
inline UpperEstimate kobayashi_upper(const Membership& inside, const Point3& z, const Point3& v,
                                     int dim, const FamilySpec& family = {},
                                     std::uint64_t seed = 1,
                                     const DiskGrowthOptions& growth = {}) {
    UpperEstimate est;
    double vnorm = 0.0;
    for (int i = 0; i < dim; ++i) vnorm += std::norm(v[i]);
    if (!(vnorm > 0.0)) throw std::invalid_argument("kobayashi_upper: v must be nonzero");

    auto consider = [&](const DiskCandidate& cand) {
        const double r = grow_disk_radius(inside, cand.map, growth);
        if (r <= 0.0) return;
        ++est.admissible_trials;
        if (1.0 / r < est.value) {
            est.value = 1.0 / r;
            est.best_radius = r;
            est.best_label = cand.label;
        }
    };

    for (int trial = 0; trial < family.trials; ++trial) {
        Rng rng = Rng::stream(seed, trial);
        std::array<std::vector<cplx>, 3> coeff;
        for (int i = 0; i < dim; ++i) coeff[i] = {z[i], v[i]};
        if (trial > 0) {
            const double vn = std::sqrt(vnorm);
            for (int k = 2; k <= family.max_degree; ++k)
                for (int i = 0; i < dim; ++i)
                    coeff[i].push_back(vn * family.coeff_scale * rng.gauss_c() /
                                       std::pow(4.0, k - 1));
        }
        DiskCandidate cand;
        cand.label = trial == 0 ? "affine" : "poly-deg" + std::to_string(family.max_degree);
        cand.map = [coeff, dim](cplx lam) {
            Point3 out{0.0, 0.0, 0.0};
            for (int i = 0; i < dim; ++i) {
                cplx acc = 0.0;
                for (size_t k = coeff[i].size(); k-- > 0;) acc = acc * lam + coeff[i][k];
                out[i] = acc;
            }
            return out;
        };
        consider(cand);
    }
    for (const auto& cand : family.extra) consider(cand);
    return est;
}

/// Extremal unit-disk candidate: the Moebius disk with f(0) = z, f'(0) = v,
/// admissible up to r = (1 - |z|^2) / |v| (the sharp Kobayashi radius).
inline DiskCandidate moebius_disk_candidate(cplx z, cplx v) {
    const cplx phase = v / std::abs(v);
    const double s = std::abs(v) / (1.0 - std::norm(z));
    DiskCandidate cand;
    cand.label = "moebius";
    cand.map = [z, phase, s](cplx lam) {
        const cplx t = phase * s * lam;
        Point3 out{(z + t) / (1.0 + std::conj(z) * t), 0.0, 0.0};
        return out;
    };
    return cand;
}

/// Half-plane pullback bound via the holomorphic projection
/// (z, w, zeta) -> zeta of Omega_Psi into {Re > 0} (valid since Psi >= 0):
/// k(point; v) >= |v_zeta| / (2 Re zeta). Zero when v_zeta = 0.
inline double kobayashi_lower_projection(const DomainParams& params, const Point3& point,
                                         const Point3& v) {
    if (!omega_contains(params, point[0], point[1], point[2]))
        throw std::invalid_argument("kobayashi_lower_projection: point not in Omega_Psi");
    if (std::abs(v[2]) == 0.0) return 0.0;
    return halfplane_metric(point[2], v[2]);
}

}  // namespace wermerlab

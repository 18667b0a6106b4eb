#pragma once

// Holomorphic-disk functionals: the families H_n of almost-vertical graph
// disks over T_n, the component-diameter functionals beta^delta(D) and
// beta_n^delta, the delta(n) calibration, the Harnack localization of disks
// mapping into Omega_Psi, and the randomized large-disk exclusion search
// over the sublevel domains F_d.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wermerlab/potential.hpp"
#include "wermerlab/raster.hpp"
#include "wermerlab/rng.hpp"

namespace wermerlab {

/// Polynomial-coefficient parametrization of a holomorphic map from the disk
/// of the stated center/radius into C^dim; coefficient lists are powers of
/// (lambda - center).
struct HoloDisk {
    cplx center = 0.0;
    double radius = 1.0;
    int dim = 1;
    std::array<std::vector<cplx>, 3> coeffs;

    cplx eval_coord(int coord, cplx lambda) const {
        const auto& c = coeffs[coord];
        cplx acc = 0.0;
        for (size_t k = c.size(); k-- > 0;) acc = acc * (lambda - center) + c[k];
        return acc;
    }

    cplx derivative_coord(int coord, cplx lambda) const {
        const auto& c = coeffs[coord];
        cplx acc = 0.0;
        for (size_t k = c.size(); k-- > 1;) acc = acc * (lambda - center) + double(k) * c[k];
        return acc;
    }

    std::array<cplx, 3> eval(cplx lambda) const {
        std::array<cplx, 3> out{0.0, 0.0, 0.0};
        for (int i = 0; i < dim; ++i) out[i] = eval_coord(i, lambda);
        return out;
    }

    /// Upper bound for |f'| on the closed parameter disk: sum k |c_k| r^(k-1).
    double derivative_sup_bound(int coord) const {
        const auto& c = coeffs[coord];
        double b = 0.0, rp = 1.0;
        for (size_t k = 1; k < c.size(); ++k) {
            b += double(k) * std::abs(c[k]) * rp;
            rp *= radius;
        }
        return b;
    }
};

inline void validate_disk(const HoloDisk& d, int degree_cap = 16) {
    if (!(d.radius > 0.0)) throw std::invalid_argument("HoloDisk: radius > 0 required");
    if (d.dim < 1 || d.dim > 3) throw std::invalid_argument("HoloDisk: dim in [1,3]");
    for (int i = 0; i < d.dim; ++i) {
        if (static_cast<int>(d.coeffs[i].size()) > degree_cap + 1)
            throw std::invalid_argument("HoloDisk: degree cap exceeded");
        for (cplx c : d.coeffs[i])
            if (!is_finite(c)) throw std::invalid_argument("HoloDisk: nonfinite coefficient");
    }
}

// ---- H_n membership ------------------------------------------------------------

/// Graph disk over the w-plane: D = {(f(w), w), w in Delta_1(w0)} with f the
/// dim-1 polynomial of `graph`. Member of H_n iff the base point (f(w0), w0)
/// lies on E_m over T_n (within tol) and |f'| < 1 on the whole parameter disk.
inline bool hn_member(const DomainParams& params, const HoloDisk& graph, int n,
                      double tol = 1e-6, int boundary_grid = 64) {
    if (graph.dim != 1) throw std::invalid_argument("hn_member: graph disk must have dim 1");
    const cplx w0 = graph.center;
    const cplx z0 = graph.eval_coord(0, w0);
    if (t_frame_sup_distance(n, z0) > tol) return false;
    if (min_branch_distance(params.schedule, params.level, z0, w0) > tol) return false;
    // |f'| < 1 checked on the boundary circle (max modulus), a mid ring and
    // the center.
    for (int i = 0; i < boundary_grid; ++i) {
        const double th = 6.283185307179586 * i / boundary_grid;
        const cplx lam = w0 + graph.radius * cplx(std::cos(th), std::sin(th));
        if (std::abs(graph.derivative_coord(0, lam)) >= 1.0) return false;
        if (i % 4 == 0) {
            const cplx mid = w0 + 0.5 * graph.radius * cplx(std::cos(th), std::sin(th));
            if (std::abs(graph.derivative_coord(0, mid)) >= 1.0) return false;
        }
    }
    return std::abs(graph.derivative_coord(0, w0)) < 1.0;
}

// ---- beta functionals ------------------------------------------------------------

struct BetaReport {
    double beta = 0.0;        // 4-connected component diameter sup
    double beta8 = 0.0;       // 8-connected variant (>= beta)
    int components = 0;
    long marked_cells = 0;
    double cell_size = 0.0;
};

/// beta^delta(D) for a graph disk: rasterizes the quarter disk
/// Delta_{1/4}(w0), marks w with (f(w), w) in E^delta, and measures the
/// largest component diameter of the marked set (cell-center metric).
inline BetaReport beta_disk(const DomainParams& params, const HoloDisk& graph, double delta,
                            int cells_per_side = 64) {
    if (!(delta > 0.0)) throw std::invalid_argument("beta_disk: delta > 0 required");
    if (graph.dim != 1) throw std::invalid_argument("beta_disk: graph disk must have dim 1");
    const cplx w0 = graph.center;
    DiskRaster r = rasterize_disk(w0, 0.25 * graph.radius, cells_per_side, [&](cplx w) {
        const cplx z = graph.eval_coord(0, w);
        return min_branch_distance(params.schedule, params.level, z, w) < delta;
    });
    BetaReport rep;
    rep.cell_size = r.cell_size();
    for (std::uint8_t v : r.mark) rep.marked_cells += v;
    auto comps = marked_components(r, false);
    rep.components = static_cast<int>(comps.size());
    for (auto& c : comps) rep.beta = std::max(rep.beta, point_set_diameter(std::move(c)));
    rep.beta8 = max_component_diameter(r, true);
    return rep;
}

struct HnSampleOptions {
    int max_degree = 3;
    double slope_budget = 0.9;  // certified sup of |f'| over the parameter disk
    double vertical_share = 0.25;
};

/// Random member of H_n: base point on E_m over a uniform point of T_n and a
/// polynomial graph with sum k|c_k| below the slope budget (so |f'| < 1 is
/// certified, not just sampled).
inline HoloDisk sample_hn_disk(const DomainParams& params, int n, Rng& rng,
                               const HnSampleOptions& opts = {}) {
    const double side = n + 0.5;
    const double t = rng.uniform(-side, side);
    cplx z0;
    switch (rng.below(4)) {
        case 0: z0 = cplx(side, t); break;
        case 1: z0 = cplx(-side, t); break;
        case 2: z0 = cplx(t, side); break;
        default: z0 = cplx(t, -side); break;
    }
    const std::vector<cplx> vals = branch_values(params.schedule, params.level, z0);
    const cplx w0 = vals[rng.below(vals.size())];
    HoloDisk d;
    d.center = w0;
    d.radius = 1.0;
    d.dim = 1;
    d.coeffs[0] = {z0};
    if (rng.uniform01() >= opts.vertical_share) {
        std::vector<cplx> raw(opts.max_degree + 1, 0.0);
        double weight = 0.0;
        for (int k = 1; k <= opts.max_degree; ++k) {
            raw[k] = rng.gauss_c();
            weight += double(k) * std::abs(raw[k]);
        }
        if (weight > 0.0) {
            const double scale = rng.uniform(0.1, opts.slope_budget) / weight;
            for (int k = 1; k <= opts.max_degree; ++k) raw[k] *= scale;
        }
        raw[0] = z0;
        d.coeffs[0] = std::move(raw);
    }
    return d;
}

struct BetaNReport {
    double beta = 0.0;
    double beta8 = 0.0;
    int disks = 0;
    std::uint64_t seed = 0;
};

/// Sampled lower bound for beta_n^delta = sup over H_n of beta^delta.
inline BetaNReport beta_n(const DomainParams& params, int n, double delta, int count,
                          std::uint64_t seed, int cells_per_side = 64,
                          const HnSampleOptions& opts = {}) {
    if (count < 1) throw std::invalid_argument("beta_n: count >= 1");
    BetaNReport rep;
    rep.seed = seed;
    for (int i = 0; i < count; ++i) {
        Rng rng = Rng::stream(seed, (static_cast<std::uint64_t>(n) << 32) | i);
        const HoloDisk d = sample_hn_disk(params, n, rng, opts);
        const BetaReport b = beta_disk(params, d, delta, cells_per_side);
        rep.beta = std::max(rep.beta, b.beta);
        rep.beta8 = std::max(rep.beta8, b.beta8);
        ++rep.disks;
    }
    return rep;
}

struct DeltaNReport {
    double delta_threshold = 0.0;  // bisected largest delta with all beta_k < 1/2
    double delta = 0.0;            // threshold times the safety factor
    int bisections = 0;
    std::vector<double> final_betas;  // beta_k at the returned delta, k = k_lo..k_hi
    int k_lo = 0, k_hi = 0;
};

struct DeltaNOptions {
    int disks_per_k = 16;
    int cells_per_side = 48;
    int bisections = 10;
    double delta_hi = 0.75;
    double safety = 0.5;
    int k_min = 1;  // clamp of the k-range (beta_k is meaningful for k >= q0)
    double strict_gap_cells = 2.0;  // raster margin under the 1/2 threshold
};

/// delta(n): the beta_k^delta < 1/2 condition for n-1 <= k <= n+2 holds for
/// all small delta and fails for large delta (beta is nondecreasing in
/// delta), so the threshold is located by bisection over a fixed disk sample
/// and multiplied by a safety factor. Cell-center diameters underestimate
/// the true component diameter by up to a couple of cells (a saturated
/// quarter disk rasters to 1/2 - O(h)), so the bisection compares against
/// 1/2 minus a strict raster gap.
inline DeltaNReport delta_n(const DomainParams& params, int n, std::uint64_t seed,
                            const DeltaNOptions& opts = {}) {
    DeltaNReport rep;
    rep.k_lo = std::max(opts.k_min, n - 1);
    rep.k_hi = n + 2;
    const double cell = 0.5 / opts.cells_per_side;
    const double threshold = 0.5 - opts.strict_gap_cells * cell;
    auto all_below_half = [&](double delta) {
        for (int k = rep.k_lo; k <= rep.k_hi; ++k) {
            const BetaNReport b =
                beta_n(params, k, delta, opts.disks_per_k, seed, opts.cells_per_side);
            if (!(b.beta < threshold)) return false;
        }
        return true;
    };
    double lo = 0.0, hi = opts.delta_hi;
    if (all_below_half(hi)) {
        lo = hi;  // never saturates below the probed ceiling; report it
    } else {
        for (int i = 0; i < opts.bisections; ++i) {
            const double mid = 0.5 * (lo + hi);
            (all_below_half(mid) ? lo : hi) = mid;
            ++rep.bisections;
        }
    }
    if (lo == 0.0)
        throw numeric_error("delta_n: beta stays at the threshold down to resolution " +
                            std::to_string(hi));
    rep.delta_threshold = lo;
    rep.delta = opts.safety * rep.delta_threshold;
    for (int k = rep.k_lo; k <= rep.k_hi; ++k)
        rep.final_betas.push_back(
            beta_n(params, k, rep.delta, opts.disks_per_k, seed, opts.cells_per_side).beta);
    return rep;
}

// ---- Harnack localization ---------------------------------------------------------

struct HarnackReport {
    bool pass = false;
    long checked = 0;
    double worst_ratio = 0.0;  // max over the r/3 grid of Psi / (2 Re zeta(0))
    std::optional<cplx> witness;
};

/// For a holomorphic disk f = (z, w, zeta): Delta_r(0) -> Omega_Psi, checks
/// Psi(z(l), w(l)) < 2 Re zeta(0) and Re zeta(l) < 2 Re zeta(0) on a grid of
/// Delta_{r/3}(0). (Harnack for the positive harmonic Re zeta.)
inline HarnackReport harnack_localize(const DomainParams& params, const HoloDisk& f,
                                      int radial = 8, int angular = 32) {
    if (f.dim != 3) throw std::invalid_argument("harnack_localize: disk into C^3 required");
    HarnackReport rep;
    rep.pass = true;
    const double bound = 2.0 * f.eval_coord(2, f.center).real();
    for (int ir = 0; ir <= radial; ++ir) {
        const double rr = f.radius / 3.0 * ir / radial;
        const int na = ir == 0 ? 1 : angular;
        for (int ia = 0; ia < na; ++ia) {
            const double th = 6.283185307179586 * ia / na;
            const cplx lam = f.center + rr * cplx(std::cos(th), std::sin(th));
            const auto pt = f.eval(lam);
            ++rep.checked;
            const double psi_v = psi(params, pt[0], pt[1]);
            const double ratio = psi_v / bound;
            if (ratio > rep.worst_ratio) rep.worst_ratio = ratio;
            if (!(psi_v < bound) || !(pt[2].real() < bound)) {
                rep.pass = false;
                if (!rep.witness) rep.witness = lam;
            }
        }
    }
    return rep;
}

// ---- Property (F) proxy: large-disk exclusion search --------------------------------

enum class ExclusionObstruction { none, tube_escape, frame_growth, monodromy };

struct ExclusionReport {
    double d = 0.0;
    double best_radius = 0.0;
    int best_trial = -1;
    int trials = 0;
    long tube_escapes = 0;    // failing grid point far from every branch
    long frame_growth = 0;    // failing grid point close to a branch (rho term)
    long monodromy_hits = 0;  // z-image of a failing disk encircles a branch point
    HoloDisk best_disk;       // valid when best_trial >= 0
};

struct ExclusionOptions {
    int trials = 48;
    double r_min = 1.0 / 64.0;
    double r_max = 64.0;
    double ladder_ratio = 1.4142135623730951;
    int grid_boundary = 48;
    int grid_interior = 48;
    double base_box = 3.0;  // sup-norm box for sampled base points
    int max_degree = 3;
};

/// All grid points of the radius-r disk image lie in F_d; on failure fills
/// the obstruction class of the first failing point.
inline bool disk_grid_in_f_d(const DomainParams& params, double d, const HoloDisk& h, double r,
                             int boundary, int interior, ExclusionReport* diag = nullptr) {
    auto classify = [&](cplx z, cplx w) {
        if (diag == nullptr) return;
        const double dist = min_branch_distance(params.schedule, params.level, z, w);
        // crude split: near a branch the rho/frame growth dominates Psi,
        // far from all branches the point fell out of the tube altogether
        if (dist > 0.25)
            ++diag->tube_escapes;
        else
            ++diag->frame_growth;
    };
    auto check = [&](cplx lam) {
        const auto pt = h.eval(lam);
        if (!f_d_contains(params, d, pt[0], pt[1])) {
            classify(pt[0], pt[1]);
            return false;
        }
        return true;
    };
    for (int i = 0; i < boundary; ++i) {
        const double th = 6.283185307179586 * i / boundary;
        if (!check(r * cplx(std::cos(th), std::sin(th)))) return false;
    }
    for (int i = 0; i < interior; ++i) {
        // deterministic low-discrepancy fill of the open disk
        const double rr = r * std::sqrt((i + 0.5) / interior);
        const double th = 6.283185307179586 * std::fmod(0.6180339887498949 * i, 1.0);
        if (!check(rr * cplx(std::cos(th), std::sin(th)))) return false;
    }
    return true;
}

/// Randomized search for large disks h: Delta_r(0) -> F_d with ||h'(0)|| = 1.
/// Families: affine, low-degree polynomial, vertical and branch-following
/// (second-order jets of a branch of E_m). Radii walk a fixed geometric
/// ladder; a trial's radius is the largest ladder prefix passing the grid
/// check at both base and 4x density, which makes the reported radius
/// monotone in d for a fixed seed.
inline ExclusionReport disk_exclusion_search(const DomainParams& params, double d,
                                             std::uint64_t seed,
                                             const ExclusionOptions& opts = {}) {
    if (!(d > 0.0)) throw std::invalid_argument("disk_exclusion_search: d > 0");
    ExclusionReport rep;
    rep.d = d;
    rep.trials = opts.trials;
    for (int trial = 0; trial < opts.trials; ++trial) {
        Rng rng = Rng::stream(seed, trial);
        // base point: z in a box, w on or near a branch value
        const cplx z0(rng.uniform(-opts.base_box, opts.base_box),
                      rng.uniform(-opts.base_box, opts.base_box));
        const std::vector<cplx> vals = branch_values(params.schedule, params.level, z0);
        const cplx w0 = vals[rng.below(vals.size())] +
                        rng.uniform(0.0, 0.1) * rng.unit() * rng.uniform01();
        HoloDisk h;
        h.center = 0.0;
        h.radius = 1.0;
        h.dim = 2;
        const int family = static_cast<int>(rng.below(4));
        if (family == 0) {  // vertical
            h.coeffs[0] = {z0};
            h.coeffs[1] = {w0, 1.0};
        } else if (family == 1) {  // affine, random direction
            cplx u = rng.gauss_c(), v = rng.gauss_c();
            const double nn = std::sqrt(std::norm(u) + std::norm(v));
            h.coeffs[0] = {z0, u / nn};
            h.coeffs[1] = {w0, v / nn};
        } else if (family == 2) {  // branch-following second-order jet
            double dmin = kInf;
            for (int j = 1; j <= params.level; ++j)
                dmin = std::min(dmin, std::abs(z0 - spiral_point(j)));
            if (dmin < 1e-3) continue;
            BranchSignature sig = BranchSignature::all_plus(params.level, z0);
            for (int& sgn : sig.signs)
                if (rng.uniform01() < 0.5) sgn = -1;
            const BranchState st = branch_state_at(sig);
            const cplx f0 = state_value(params.schedule, st);
            const cplx f1 = state_derivative(params.schedule, st);
            const cplx f2 = state_second_derivative(params.schedule, st);
            const double nn = std::sqrt(1.0 + std::norm(f1));
            // z(l) = z0 + l/nn, w(l) = jet of the branch along it
            h.coeffs[0] = {z0, 1.0 / nn};
            h.coeffs[1] = {f0, f1 / nn, 0.5 * f2 / (nn * nn)};
        } else {  // random polynomial, derivative normalized at 0
            cplx u = rng.gauss_c(), v = rng.gauss_c();
            const double nn = std::sqrt(std::norm(u) + std::norm(v));
            h.coeffs[0] = {z0, u / nn};
            h.coeffs[1] = {w0, v / nn};
            for (int k = 2; k <= opts.max_degree; ++k) {
                h.coeffs[0].push_back(0.05 * rng.gauss_c() / std::pow(2.0, k));
                h.coeffs[1].push_back(0.05 * rng.gauss_c() / std::pow(2.0, k));
            }
        }
        // ladder walk: largest prefix of radii passing base + 4x grids
        double reached = 0.0;
        for (double r = opts.r_min; r <= opts.r_max; r *= opts.ladder_ratio) {
            const bool ok =
                disk_grid_in_f_d(params, d, h, r, opts.grid_boundary, opts.grid_interior,
                                 &rep) &&
                disk_grid_in_f_d(params, d, h, r, 4 * opts.grid_boundary,
                                 4 * opts.grid_interior, nullptr);
            if (!ok) {
                // a failing disk whose z-image encircles a branch point is a
                // monodromy obstruction: no single-valued branch graph exists
                for (int j = 1; j <= params.level; ++j) {
                    const cplx zc = h.eval_coord(0, 0.0);
                    const cplx zdir = h.coeffs[0].size() > 1 ? h.coeffs[0][1] : cplx(0.0);
                    if (std::abs(zdir) * r > std::abs(zc - spiral_point(j)))
                        ++rep.monodromy_hits;
                }
                break;
            }
            reached = r;
        }
        if (reached > rep.best_radius) {
            rep.best_radius = reached;
            rep.best_trial = trial;
            rep.best_disk = h;
        }
    }
    return rep;
}

}  // namespace wermerlab

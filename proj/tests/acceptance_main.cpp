// Acceptance suite: thirteen end-to-end criteria for the laboratory, each
// printed as one pass/fail line with its runtime. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wermerlab/antipeak.hpp"
#include "wermerlab/branches.hpp"
#include "wermerlab/disks.hpp"
#include "wermerlab/harmonic.hpp"
#include "wermerlab/kobayashi.hpp"
#include "wermerlab/lattice.hpp"
#include "wermerlab/pipeline.hpp"
#include "wermerlab/potential.hpp"
#include "wermerlab/profile.hpp"

using namespace wermerlab;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool pass = true;
    std::string note;

    void require(bool cond, const std::string& msg) {
        if (!cond) {
            pass = false;
            if (!note.empty()) note += "; ";
            note += msg;
        }
    }
    void info(const std::string& msg) {
        if (!note.empty()) note += "; ";
        note += msg;
    }
};

// The calibration chain shared by criteria 6, 7 and 8.
struct Chain {
    RunConfig config;
    PipelineResult result;
    DomainParams flat;     // level-8 zero-profile parameters
    DomainParams domain;   // level-8 calibrated-profile parameters
};

std::optional<Chain>& chain_cache() {
    static std::optional<Chain> cache;
    return cache;
}

const Chain& chain() {
    auto& cache = chain_cache();
    if (!cache) {
        Chain c;
        c.config.level = 8;
        c.config.horizon = 10;
        c.config.safety = 0.5;
        c.config.seed = 20260808;
        c.config.out_dir = (fs::temp_directory_path() / "wermerlab_acceptance").string();
        c.config.kappa_samples = 2048;
        c.config.kappa_exact_cap = 12;
        c.config.q_z_density = 2.0;
        c.config.q_theta = 8;
        c.config.q_margin = 1.0;
        c.config.alpha_frame_density = 4;
        c.config.alpha_circle_points = 12;
        c.config.beta_disks = 12;
        c.config.beta_cells = 40;
        c.config.delta_bisections = 8;
        c.config.audit_samples = 10000;
        c.config.audit_d_factor = 0.25;
        fs::remove_all(c.config.out_dir);
        c.result = pipeline_build_domain(c.config);
        c.flat.schedule = c.result.schedule;
        c.flat.level = c.config.level;
        c.flat.profile = zero_profile();
        c.domain = c.flat;
        c.domain.profile = c.result.profile;
        cache = std::move(c);
    }
    return *cache;
}

// ---- criterion 1: spiral exactness -------------------------------------------

Check criterion_spiral() {
    Check c;
    c.require(spiral_point(1) == cplx(0, 0), "a_1 != 0");
    c.require(spiral_point(2) == cplx(1, 0), "a_2 != 1");
    c.require(spiral_point(3) == cplx(1, 1), "a_3 != 1+i");
    c.require(spiral_point(10) == cplx(2, -1), "a_10 != 2-i");
    for (int n = 1; n <= 20; ++n) {
        std::set<lattice_coord> got;
        const std::int64_t count = (2 * n + 1) * (2 * n + 1);
        for (std::int64_t i = 1; i <= count; ++i) got.insert(spiral_coords(i));
        bool exact = static_cast<std::int64_t>(got.size()) == count;
        for (std::int64_t x = -n; exact && x <= n; ++x)
            for (std::int64_t y = -n; exact && y <= n; ++y) exact = got.count({x, y}) == 1;
        c.require(exact, "square [-" + std::to_string(n) + "," + std::to_string(n) +
                             "]^2 not filled exactly");
    }
    return c;
}

// ---- criterion 2: schedule certification --------------------------------------

Check criterion_schedule() {
    Check c;
    const EpsilonSchedule s =
        build_schedule(12, {.safety = 0.5, .circle_samples = 2048, .kappa_exact_cap = 12});
    const ScheduleCert cert = certify(s);
    c.require(cert.ok, "certification violations");
    c.require(cert.min_keq_margin > 0.0, "(k-eq) margin not positive");
    c.require(cert.min_peq_margin > 0.0, "(p-eq) margin not positive");
    c.require(std::abs(s.kappa_at(2) - std::sqrt(3.0)) <= 1e-3, "kappa_2 != sqrt(3) +- 1e-3");
    c.require(s.radius_at(2) == 0.25, "r_2 != 1/4");
    c.info("kappa_2 = " + format_double(s.kappa_at(2)) +
           ", min margins = " + format_double(cert.min_keq_margin) + " / " +
           format_double(cert.min_peq_margin));
    return c;
}

// ---- criterion 3: shift error ---------------------------------------------------

Check criterion_shift() {
    Check c;
    const EpsilonSchedule full = build_schedule(8);
    for (int p = 2; p <= 8; ++p) {
        EpsilonSchedule trunc = full;
        trunc.m = p;
        trunc.eps.resize(p);
        trunc.log_eps.resize(p);
        trunc.radii.resize(p);
        trunc.kappas.resize(p);
        trunc.log_kappas.resize(p);
        trunc.kappa_sampled.resize(p);
        const double scale = full.eps_at(p) * std::sqrt(full.radius_at(p));
        const double theta0 = shift_error(trunc, p, 0.0);
        c.require(std::abs(theta0 - 2.0 * scale) <= 1e-9,
                  "level p=" + std::to_string(p) + ": |theta - 2 eps sqrt(r)| > 1e-9");
        const double theta_half = shift_error(trunc, p, 0.5 * scale);
        c.require(theta_half >= scale - 1e-12,
                  "Property (P) fails at p=" + std::to_string(p));
    }
    return c;
}

// ---- criterion 4: monodromy laws -------------------------------------------------

int winding_number(const ContinuationPath& loop, cplx a) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < loop.waypoints.size(); ++i)
        acc += std::arg((loop.waypoints[i + 1] - a) / (loop.waypoints[i] - a));
    return static_cast<int>(std::lround(acc / 6.283185307179586));
}

ContinuationPath lasso(cplx ref, cplx center, double radius, int turns) {
    const cplx u = (ref - center) / std::abs(ref - center);
    const cplx entry = center + radius * u;
    ContinuationPath p = ContinuationPath::straight(ref, entry, 8);
    p.append(ContinuationPath::circle(center, radius, turns, 96, std::arg(u)));
    p.append(ContinuationPath::straight(entry, ref, 8));
    return p;
}

Check criterion_monodromy() {
    Check c;
    const EpsilonSchedule s = build_schedule(4);
    const cplx ref(0.4, 0.37);
    long loops = 0;
    Rng rng(20260808);
    for (int trial = 0; trial < 250 && c.pass; ++trial) {
        BranchSignature sig = BranchSignature::all_plus(4, ref);
        for (int& sg : sig.signs)
            if (rng.below(2)) sg = -1;
        const int ja = 1 + static_cast<int>(rng.below(4));
        const int jb = 1 + static_cast<int>(rng.below(4));
        const double ra = rng.uniform(0.12, 0.3), rb = rng.uniform(0.12, 0.3);
        const int ta = rng.below(2) ? 1 : -1;
        ContinuationPath a = lasso(ref, spiral_point(ja), ra, ta);
        ContinuationPath b = lasso(ref, spiral_point(jb), rb, 1);

        // sign-flip law against the winding oracle, with value consistency
        ContinuationPath ab = a;
        ab.append(b);
        const BranchState st = continue_along(s, sig, ab);
        const BranchSignature out = state_signature(st);
        for (int j = 1; j <= 4; ++j) {
            const bool flipped = out.signs[j - 1] != sig.signs[j - 1];
            const bool odd = winding_number(ab, spiral_point(j)) % 2 != 0;
            c.require(flipped == odd, "flip/winding mismatch");
        }
        c.require(std::abs(state_value(s, st) -
                           branch_value_direct(s, out, ref)) <= 1e-9,
                  "continued value drifts beyond 1e-9");
        ++loops;

        // order 2: the same lasso twice is the identity
        ContinuationPath aa = a;
        aa.append(a);
        const BranchState st2 = continue_along(s, sig, aa);
        c.require(state_signature(st2).signs == sig.signs, "loop^2 not identity");
        c.require(std::abs(state_value(s, st2) - branch_value_direct(s, sig, ref)) <= 1e-9,
                  "loop^2 value drifts beyond 1e-9");
        ++loops;

        // commutation
        ContinuationPath ba = b;
        ba.append(a);
        c.require(monodromy(s, sig, ab).signs == monodromy(s, sig, ba).signs,
                  "monodromies fail to commute");
        loops += 2;
    }
    c.info(std::to_string(loops) + " loops checked");
    return c;
}

// ---- criterion 5: alpha(n) and q0 -------------------------------------------------

Check criterion_alpha() {
    Check c;
    const EpsilonSchedule s = build_schedule(10);
    c.require(certify(s).ok, "m=10 schedule fails certification");
    std::vector<double> alphas, fine;
    for (int n = 1; n <= 12; ++n) {
        alphas.push_back(alpha_bound(s, 10, n, 6, 16).value);
        fine.push_back(alpha_bound(s, 10, n, 9, 24).value);
    }
    for (size_t i = 1; i < alphas.size(); ++i)
        c.require(alphas[i] <= alphas[i - 1] + 1e-12, "alpha increases at n=" +
                                                          std::to_string(i + 1));
    for (size_t i = 0; i < alphas.size(); ++i)
        c.require(std::abs(alphas[i] - fine[i]) / fine[i] < 0.05,
                  "grid densities disagree at n=" + std::to_string(i + 1));
    const int q0 = q0_from_alphas(alphas);
    c.require(q0 >= 1, "alpha never drops below 1/2");
    c.require(alphas[q0 - 1] < 0.5, "alpha(q0) >= 1/2");
    c.info("q0 = " + std::to_string(q0) + ", alpha(1) = " + format_double(alphas[0]) +
           ", alpha(12) = " + format_double(alphas[11]));
    return c;
}

// ---- criterion 6: the convex profile on the calibrated c-sequence ------------------

Check criterion_profile() {
    Check c;
    // exact hand-worked example first
    const ConvexProfile hand = build_rho1({0.5, 1.0, 3.0}, 2);
    c.require(rho1_eval(hand, 2.0) == 3.0, "rho_1(2) != 3 for c = (0.5, 1, 3)");

    const Chain& ch = chain();
    c.require(ch.result.exit_code == 0, "calibration chain failed at stage '" +
                                            ch.result.failed_stage + "'");
    if (!c.pass) return c;
    const ConvexProfile& rho = ch.result.profile;
    const std::vector<double>& cseq = ch.result.c_values;
    c.require(static_cast<int>(cseq.size()) >= 10, "calibrated c-sequence shorter than 10");

    // convexity: second differences on the 1e-2 grid
    const double h = 1e-2;
    for (double t = h; t <= 11.0; t += h) {
        const double d2 =
            rho_eval(rho, t - h) - 2.0 * rho_eval(rho, t) + rho_eval(rho, t + h);
        if (!(d2 >= -1e-9)) {
            c.require(false, "second difference below -1e-9 at t = " + format_double(t));
            break;
        }
    }
    // rho'(0) = 0 by central differences on the even extension
    const double fd = (rho_eval(rho, 1e-6) - rho_eval(rho, std::abs(-1e-6))) / 2e-6;
    c.require(std::abs(fd) <= 1e-6, "rho'(0) beyond 1e-6");
    const double onesided = (rho_eval(rho, 1e-4) - rho_eval(rho, 0.0)) / 1e-4;
    c.require(std::abs(onesided) <= 1e-3, "one-sided slope at 0 not vanishing");

    // rho > c(n) on (n, n+1] and rho >= c(n) on [n-1, n+2], steps of 1e-2
    for (int n = 1; n <= 10; ++n) {
        const double cn = cseq[n - 1];
        for (int i = 1; i <= 100; ++i) {
            const double t = n + i / 100.0;
            if (!(rho_eval(rho, t) > cn)) {
                c.require(false, "rho(t) <= c(n) at n=" + std::to_string(n));
                break;
            }
        }
        for (int i = 0; i <= 300; ++i) {
            const double t = (n - 1) + i / 100.0;
            if (!(rho_eval(rho, t) >= cn)) {
                c.require(false, "rho < c(n) on [n-1, n+2] at n=" + std::to_string(n));
                break;
            }
        }
    }
    c.info("c(1) = " + format_double(cseq[0]) + ", c(10) = " + format_double(cseq[9]) +
           ", q0 = " + std::to_string(ch.result.q0));
    return c;
}

// ---- criterion 7: sublevel inclusion audit ------------------------------------------

Check criterion_sublevel() {
    Check c;
    const Chain& ch = chain();
    c.require(ch.result.exit_code == 0, "calibration chain failed");
    if (!c.pass) return c;
    long total_hits = 0;
    for (int n = 2; n <= 6; ++n) {
        const double d = 0.25 * std::exp(static_cast<double>(n));
        c.require(2.0 * d / std::exp(static_cast<double>(n)) < 1.0, "2d/e^n >= 1");
        const SublevelAudit rep = audit_sublevel_inclusion(
            ch.domain, n, d, ch.result.log_kappas[n - 1], 10000, ch.config.seed);
        c.require(rep.samples == 10000, "sample count");
        c.require(rep.violations == 0,
                  "F_d point outside the kappa tube at n=" + std::to_string(n));
        c.require(rep.f_d_hits > 0, "audit vacuous at n=" + std::to_string(n));
        total_hits += rep.f_d_hits;
    }
    c.info("F_d hits across n = 2..6: " + std::to_string(total_hits));
    return c;
}

// ---- criterion 8: beta functionals and delta(n) ---------------------------------------

Check criterion_beta() {
    Check c;
    const Chain& ch = chain();
    c.require(ch.result.q0 >= 1, "q0 unavailable");
    if (!c.pass) return c;
    const int q0 = ch.result.q0;
    for (int n : {q0, q0 + 1}) {
        // monotone in delta over 50 sampled disks
        double prev = 0.0;
        for (double delta = 0.01; delta <= 0.64; delta *= 2.0) {
            const BetaNReport rep = beta_n(ch.flat, n, delta, 50, ch.config.seed, 48);
            c.require(rep.beta >= prev - 1e-15, "beta not monotone in delta");
            c.require(rep.beta <= 0.5 + 1e-12, "beta exceeds the quarter-disk diameter");
            prev = rep.beta;
        }
        // bisected delta(n) keeps beta_k below 1/2 on the 50-disk estimates
        const DeltaNReport dn = delta_n(ch.flat, n, ch.config.seed,
                                        {.disks_per_k = 16,
                                         .cells_per_side = 40,
                                         .bisections = 8,
                                         .k_min = q0});
        c.require(dn.delta > 0.0, "delta(n) collapsed to zero");
        for (int k = dn.k_lo; k <= dn.k_hi; ++k) {
            const BetaNReport rep = beta_n(ch.flat, k, dn.delta, 50, ch.config.seed, 48);
            c.require(rep.beta < 0.5,
                      "beta_k at delta(n) not below 1/2 (k=" + std::to_string(k) + ")");
            // strict gap: below 1/2 by more than the raster resolution
            c.require(rep.beta < 0.5 - 2.0 * (0.5 / 48),
                      "beta_k at delta(n) only below 1/2 by raster slack");
        }
        // raster refinement stability at the threshold scale
        const double beta_coarse =
            beta_n(ch.flat, n, dn.delta_threshold, 50, ch.config.seed, 36).beta;
        const double beta_fine =
            beta_n(ch.flat, n, dn.delta_threshold, 50, ch.config.seed, 72).beta;
        c.require(std::abs(beta_coarse - beta_fine) / beta_fine < 0.10,
                  "raster refinement moves beta by 10%+");
        if (n == q0)
            c.info("delta(q0) = " + format_double(dn.delta) +
                   " (threshold " + format_double(dn.delta_threshold) + ")");
    }
    return c;
}

// ---- criterion 9: Harnack localization ---------------------------------------------

Check criterion_harnack() {
    Check c;
    const Chain& ch = chain();
    int done = 0;
    long violations = 0;
    for (int trial = 0; done < 1000 && trial < 100000; ++trial) {
        Rng rng = Rng::stream(ch.config.seed ^ 0x9a, trial);
        HoloDisk f;
        f.center = 0.0;
        f.radius = rng.uniform(0.5, 3.0);
        f.dim = 3;
        f.coeffs[0] = {cplx(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),
                       0.3 * rng.gauss_c(), 0.1 * rng.gauss_c()};
        f.coeffs[1] = {cplx(rng.uniform(-2, 2), rng.uniform(-2, 2)), 0.3 * rng.gauss_c(),
                       0.1 * rng.gauss_c()};
        double big = 0.0;
        bool finite = true;
        for (int i = 0; i < 64 && finite; ++i) {
            const cplx lam = f.radius * std::sqrt((i + 0.5) / 64.0) *
                             cplx(std::cos(2.39996 * i), std::sin(2.39996 * i));
            const auto pt = f.eval(lam);
            const double v = psi(ch.flat, pt[0], pt[1]);
            if (!std::isfinite(v)) finite = false;
            big = std::max(big, v);
        }
        if (!finite) continue;
        f.coeffs[2] = {cplx(1.25 * big + 1.0, rng.gauss()),
                       0.2 * (big + 1.0) / f.radius * rng.unit()};
        const HarnackReport rep = harnack_localize(ch.flat, f);
        if (!rep.pass) ++violations;
        ++done;
    }
    c.require(done == 1000, "could not build 1000 disks into Omega");
    c.require(violations == 0, std::to_string(violations) + " localization violations");
    return c;
}

// ---- criterion 10: harmonic measure -----------------------------------------------

Check criterion_harmonic_measure() {
    Check c;
    SlitDiskDomain disk{1.0, {}};
    const double two_pi = 6.283185307179586;
    for (double len : {3.141592653589793, 1.0, 4.5}) {
        const auto est = harmonic_measure(disk, circle_arc(0.7, 0.7 + len), 0.0, 100000,
                                          20260808);
        c.require(std::abs(est.value - len / two_pi) <= 3.0 * est.stderr_ + 1e-12,
                  "arc measure misses l/2pi beyond 3 sigma");
        c.require(est.dropped == 0, "dropped walkers in the disk");
    }
    const auto a = harmonic_measure(disk, circle_arc(0.3, 2.1), cplx(0.2, -0.3), 100000, 7);
    const auto b = harmonic_measure(disk, circle_arc(2.1, 0.3), cplx(0.2, -0.3), 100000, 7);
    c.require(std::abs(a.value + b.value - 1.0) <= 3.0 * (a.stderr_ + b.stderr_) + 1e-12,
              "complementary arcs fail to sum to 1");
    const Sh93Report no_slit = sh93_bound_check(2.0, {}, 50000, 3);
    c.require(no_slit.pass && no_slit.omega.value == 1.0, "no-slit geometry fails");
    const Sh93Report one_slit =
        sh93_bound_check(2.0, {Slit{cplx(1.0, 0.0), cplx(2.0, 0.0)}}, 100000, 17);
    c.require(one_slit.pass, "one-slit geometry fails the distance bound");
    c.require(one_slit.omega.value < 1.0, "slit invisible to the walk");
    c.info("one-slit omega = " + format_double(one_slit.omega.value) + " +- " +
           format_double(one_slit.omega.stderr_));
    return c;
}

// ---- criterion 11: Kobayashi brackets ------------------------------------------------

Check criterion_kobayashi() {
    Check c;
    auto disk1 = [](const Point3& p) { return std::abs(p[0]) < 1.0; };
    const UpperEstimate unit = kobayashi_upper(disk1, {cplx(0, 0)}, {cplx(1, 0)}, 1);
    c.require(std::abs(unit.value - 1.0) <= 1e-3, "unit disk k(0;1) misses 1 by 1e-3+");
    for (double R : {0.5, 2.0, 7.0}) {
        auto ball = [R](const Point3& p) {
            return std::norm(p[0]) + std::norm(p[1]) < R * R;
        };
        const UpperEstimate est =
            kobayashi_upper(ball, {cplx(0, 0), cplx(0, 0)}, {cplx(1, 0), cplx(0, 0)}, 2);
        c.require(std::abs(est.value - 1.0 / R) <= 1e-3, "ball bound misses 1/R by 1e-3+");
    }
    const Chain& ch = chain();
    const cplx z0(0.4, 0.3);
    const cplx w0 = branch_values(ch.flat.schedule, ch.flat.level, z0)[0];
    const double at_one = kobayashi_lower_projection(
        ch.flat, {z0, w0, cplx(1, 0)}, {cplx(0, 0), cplx(0, 0), cplx(1, 0)});
    c.require(at_one == halfplane_metric(cplx(1, 0), cplx(1, 0)),
              "projection bound differs from the Cayley oracle");
    c.require(at_one == 0.5, "half-plane bound at zeta = 1 is not exactly 1/2");

    auto inside = [&](const Point3& q) {
        return omega_contains(ch.flat, q[0], q[1], q[2]);
    };
    DiskGrowthOptions growth;
    growth.doublings = 24;
    growth.bisections = 28;
    growth.grid_boundary = 24;
    growth.grid_interior = 16;
    Rng rng(515);
    int done = 0;
    long crossings = 0;
    while (done < 1000) {
        const cplx z(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        const cplx w(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const double base = psi(ch.flat, z, w);
        if (!std::isfinite(base)) continue;
        const Point3 pt{z, w, cplx(base + rng.uniform(0.2, 3.0), rng.uniform(-1, 1))};
        Point3 v{rng.gauss_c(), rng.gauss_c(), rng.gauss_c()};
        double n2 = 0.0;
        for (auto cc : v) n2 += std::norm(cc);
        for (auto& cc : v) cc /= std::sqrt(n2);
        const double lower = kobayashi_lower_projection(ch.flat, pt, v);
        FamilySpec fam;
        fam.trials = 2;
        const UpperEstimate upper = kobayashi_upper(inside, pt, v, 3, fam, done, growth);
        if (upper.admissible_trials == 0) continue;
        if (lower > upper.value + 1e-9) ++crossings;
        ++done;
    }
    c.require(crossings == 0, std::to_string(crossings) + " lower/upper crossings");
    return c;
}

// ---- criterion 12: Property (F) proxy ------------------------------------------------

Check criterion_exclusion() {
    Check c;
    const Chain& ch = chain();
    double prev = 0.0;
    for (double d : {0.5, 1.0, 2.0}) {
        const ExclusionReport rep = disk_exclusion_search(ch.flat, d, 424242);
        c.require(rep.best_trial >= 0, "no disk found at d=" + format_double(d));
        c.require(std::isfinite(rep.best_radius) && rep.best_radius <= 64.0,
                  "best radius not finite");
        c.require(rep.best_radius >= prev - 1e-12, "r(d) decreased in d");
        prev = rep.best_radius;
        // independent recheck of the reported disk at 4x grid density
        c.require(disk_grid_in_f_d(ch.flat, d, rep.best_disk, rep.best_radius, 192, 192),
                  "winning disk fails the 4x-density recheck at d=" + format_double(d));
        c.info("r(" + format_double(d) + ") = " + format_double(rep.best_radius));
    }
    return c;
}

// ---- criterion 13: determinism --------------------------------------------------------

Check criterion_determinism() {
    Check c;
    RunConfig cfg;
    cfg.level = 5;
    cfg.horizon = 3;
    cfg.seed = 42;
    cfg.kappa_samples = 512;
    cfg.kappa_exact_cap = 8;
    cfg.q_z_density = 1.5;
    cfg.alpha_frame_density = 3;
    cfg.alpha_circle_points = 8;
    cfg.beta_disks = 6;
    cfg.beta_cells = 28;
    cfg.delta_bisections = 6;
    cfg.audit_samples = 1000;
    const std::string dir_a = (fs::temp_directory_path() / "wermerlab_det_a").string();
    const std::string dir_b = (fs::temp_directory_path() / "wermerlab_det_b").string();
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    cfg.out_dir = dir_a;
    const PipelineResult ra = pipeline_build_domain(cfg);
    cfg.out_dir = dir_b;
    const PipelineResult rb = pipeline_build_domain(cfg);
    c.require(ra.exit_code == 0 && rb.exit_code == 0, "pipeline runs failed");
    for (const char* name : {"schedule.json", "profile.json", "calibration.csv",
                             "alpha.csv", "audit.json", "manifest.json"}) {
        const std::string a = read_text_file((fs::path(dir_a) / name).string());
        const std::string b = read_text_file((fs::path(dir_b) / name).string());
        c.require(a == b, std::string(name) + " differs between identical-manifest runs");
    }
    return c;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Check()> run;
        double budget_s;  // runtime ceiling from the criterion, 0 = none
    };
    const std::vector<Entry> entries{
        {1, "spiral exactness", criterion_spiral, 1.0},
        {2, "schedule certification", criterion_schedule, 60.0},
        {3, "shift error", criterion_shift, 60.0},
        {4, "monodromy laws", criterion_monodromy, 0.0},
        {5, "alpha(n) decay and q0", criterion_alpha, 0.0},
        {6, "convex profile on the calibrated c-sequence", criterion_profile, 0.0},
        {7, "sublevel inclusion audit", criterion_sublevel, 300.0},
        {8, "beta functionals and delta(n)", criterion_beta, 0.0},
        {9, "Harnack localization", criterion_harnack, 0.0},
        {10, "harmonic measure", criterion_harmonic_measure, 120.0},
        {11, "Kobayashi brackets", criterion_kobayashi, 0.0},
        {12, "large-disk exclusion proxy", criterion_exclusion, 600.0},
        {13, "pipeline determinism", criterion_determinism, 0.0},
    };

    // criteria 6-8, 11, 12 share the calibration chain; build it up front so
    // its cost is attributed once
    const auto chain_t0 = std::chrono::steady_clock::now();
    chain();
    const double chain_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - chain_t0).count();
    std::printf("calibration chain (level 8, horizon 10): %.1f s, q0 = %d\n", chain_s,
                chain().result.q0);

    int failures = 0;
    for (const auto& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = e.run();
        } catch (const std::exception& ex) {
            c.pass = false;
            c.note = std::string("exception: ") + ex.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (e.budget_s > 0.0 && secs > e.budget_s) {
            c.pass = false;
            c.note += (c.note.empty() ? "" : "; ") + std::string("runtime budget exceeded");
        }
        std::printf("%s criterion %2d [%s] (%.2f s)%s%s\n", c.pass ? "PASS" : "FAIL", e.id,
                    e.name, secs, c.note.empty() ? "" : " -- ", c.note.c_str());
        if (!c.pass) ++failures;
    }
    if (failures) std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

// wermerlab: command-line front end. Subcommands map one-to-one onto the
// library modules; every run resolves its parameters, writes the outputs and
// a manifest (config echo + hash + seeds) under --out, and prints the
// primary record to stdout. Exit codes: 0 success, 1 usage, 2 audit
// failure, 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wermerlab/antipeak.hpp"
#include "wermerlab/branches.hpp"
#include "wermerlab/disks.hpp"
#include "wermerlab/harmonic.hpp"
#include "wermerlab/kobayashi.hpp"
#include "wermerlab/lattice.hpp"
#include "wermerlab/pipeline.hpp"
#include "wermerlab/potential.hpp"
#include "wermerlab/profile.hpp"
#include "wermerlab/serialize.hpp"

namespace fs = std::filesystem;
using namespace wermerlab;

namespace {

cplx parse_cplx(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("complex", "expected 're,im', got '" + s + "'");
    return cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

Point3 parse_point3(const std::string& s, int& dim) {
    Point3 out{0.0, 0.0, 0.0};
    dim = 0;
    size_t pos = 0;
    while (pos < s.size() && dim < 3) {
        size_t semi = s.find(';', pos);
        if (semi == std::string::npos) semi = s.size();
        out[dim++] = parse_cplx(s.substr(pos, semi - pos));
        pos = semi + 1;
    }
    return out;
}

struct Common {
    std::string out_dir = "wermerlab_out";
    std::uint64_t seed = 1;
    int m = 6;
    int level = 0;  // 0: min(m, 8)
    std::string schedule_file;
    std::string profile_file;

    EpsilonSchedule schedule() const {
        if (!schedule_file.empty()) {
            EpsilonSchedule s =
                schedule_from_json(njson::parse(read_text_file(schedule_file)));
            const ScheduleCert cert = certify(s);
            if (!cert.ok) {
                std::string msg = "loaded schedule fails certification:";
                for (const auto& v : cert.violations) msg += " " + v;
                throw audit_error(msg);
            }
            return s;
        }
        return build_schedule(m);
    }

    DomainParams params() const {
        DomainParams p;
        p.schedule = schedule();
        p.level = level > 0 ? level : std::min(p.schedule.m, 8);
        p.profile = profile_file.empty()
                        ? zero_profile()
                        : profile_from_json(njson::parse(read_text_file(profile_file)));
        return p;
    }

    void add_to(CLI::App* cmd, bool with_domain = true) {
        cmd->add_option("--out", out_dir, "output directory for artifacts + manifest");
        cmd->add_option("--seed", seed, "root seed for stochastic steps");
        if (with_domain) {
            cmd->add_option("--m", m, "schedule depth when building in place");
            cmd->add_option("--level", level, "evaluation truncation level of E");
            cmd->add_option("--schedule", schedule_file, "load a persisted schedule.json");
            cmd->add_option("--profile", profile_file, "load a persisted profile.json");
        }
    }

    void emit(const std::string& command, const njson& resolved, const njson& record,
              const std::string& stdout_text) const {
        fs::create_directories(out_dir);
        write_text_file((fs::path(out_dir) / "manifest.json").string(),
                        make_manifest(resolved, command.c_str()).dump(2) + "\n");
        if (!record.is_null())
            write_text_file((fs::path(out_dir) / (command + ".json")).string(),
                            record.dump(2) + "\n");
        std::cout << stdout_text;
    }
};

int audit_exit(bool pass) { return pass ? 0 : 2; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for a rigid hyperbolic domain in C^3"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---- lattice ----------------------------------------------------------
    auto* lattice = app.add_subcommand("lattice", "spiral enumeration and square frames");
    auto* spiral = lattice->add_subcommand("spiral", "emit the first N spiral points as CSV");
    static Common sp_common;
    static std::int64_t spiral_n = 25;
    spiral->add_option("--n", spiral_n, "number of points")->required();
    sp_common.add_to(spiral, false);
    spiral->callback([&] {
        if (spiral_n < 1) throw CLI::ValidationError("--n", "must be >= 1");
        std::string csv = "index,re,im\n";
        for (std::int64_t i = 1; i <= spiral_n; ++i) {
            const auto [x, y] = spiral_coords(i);
            csv += std::to_string(i) + "," + std::to_string(x) + "," + std::to_string(y) + "\n";
        }
        fs::create_directories(sp_common.out_dir);
        write_text_file((fs::path(sp_common.out_dir) / "spiral.csv").string(), csv);
        sp_common.emit("lattice-spiral", njson{{"n", spiral_n}}, njson(), csv);
    });

    // ---- wermer -----------------------------------------------------------
    auto* wermer = app.add_subcommand("wermer", "schedules, alpha(n) and shift errors");
    auto* wsched = wermer->add_subcommand("schedule", "build and certify a schedule");
    static Common ws_common;
    static double ws_safety = 0.5;
    static int ws_samples = 2048, ws_cap = 12;
    wsched->add_option("--m", ws_common.m, "target depth")->required();
    wsched->add_option("--safety", ws_safety, "fraction of the eps bound used");
    wsched->add_option("--samples", ws_samples, "kappa circle samples");
    wsched->add_option("--cap", ws_cap, "largest level with sampled kappa");
    wsched->add_option("--out", ws_common.out_dir, "output directory");
    wsched->callback([&] {
        const EpsilonSchedule s = build_schedule(
            ws_common.m, {.safety = ws_safety, .circle_samples = ws_samples,
                          .kappa_exact_cap = ws_cap});
        const ScheduleCert cert = certify(s);
        njson record = to_json(s);
        record["certification"] = {{"ok", cert.ok},
                                   {"min_keq_margin", cert.min_keq_margin},
                                   {"min_peq_margin", cert.min_peq_margin}};
        fs::create_directories(ws_common.out_dir);
        write_text_file((fs::path(ws_common.out_dir) / "schedule.json").string(),
                        to_json(s).dump(2) + "\n");
        ws_common.emit("wermer-schedule",
                       njson{{"m", ws_common.m},
                             {"safety", ws_safety},
                             {"samples", ws_samples},
                             {"cap", ws_cap}},
                       record, record.dump(2) + "\n");
        exit_code = audit_exit(cert.ok);
    });

    auto* walpha = wermer->add_subcommand("alpha", "branch slope bound over S_n");
    static Common wa_common;
    static int wa_n = 1, wa_density = 6, wa_circle = 16;
    walpha->add_option("--n", wa_n, "frame index")->required();
    walpha->add_option("--density", wa_density, "frame grid points per unit");
    walpha->add_option("--circle", wa_circle, "samples on each Delta_{1/8} circle");
    wa_common.add_to(walpha);
    walpha->callback([&] {
        const EpsilonSchedule s = wa_common.schedule();
        const int level = wa_common.level > 0 ? wa_common.level : std::min(s.m, 8);
        const AlphaEstimate a = alpha_bound(s, level, wa_n, wa_density, wa_circle);
        std::string csv = "n,alpha,grid_density\n" + std::to_string(wa_n) + "," +
                          format_double(a.value) + "," + std::to_string(wa_density) + "\n";
        fs::create_directories(wa_common.out_dir);
        write_text_file((fs::path(wa_common.out_dir) / "alpha.csv").string(), csv);
        wa_common.emit("wermer-alpha",
                       njson{{"n", wa_n},
                             {"m", s.m},
                             {"level", level},
                             {"density", wa_density},
                             {"circle", wa_circle}},
                       njson(), csv);
    });

    auto* wshift = wermer->add_subcommand("shift", "shift error over the circle at a_p");
    static Common wsh_common;
    static int wsh_p = 2;
    static double wsh_delta = 0.0;
    wshift->add_option("--p", wsh_p, "branch point index")->required();
    wshift->add_option("--delta", wsh_delta, "tube half-width");
    wsh_common.add_to(wshift);
    wshift->callback([&] {
        const EpsilonSchedule s = wsh_common.schedule();
        const double theta = shift_error(s, wsh_p, wsh_delta);
        const double scale = s.eps_at(wsh_p) * std::sqrt(s.radius_at(wsh_p));
        std::string csv = "p,delta,shift_error,eps_p_sqrt_rp\n" + std::to_string(wsh_p) + "," +
                          format_double(wsh_delta) + "," + format_double(theta) + "," +
                          format_double(scale) + "\n";
        fs::create_directories(wsh_common.out_dir);
        write_text_file((fs::path(wsh_common.out_dir) / "shift.csv").string(), csv);
        wsh_common.emit("wermer-shift",
                        njson{{"p", wsh_p}, {"delta", wsh_delta}, {"m", s.m}}, njson(), csv);
    });

    // ---- potential / domain / calibrate ------------------------------------
    auto* potential = app.add_subcommand("potential", "phi_m and Psi evaluation");
    static Common pot_common;
    static std::string pot_z = "0,0", pot_w = "1,0";
    auto* pphi = potential->add_subcommand("phi", "evaluate phi_m(z, w)");
    pphi->add_option("--z", pot_z)->required();
    pphi->add_option("--w", pot_w)->required();
    pot_common.add_to(pphi);
    pphi->callback([&] {
        const DomainParams p = pot_common.params();
        const cplx z = parse_cplx(pot_z), w = parse_cplx(pot_w);
        const double v = phi_m(p, z, w);
        const njson record{{"z", pot_z}, {"w", pot_w}, {"level", p.level}, {"phi", v}};
        pot_common.emit("potential-phi", record, record, record.dump(2) + "\n");
    });
    auto* ppsi = potential->add_subcommand("psi", "evaluate Psi(rho)(z, w)");
    ppsi->add_option("--z", pot_z)->required();
    ppsi->add_option("--w", pot_w)->required();
    pot_common.add_to(ppsi);
    ppsi->callback([&] {
        const DomainParams p = pot_common.params();
        const PsiValue v = psi_ex(p, parse_cplx(pot_z), parse_cplx(pot_w));
        const njson record{{"z", pot_z},
                           {"w", pot_w},
                           {"level", p.level},
                           {"psi", v.overflow ? njson("inf") : njson(v.value)},
                           {"log_psi", v.log_value},
                           {"overflow", v.overflow}};
        pot_common.emit("potential-psi", record, record, record.dump(2) + "\n");
    });

    auto* domain = app.add_subcommand("domain", "Omega_Psi membership");
    auto* dcontains = domain->add_subcommand("contains", "Re zeta > Psi(z, w)");
    static Common dom_common;
    static std::string dom_z = "0,0", dom_w = "1,0", dom_zeta = "1,0";
    dcontains->add_option("--z", dom_z)->required();
    dcontains->add_option("--w", dom_w)->required();
    dcontains->add_option("--zeta", dom_zeta)->required();
    dom_common.add_to(dcontains);
    dcontains->callback([&] {
        const DomainParams p = dom_common.params();
        const bool in = omega_contains(p, parse_cplx(dom_z), parse_cplx(dom_w),
                                       parse_cplx(dom_zeta));
        const njson record{{"z", dom_z},
                           {"w", dom_w},
                           {"zeta", dom_zeta},
                           {"level", p.level},
                           {"contains", in}};
        dom_common.emit("domain-contains", record, record, record.dump(2) + "\n");
    });

    auto* calibrate = app.add_subcommand("calibrate", "kappa(n), q(n) and c(n)");
    auto* calq = calibrate->add_subcommand("q", "shell calibration of q(n)");
    static Common cq_common;
    static int cq_n = 1;
    static double cq_density = 2.0, cq_margin = 1.0;
    calq->add_option("--n", cq_n)->required();
    calq->add_option("--density", cq_density, "z grid points per unit");
    calq->add_option("--margin", cq_margin, "safety added to the sampled sup");
    cq_common.add_to(calq);
    calq->callback([&] {
        const DomainParams p = cq_common.params();
        const RegionKappa kap = kappa_region(p.schedule, cq_n);
        const QCalibration q = calibrate_q(p, cq_n, kap.log_value,
                                           {.z_density = cq_density, .margin = cq_margin});
        const njson record{{"n", cq_n},
                           {"log_kappa", kap.log_value},
                           {"kappa_levels", kap.count},
                           {"full_coverage", kap.full_coverage},
                           {"q", q.q},
                           {"sampled_sup", q.sampled_sup},
                           {"margin", q.margin},
                           {"shell_points", q.shell_points},
                           {"grid_spacing", q.grid_spacing},
                           {"level", p.level}};
        cq_common.emit("calibrate-q", record, record, record.dump(2) + "\n");
    });
    auto* calc = calibrate->add_subcommand("c", "c(n) from q(n)/q~(n) and q0");
    static Common cc_common;
    static int cc_n = 1, cc_q0 = 1;
    static double cc_q = 1.0, cc_qt = -1.0;
    calc->add_option("--n", cc_n)->required();
    calc->add_option("--q0", cc_q0)->required();
    calc->add_option("--q", cc_q)->required();
    calc->add_option("--q-tilde", cc_qt, "defaults to q when omitted");
    cc_common.add_to(calc, false);
    calc->callback([&] {
        const double qt = cc_qt < 0 ? cc_q : cc_qt;
        const double c = calibrate_c(cc_n, cc_q0, cc_q, qt);
        const njson record{
            {"n", cc_n}, {"q0", cc_q0}, {"q", cc_q}, {"q_tilde", qt}, {"c", c}};
        cc_common.emit("calibrate-c", record, record, record.dump(2) + "\n");
    });

    // ---- rho ----------------------------------------------------------------
    auto* rho = app.add_subcommand("rho", "convex profile construction and checks");
    auto* rbuild = rho->add_subcommand("build", "build rho_1 from a c-sequence file");
    static Common rb_common;
    static std::string rb_cfile;
    rbuild->add_option("--c-file", rb_cfile, "JSON array of c(0), c(1), ...")->required();
    rb_common.add_to(rbuild, false);
    rbuild->callback([&] {
        const auto c = njson::parse(read_text_file(rb_cfile)).get<std::vector<double>>();
        const ConvexProfile p = build_rho1(c, static_cast<int>(c.size()) - 1);
        fs::create_directories(rb_common.out_dir);
        write_text_file((fs::path(rb_common.out_dir) / "profile.json").string(),
                        to_json(p).dump(2) + "\n");
        rb_common.emit("rho-build", njson{{"c", c}}, to_json(p), to_json(p).dump(2) + "\n");
    });
    auto* reval = rho->add_subcommand("eval", "evaluate rho(t)");
    static Common re_common;
    static double re_t = 0.0;
    reval->add_option("--t", re_t)->required();
    reval->add_option("--profile", re_common.profile_file)->required();
    re_common.add_to(reval, false);
    reval->callback([&] {
        const ConvexProfile p =
            profile_from_json(njson::parse(read_text_file(re_common.profile_file)));
        const njson record{{"t", re_t},
                           {"rho", rho_eval(p, re_t)},
                           {"rho1", rho1_eval(p, re_t)}};
        re_common.emit("rho-eval", record, record, record.dump(2) + "\n");
    });
    auto* rcheck = rho->add_subcommand("check", "grid check of the profile inequalities");
    static Common rc_common;
    static int rc_N = 4;
    static std::string rc_cfile;
    rcheck->add_option("--N", rc_N)->required();
    rcheck->add_option("--profile", rc_common.profile_file)->required();
    rcheck->add_option("--c-file", rc_cfile)->required();
    rc_common.add_to(rcheck, false);
    rcheck->callback([&] {
        const ConvexProfile p =
            profile_from_json(njson::parse(read_text_file(rc_common.profile_file)));
        const auto c = njson::parse(read_text_file(rc_cfile)).get<std::vector<double>>();
        const RhoCheckReport rep = rho_check(p, c, rc_N, std::max(0, rc_N - 2));
        const njson record{{"N", rc_N},
                           {"ok", rep.ok},
                           {"worst_lemma_margin", rep.worst_lemma_margin},
                           {"lemma_witness_t", rep.lemma_witness_t},
                           {"lemma_witness_n", rep.lemma_witness_n},
                           {"worst_conveq_margin", rep.worst_conveq_margin}};
        rc_common.emit("rho-check", record, record, record.dump(2) + "\n");
        exit_code = audit_exit(rep.ok);
    });

    // ---- disks --------------------------------------------------------------
    auto* disks = app.add_subcommand("disks", "holomorphic disk functionals");
    auto* dbeta = disks->add_subcommand("beta", "sampled beta_n^delta");
    static Common db_common;
    static int db_n = 3, db_count = 16, db_cells = 48;
    static double db_delta = 0.1;
    dbeta->add_option("--n", db_n)->required();
    dbeta->add_option("--delta", db_delta)->required();
    dbeta->add_option("--count", db_count, "H_n disks sampled");
    dbeta->add_option("--cells", db_cells, "raster cells per side");
    db_common.add_to(dbeta);
    dbeta->callback([&] {
        const DomainParams p = db_common.params();
        const BetaNReport rep = beta_n(p, db_n, db_delta, db_count, db_common.seed, db_cells);
        std::string csv = "n,delta,beta,disks_sampled,seed\n" + std::to_string(db_n) + "," +
                          format_double(db_delta) + "," + format_double(rep.beta) + "," +
                          std::to_string(rep.disks) + "," + std::to_string(db_common.seed) +
                          "\n";
        fs::create_directories(db_common.out_dir);
        write_text_file((fs::path(db_common.out_dir) / "beta.csv").string(), csv);
        db_common.emit("disks-beta",
                       njson{{"n", db_n},
                             {"delta", db_delta},
                             {"count", db_count},
                             {"cells", db_cells},
                             {"seed", db_common.seed}},
                       njson(), csv);
    });
    auto* ddelta = disks->add_subcommand("delta-n", "bisected delta(n)");
    static Common dd_common;
    static int dd_n = 3, dd_disks = 12, dd_cells = 40, dd_bis = 9, dd_kmin = 1;
    ddelta->add_option("--n", dd_n)->required();
    ddelta->add_option("--count", dd_disks, "disks per k");
    ddelta->add_option("--cells", dd_cells);
    ddelta->add_option("--bisections", dd_bis);
    ddelta->add_option("--k-min", dd_kmin, "clamp of the k range (q0)");
    dd_common.add_to(ddelta);
    ddelta->callback([&] {
        const DomainParams p = dd_common.params();
        const DeltaNReport rep = delta_n(p, dd_n, dd_common.seed,
                                         {.disks_per_k = dd_disks,
                                          .cells_per_side = dd_cells,
                                          .bisections = dd_bis,
                                          .k_min = dd_kmin});
        const njson record{{"n", dd_n},
                           {"delta", rep.delta},
                           {"delta_threshold", rep.delta_threshold},
                           {"k_lo", rep.k_lo},
                           {"k_hi", rep.k_hi},
                           {"final_betas", rep.final_betas},
                           {"seed", dd_common.seed}};
        dd_common.emit("disks-delta-n", record, record, record.dump(2) + "\n");
    });
    auto* dexclude = disks->add_subcommand("exclude", "large-disk exclusion search in F_d");
    static Common de_common;
    static double de_d = 1.0, de_rmax = 64.0;
    static int de_trials = 48;
    dexclude->add_option("--d", de_d)->required();
    dexclude->add_option("--r", de_rmax, "radius ladder cap");
    dexclude->add_option("--trials", de_trials);
    de_common.add_to(dexclude);
    dexclude->callback([&] {
        const DomainParams p = de_common.params();
        const ExclusionReport rep = disk_exclusion_search(
            p, de_d, de_common.seed, {.trials = de_trials, .r_max = de_rmax});
        std::string csv =
            "d,best_radius,trials,tube_escapes,frame_growth,monodromy_hits,seed\n" +
            format_double(de_d) + "," + format_double(rep.best_radius) + "," +
            std::to_string(rep.trials) + "," + std::to_string(rep.tube_escapes) + "," +
            std::to_string(rep.frame_growth) + "," + std::to_string(rep.monodromy_hits) +
            "," + std::to_string(de_common.seed) + "\n";
        fs::create_directories(de_common.out_dir);
        write_text_file((fs::path(de_common.out_dir) / "exclude.csv").string(), csv);
        de_common.emit("disks-exclude",
                       njson{{"d", de_d},
                             {"r_max", de_rmax},
                             {"trials", de_trials},
                             {"seed", de_common.seed}},
                       njson(), csv);
    });
    auto* dharnack = disks->add_subcommand("harnack", "Harnack localization audit");
    static Common dh_common;
    static int dh_trials = 100;
    dharnack->add_option("--trials", dh_trials);
    dh_common.add_to(dharnack);
    dharnack->callback([&] {
        const DomainParams p = dh_common.params();
        std::string csv = "trial,radius,pass,worst_ratio,seed\n";
        bool all_pass = true;
        int done = 0;
        for (int trial = 0; done < dh_trials && trial < 100 * dh_trials; ++trial) {
            Rng rng = Rng::stream(dh_common.seed, trial);
            HoloDisk f;
            f.center = 0.0;
            f.radius = rng.uniform(0.5, 3.0);
            f.dim = 3;
            f.coeffs[0] = {cplx(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)),
                           0.3 * rng.gauss_c()};
            f.coeffs[1] = {cplx(rng.uniform(-2, 2), rng.uniform(-2, 2)), 0.3 * rng.gauss_c()};
            double big = 0.0;
            bool finite = true;
            for (int i = 0; i < 64 && finite; ++i) {
                const cplx lam = f.radius * std::sqrt((i + 0.5) / 64.0) * Rng(i + 1).unit();
                const auto pt = f.eval(lam);
                const double v = psi(p, pt[0], pt[1]);
                if (!std::isfinite(v)) finite = false;
                big = std::max(big, v);
            }
            if (!finite) continue;
            f.coeffs[2] = {cplx(1.25 * big + 1.0, 0.0),
                           0.2 * (big + 1.0) / f.radius * rng.unit()};
            const HarnackReport rep = harnack_localize(p, f);
            all_pass = all_pass && rep.pass;
            csv += std::to_string(done) + "," + format_double(f.radius) + "," +
                   (rep.pass ? "1" : "0") + "," + format_double(rep.worst_ratio) + "," +
                   std::to_string(dh_common.seed) + "\n";
            ++done;
        }
        fs::create_directories(dh_common.out_dir);
        write_text_file((fs::path(dh_common.out_dir) / "harnack.csv").string(), csv);
        dh_common.emit("disks-harnack",
                       njson{{"trials", dh_trials}, {"seed", dh_common.seed}}, njson(), csv);
        exit_code = audit_exit(all_pass);
    });

    // ---- kob ------------------------------------------------------------------
    auto* kob = app.add_subcommand("kob", "Kobayashi pseudometric bounds");
    static Common kob_common;
    static std::string kob_point = "0,0", kob_dir = "1,0", kob_domain = "disk";
    auto add_kob = [&](CLI::App* cmd) {
        cmd->add_option("--point", kob_point, "base point 're,im[;re,im[;re,im]]'")
            ->required();
        cmd->add_option("--dir", kob_dir, "direction, same format")->required();
        cmd->add_option("--domain", kob_domain, "disk | ball:R | omega");
        kob_common.add_to(cmd);
    };
    auto* kupper = kob->add_subcommand("upper", "disk-search upper bound");
    add_kob(kupper);
    kupper->callback([&] {
        int dim_p = 0, dim_v = 0;
        const Point3 z = parse_point3(kob_point, dim_p);
        const Point3 v = parse_point3(kob_dir, dim_v);
        if (dim_p != dim_v) throw CLI::ValidationError("--dir", "dimension mismatch");
        Membership inside;
        FamilySpec family;
        if (kob_domain == "disk") {
            inside = [](const Point3& q) { return std::abs(q[0]) < 1.0; };
            if (dim_p == 1) family.extra.push_back(moebius_disk_candidate(z[0], v[0]));
        } else if (kob_domain.rfind("ball:", 0) == 0) {
            const double R = std::stod(kob_domain.substr(5));
            inside = [R, dim_p](const Point3& q) {
                double n2 = 0;
                for (int i = 0; i < dim_p; ++i) n2 += std::norm(q[i]);
                return n2 < R * R;
            };
        } else if (kob_domain == "omega") {
            const DomainParams p = kob_common.params();
            inside = [p](const Point3& q) { return omega_contains(p, q[0], q[1], q[2]); };
        } else {
            throw CLI::ValidationError("--domain", "unknown domain spec");
        }
        const UpperEstimate est =
            kobayashi_upper(inside, z, v, dim_p, family, kob_common.seed);
        const njson record{{"point", kob_point},
                           {"dir", kob_dir},
                           {"domain", kob_domain},
                           {"upper", est.value},
                           {"best_radius", est.best_radius},
                           {"best_disk", est.best_label},
                           {"admissible_trials", est.admissible_trials},
                           {"seed", kob_common.seed}};
        kob_common.emit("kob-upper", record, record, record.dump(2) + "\n");
    });
    auto* klower = kob->add_subcommand("lower", "half-plane projection lower bound");
    add_kob(klower);
    klower->callback([&] {
        int dim_p = 0, dim_v = 0;
        const Point3 z = parse_point3(kob_point, dim_p);
        const Point3 v = parse_point3(kob_dir, dim_v);
        if (dim_p != 3 || dim_v != 3)
            throw CLI::ValidationError("--point", "lower bound lives on Omega in C^3");
        const DomainParams p = kob_common.params();
        const double lower = kobayashi_lower_projection(p, z, v);
        const njson record{{"point", kob_point},
                           {"dir", kob_dir},
                           {"lower", lower},
                           {"method", "halfplane-projection"}};
        kob_common.emit("kob-lower", record, record, record.dump(2) + "\n");
    });

    // ---- hm ---------------------------------------------------------------------
    auto* hm = app.add_subcommand("hm", "harmonic measure by walk-on-spheres");
    auto* hmest = hm->add_subcommand("estimate", "arc measure in a disk domain");
    static Common hm_common;
    static std::string hm_arc = "0:3.141592653589793", hm_p = "0,0", hm_slits;
    static double hm_R = 1.0;
    static long hm_walkers = 100000;
    hmest->add_option("--arc", hm_arc, "theta0:theta1 on the outer circle");
    hmest->add_option("--p", hm_p, "interior start point");
    hmest->add_option("--R", hm_R, "disk radius");
    hmest->add_option("--slits", hm_slits, "angle:r0:r1[,...] radial slits");
    hmest->add_option("--walkers", hm_walkers);
    hm_common.add_to(hmest, false);
    auto parse_slits = [](const std::string& text) {
        std::vector<Slit> out;
        size_t pos = 0;
        while (pos < text.size()) {
            size_t comma = text.find(',', pos);
            if (comma == std::string::npos) comma = text.size();
            const std::string item = text.substr(pos, comma - pos);
            const size_t c1 = item.find(':'), c2 = item.find(':', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos)
                throw CLI::ValidationError("--slits", "expected angle:r0:r1");
            const double ang = std::stod(item.substr(0, c1));
            const double r0 = std::stod(item.substr(c1 + 1, c2 - c1 - 1));
            const double r1 = std::stod(item.substr(c2 + 1));
            out.push_back(Slit{r0 * cplx(std::cos(ang), std::sin(ang)),
                               r1 * cplx(std::cos(ang), std::sin(ang))});
            pos = comma + 1;
        }
        return out;
    };
    hmest->callback([&] {
        SlitDiskDomain dom{hm_R, parse_slits(hm_slits)};
        const size_t colon = hm_arc.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--arc", "expected theta0:theta1");
        const double t0 = std::stod(hm_arc.substr(0, colon));
        const double t1 = std::stod(hm_arc.substr(colon + 1));
        const auto est = harmonic_measure(dom, circle_arc(t0, t1), parse_cplx(hm_p),
                                          hm_walkers, hm_common.seed);
        const njson record{{"arc", hm_arc},        {"p", hm_p},
                           {"R", hm_R},            {"slits", hm_slits},
                           {"walkers", hm_walkers}, {"value", est.value},
                           {"stderr", est.stderr_}, {"dropped", est.dropped},
                           {"seed", hm_common.seed}};
        hm_common.emit("hm-estimate", record, record, record.dump(2) + "\n");
    });
    auto* hmsh = hm->add_subcommand("sh93", "distance vs harmonic measure inequality");
    static Common sh_common;
    static double sh_k = 1.0;
    static std::string sh_slits;
    static long sh_walkers = 100000;
    hmsh->add_option("--k", sh_k)->required();
    hmsh->add_option("--slits", sh_slits, "angle:r0:r1[,...]");
    hmsh->add_option("--walkers", sh_walkers);
    sh_common.add_to(hmsh, false);
    hmsh->callback([&] {
        const Sh93Report rep =
            sh93_bound_check(sh_k, parse_slits(sh_slits), sh_walkers, sh_common.seed);
        const njson record{{"k", sh_k},
                           {"slits", sh_slits},
                           {"walkers", sh_walkers},
                           {"omega", rep.omega.value},
                           {"omega_stderr", rep.omega.stderr_},
                           {"dist", rep.dist},
                           {"bound", rep.bound},
                           {"bound_minus_3sigma", rep.bound_minus_3sigma},
                           {"pass", rep.pass},
                           {"seed", sh_common.seed}};
        sh_common.emit("hm-sh93", record, record, record.dump(2) + "\n");
        exit_code = audit_exit(rep.pass);
    });

    // ---- antipeak ------------------------------------------------------------------
    auto* antipeak = app.add_subcommand("antipeak", "strong antipeak candidate checks");
    auto* apcheck = antipeak->add_subcommand("check", "run the sampled surrogates");
    static Common ap_common;
    static std::string ap_domain = "cone:0.5", ap_phi = "inv-z";
    static std::string ap_radii = "2,5,10,25";
    apcheck->add_option("--domain", ap_domain, "cone:EPS | halfplane");
    apcheck->add_option("--phi", ap_phi, "inv-z | exp-neg");
    apcheck->add_option("--radii", ap_radii, "comma-separated decay radii");
    ap_common.add_to(apcheck, false);
    apcheck->callback([&] {
        std::vector<double> radii;
        size_t pos = 0;
        while (pos < ap_radii.size()) {
            size_t comma = ap_radii.find(',', pos);
            if (comma == std::string::npos) comma = ap_radii.size();
            radii.push_back(std::stod(ap_radii.substr(pos, comma - pos)));
            pos = comma + 1;
        }
        Membership inside;
        PointSampler sampler;
        FarSampler far;
        int dim = 1;
        if (ap_domain.rfind("cone:", 0) == 0) {
            const double eps = std::stod(ap_domain.substr(5));
            dim = 2;
            inside = [eps](const Point3& q) {
                return std::abs(q[1]) < std::abs(q[0]) && std::abs(q[0]) > eps;
            };
            sampler = [eps](Rng& rng) {
                const cplx z = rng.uniform(eps + 0.05, 6.0) * rng.unit();
                return Point3{z, rng.uniform(0.0, 0.95) * std::abs(z) * rng.unit(), 0.0};
            };
            far = [](double R, Rng& rng) {
                const cplx z = rng.uniform(1.0, 2.0) * R * rng.unit();
                return Point3{z, rng.uniform(0.0, 0.95) * std::abs(z) * rng.unit(), 0.0};
            };
        } else if (ap_domain == "halfplane") {
            inside = [](const Point3& q) { return q[0].real() > 0.0; };
            sampler = [](Rng& rng) {
                return Point3{cplx(rng.uniform(0.05, 5.0), rng.uniform(-5.0, 5.0)), 0.0, 0.0};
            };
            far = [](double R, Rng& rng) {
                const double th = rng.uniform(-1.5607, 1.5607);
                return Point3{rng.uniform(1.0, 1.5) * R * cplx(std::cos(th), std::sin(th)),
                              0.0, 0.0};
            };
        } else {
            throw CLI::ValidationError("--domain", "unknown domain spec");
        }
        ScalarField phi;
        if (ap_phi == "inv-z")
            phi = [](const Point3& q) { return 1.0 / std::abs(q[0]); };
        else if (ap_phi == "exp-neg")
            phi = modulus_candidate([](const Point3& q) { return std::exp(-q[0]); });
        else
            throw CLI::ValidationError("--phi", "unknown candidate");
        const AntipeakReport rep =
            antipeak_check(inside, phi, dim, sampler, far, radii, ap_common.seed);
        njson decay = njson::array();
        for (const auto& e : rep.decay_profile)
            decay.push_back({{"R", e.R}, {"c_R", e.c_R}, {"samples", e.samples}});
        const njson record{{"domain", ap_domain},
                           {"phi", ap_phi},
                           {"positivity_margin", rep.positivity_margin},
                           {"upper_bound", rep.upper_bound},
                           {"decay_profile", decay},
                           {"decays", rep.decays},
                           {"psh_violations", rep.psh_violations},
                           {"psh_lines", rep.psh_lines},
                           {"seed", ap_common.seed}};
        ap_common.emit("antipeak-check", record, record, record.dump(2) + "\n");
    });

    // ---- mvcert -----------------------------------------------------------------------
    auto* mvcert = app.add_subcommand("mvcert", "mean value certificate");
    auto* mvrun = mvcert->add_subcommand("run", "line disk in the unit ball scenario");
    static Common mv_common;
    static double mv_k = 2.0, mv_R = 0.3, mv_slope = 0.3;
    static long mv_walkers = 20000;
    mvrun->add_option("--k", mv_k)->required();
    mvrun->add_option("--R", mv_R)->required();
    mvrun->add_option("--slope", mv_slope, "disk direction scale");
    mvrun->add_option("--walkers", mv_walkers);
    mv_common.add_to(mvrun, false);
    mvrun->callback([&] {
        auto ball = [](const Point3& q) { return std::norm(q[0]) + std::norm(q[1]) < 1.0; };
        ScalarField phi = [](const Point3& q) { return 0.25 + 0.5 * std::abs(q[0]); };
        HoloDisk f;
        f.center = 0.0;
        f.radius = 1.0;
        f.dim = 2;
        f.coeffs[0] = {cplx(0, 0), cplx(mv_slope, 0)};
        f.coeffs[1] = {cplx(0, 0)};
        const MvcReport rep = mean_value_certificate(
            f, ball, phi, mv_k, mv_R, 1.0, 0.25 + 0.5 * mv_R, mv_common.seed,
            {.walkers = mv_walkers});
        const njson record{{"k", mv_k},
                           {"R", mv_R},
                           {"alpha", rep.alpha},
                           {"epsilon", rep.epsilon},
                           {"eps_stderr", rep.eps_stderr},
                           {"rhs", rep.rhs},
                           {"slack", rep.slack},
                           {"violated", rep.violated},
                           {"inner_boundary_cells", rep.inner_boundary_cells},
                           {"walkers", mv_walkers},
                           {"seed", mv_common.seed}};
        mv_common.emit("mvcert-run", record, record, record.dump(2) + "\n");
        exit_code = audit_exit(!rep.violated);
    });

    // ---- pipeline / plot -----------------------------------------------------------
    auto* pipeline = app.add_subcommand("pipeline", "end-to-end construction");
    auto* pbuild = pipeline->add_subcommand("build", "schedule -> calibrations -> profile");
    static std::string pb_config;
    static RunConfig pb_run;
    pbuild->add_option("--config", pb_config, "JSON run configuration");
    pbuild->add_option("--level", pb_run.level);
    pbuild->add_option("--horizon", pb_run.horizon);
    pbuild->add_option("--seed", pb_run.seed);
    pbuild->add_option("--out", pb_run.out_dir);
    pbuild->callback([&] {
        RunConfig config = pb_run;
        if (!pb_config.empty()) {
            config = config_from_json(njson::parse(read_text_file(pb_config)));
            config.out_dir = pb_run.out_dir;
        }
        const PipelineResult res = pipeline_build_domain(config);
        std::cout << res.audit.dump(2) << "\n";
        if (res.exit_code != 0)
            std::cerr << "pipeline failed at stage: " << res.failed_stage << "\n";
        exit_code = res.exit_code;
    });
    auto* plot = app.add_subcommand("plot", "emit plot data from run artifacts");
    static std::string plot_kind = "alpha", plot_run = "wermerlab_out";
    plot->add_option("--kind", plot_kind, "alpha | beta | branches | exclusion")->required();
    plot->add_option("--run", plot_run, "pipeline output directory")->required();
    plot->callback([&] { emit_plot_data(plot_kind, plot_run); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors exit 1
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const audit_error& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}

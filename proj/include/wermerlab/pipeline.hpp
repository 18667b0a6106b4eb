#pragma once

// End-to-end pipeline: certified schedule -> alpha(n)/q0 -> kappa(n)/q(n) ->
// delta(n)/q~(n) -> c(n) -> convex profile -> inequality audits, with every
// artifact persisted as JSON/CSV under an output directory plus a manifest
// (config echo, hash, seeds). Reruns with an identical manifest reproduce
// every output byte for byte: no timestamps, fixed float formatting, all
// randomness derived from the manifest seed.

#include <filesystem>
#include <string>
#include <vector>

#include "wermerlab/branches.hpp"
#include "wermerlab/disks.hpp"
#include "wermerlab/potential.hpp"
#include "wermerlab/profile.hpp"
#include "wermerlab/serialize.hpp"

namespace wermerlab {

struct RunConfig {
    int level = 6;        // evaluation truncation of E
    int horizon = 6;      // conv-eq holds for n = 1..horizon
    double safety = 0.5;
    std::uint64_t seed = 1;
    std::string out_dir = "wermerlab_out";

    int kappa_samples = 2048;
    int kappa_exact_cap = 12;
    double q_z_density = 2.0;
    int q_theta = 8;
    double q_margin = 1.0;
    int alpha_frame_density = 4;
    int alpha_circle_points = 12;
    int beta_disks = 10;
    int beta_cells = 40;
    int delta_bisections = 8;
    long audit_samples = 2000;
    double audit_d_factor = 0.25;  // d = factor * e^n, so 2d / e^n < 1

    int calib_n_max() const { return horizon + 4; }
    int schedule_depth() const {
        const int side = 2 * (calib_n_max() + 2) + 1;
        return side * side;  // covers every a_p in S~_n up to n = calib_n_max
    }
};

// out_dir is deliberately not part of the config echo: it is a location, not
// a run parameter, and runs into different directories must compare equal.
inline njson to_json(const RunConfig& c) {
    return njson{{"level", c.level},
                 {"horizon", c.horizon},
                 {"safety", c.safety},
                 {"seed", c.seed},
                 {"kappa_samples", c.kappa_samples},
                 {"kappa_exact_cap", c.kappa_exact_cap},
                 {"q_z_density", c.q_z_density},
                 {"q_theta", c.q_theta},
                 {"q_margin", c.q_margin},
                 {"alpha_frame_density", c.alpha_frame_density},
                 {"alpha_circle_points", c.alpha_circle_points},
                 {"beta_disks", c.beta_disks},
                 {"beta_cells", c.beta_cells},
                 {"delta_bisections", c.delta_bisections},
                 {"audit_samples", c.audit_samples},
                 {"audit_d_factor", c.audit_d_factor}};
}

inline RunConfig config_from_json(const njson& j) {
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("level", c.level);
    get("horizon", c.horizon);
    get("safety", c.safety);
    get("seed", c.seed);
    get("out_dir", c.out_dir);
    get("kappa_samples", c.kappa_samples);
    get("kappa_exact_cap", c.kappa_exact_cap);
    get("q_z_density", c.q_z_density);
    get("q_theta", c.q_theta);
    get("q_margin", c.q_margin);
    get("alpha_frame_density", c.alpha_frame_density);
    get("alpha_circle_points", c.alpha_circle_points);
    get("beta_disks", c.beta_disks);
    get("beta_cells", c.beta_cells);
    get("delta_bisections", c.delta_bisections);
    get("audit_samples", c.audit_samples);
    get("audit_d_factor", c.audit_d_factor);
    return c;
}

inline std::string config_hash(const njson& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline njson make_manifest(const njson& config_json, const char* command) {
    njson m;
    m["tool"] = "wermerlab";
    m["version"] = "1.0.0";
    m["command"] = command;
    m["config"] = config_json;
    m["config_hash"] = config_hash(config_json);
    return m;
}

struct PipelineResult {
    int exit_code = 0;  // 0 ok, 2 audit failure, 3 numerical failure
    std::string failed_stage;
    int q0 = 0;
    std::vector<double> alphas;
    std::vector<double> log_kappas;   // kappa(n), n = 1..N
    std::vector<double> q_values;     // q(n)
    std::vector<double> deltas;       // delta(n) (0 below q0)
    std::vector<double> q_tilde;      // q~(n)
    std::vector<double> c_values;     // c(n)
    EpsilonSchedule schedule;
    ConvexProfile profile;
    njson audit;
};

/// Runs the whole construction and writes schedule.json, profile.json,
/// calibration.csv, alpha.csv, audit.json and manifest.json to
/// config.out_dir. Exit code 0 iff every audited inequality holds.
inline PipelineResult pipeline_build_domain(const RunConfig& config) {
    namespace fs = std::filesystem;
    PipelineResult res;
    res.audit["stages"] = njson::array();
    auto stage = [&](const std::string& name, bool pass, njson detail) {
        detail["stage"] = name;
        detail["pass"] = pass;
        res.audit["stages"].push_back(detail);
        if (!pass && res.exit_code == 0) {
            res.exit_code = 2;
            res.failed_stage = name;
        }
        return pass;
    };

    fs::create_directories(config.out_dir);
    const njson config_json = to_json(config);

    try {
        // 1. schedule, certified
        const int depth = config.schedule_depth();
        res.schedule = build_schedule(depth, {.safety = config.safety,
                                              .circle_samples = config.kappa_samples,
                                              .kappa_exact_cap = config.kappa_exact_cap});
        const ScheduleCert cert = certify(res.schedule);
        stage("schedule", cert.ok,
              {{"m", depth},
               {"min_keq_margin", cert.min_keq_margin},
               {"min_peq_margin", cert.min_peq_margin},
               {"checked", cert.checked}});

        DomainParams params;
        params.schedule = res.schedule;
        params.level = config.level;
        params.profile = zero_profile();

        // 2. alpha(n) at two densities and q0
        const int alpha_n_max = config.horizon + 2;
        std::vector<double> alphas_fine;
        for (int n = 1; n <= alpha_n_max; ++n) {
            res.alphas.push_back(alpha_bound(res.schedule, config.level, n,
                                             config.alpha_frame_density,
                                             config.alpha_circle_points)
                                     .value);
            alphas_fine.push_back(
                alpha_bound(res.schedule, config.level, n, config.alpha_frame_density + 2,
                            config.alpha_circle_points + 4)
                    .value);
        }
        res.q0 = q0_from_alphas(res.alphas);
        bool alpha_ok = res.q0 >= 1;
        bool alpha_monotone = true;
        double stability = 0.0;
        for (size_t i = 0; i < res.alphas.size(); ++i) {
            if (i && res.alphas[i] > res.alphas[i - 1] + 1e-12) alpha_monotone = false;
            stability = std::max(stability, std::abs(res.alphas[i] - alphas_fine[i]) /
                                                std::max(alphas_fine[i], 1e-12));
        }
        stage("alpha",
              alpha_ok && alpha_monotone && stability < 0.05,
              {{"q0", res.q0},
               {"alphas", res.alphas},
               {"alphas_fine", alphas_fine},
               {"nonincreasing", alpha_monotone},
               {"two_density_rel_gap", stability}});
        if (res.q0 < 1) {
            write_text_file(fs::path(config.out_dir) / "audit.json", res.audit.dump(2) + "\n");
            return res;
        }

        // 3. kappa(n) and q(n) for n = 1..N
        const int N = config.calib_n_max();
        const QCalibrationOptions qopts{config.q_z_density, config.q_theta, config.q_margin,
                                        {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}, 8};
        for (int n = 1; n <= N; ++n) {
            const RegionKappa kap = kappa_region(res.schedule, n);
            res.log_kappas.push_back(kap.log_value);
            res.q_values.push_back(calibrate_q(params, n, kap.log_value, qopts).q);
        }
        // any larger q(n) still satisfies the sublevel inclusion, and the
        // c-sequence needs q(n) + n increasing: take the running maximum
        // (the raw values can dip once the frames leave the branch points)
        for (size_t i = 1; i < res.q_values.size(); ++i)
            res.q_values[i] = std::max(res.q_values[i], res.q_values[i - 1]);
        stage("kappa_q", true,
              {{"log_kappa", res.log_kappas}, {"q", res.q_values}, {"n_max", N}});

        // 4. delta(n) by bisection and q~(n) for n >= q0. Whenever
        // delta(n) >= kappa(n) the kappa-tube sits inside the delta-tube, so
        // q~(n) = q(n) already satisfies the second inclusion; the shell
        // calibration at radius delta(n) is only needed in the opposite case.
        res.deltas.assign(N, 0.0);
        res.q_tilde = res.q_values;
        for (int n = res.q0; n <= N; ++n) {
            const DeltaNReport d =
                delta_n(params, n, config.seed,
                        {.disks_per_k = config.beta_disks,
                         .cells_per_side = config.beta_cells,
                         .bisections = config.delta_bisections,
                         .k_min = res.q0});
            res.deltas[n - 1] = d.delta;
            if (std::log(d.delta) < res.log_kappas[n - 1]) {
                const double q_at_delta =
                    calibrate_q(params, n, std::log(d.delta), qopts).q;
                res.q_tilde[n - 1] = std::max(res.q_values[n - 1], q_at_delta);
            }
        }
        stage("delta_qtilde", true, {{"delta", res.deltas}, {"q_tilde", res.q_tilde}});

        // 5. c(n) and the convex profile from the shifted sequence
        res.c_values = build_c_sequence(res.q_values, res.q_tilde, res.q0);
        std::vector<double> shifted;  // C(j) = c(j+2): rho >= c(n) on [n-1, n+2]
        for (int j = 0; j + 2 <= N; ++j) shifted.push_back(res.c_values[j + 1]);
        res.profile = build_rho1(shifted, static_cast<int>(shifted.size()) - 1);
        params.profile = res.profile;

        // zero-indexed list with a c(0) below c(1) for the n = 0 clause
        std::vector<double> c_from0{0.5 * res.c_values[0]};
        c_from0.insert(c_from0.end(), res.c_values.begin(), res.c_values.end());
        const RhoCheckReport rho_rep =
            rho_check(res.profile, c_from0, std::max(0, N - 3), config.horizon);
        bool convex_ok = true;
        {
            const double h = 1e-2;
            for (double t = h; t <= N - 3.0; t += h) {
                const double d2 = rho_eval(res.profile, t - h) - 2 * rho_eval(res.profile, t) +
                                  rho_eval(res.profile, t + h);
                if (d2 < -1e-9) convex_ok = false;
            }
        }
        stage("profile", rho_rep.ok && convex_ok,
              {{"c", res.c_values},
               {"worst_lemma_margin", rho_rep.worst_lemma_margin},
               {"worst_conveq_margin", rho_rep.worst_conveq_margin},
               {"convex", convex_ok}});

        // 6. sublevel inclusion audit F_d cap (S~_n x C) in E^kappa(n)
        njson audits = njson::array();
        bool audit_ok = true;
        for (int n = 2; n <= std::min(6, config.horizon); ++n) {
            const double d = config.audit_d_factor * std::exp(static_cast<double>(n));
            const SublevelAudit rep = audit_sublevel_inclusion(
                params, n, d, res.log_kappas[n - 1], config.audit_samples, config.seed);
            audits.push_back({{"n", n},
                              {"d", d},
                              {"samples", rep.samples},
                              {"f_d_hits", rep.f_d_hits},
                              {"violations", rep.violations}});
            if (rep.violations != 0 || rep.f_d_hits == 0) audit_ok = false;
        }
        stage("sublevel_audit", audit_ok, {{"per_n", audits}});

        // ---- artifacts ----
        write_text_file(fs::path(config.out_dir) / "schedule.json",
                        to_json(res.schedule).dump(2) + "\n");
        write_text_file(fs::path(config.out_dir) / "profile.json",
                        to_json(res.profile).dump(2) + "\n");
        {
            CsvWriter csv((fs::path(config.out_dir) / "calibration.csv").string());
            csv.header({"n", "log_kappa", "q", "delta", "q_tilde", "c"});
            for (int n = 1; n <= N; ++n)
                csv.row(n, res.log_kappas[n - 1], res.q_values[n - 1], res.deltas[n - 1],
                        res.q_tilde[n - 1], res.c_values[n - 1]);
        }
        {
            CsvWriter csv((fs::path(config.out_dir) / "alpha.csv").string());
            csv.header({"n", "alpha", "grid_density"});
            for (size_t i = 0; i < res.alphas.size(); ++i)
                csv.row(static_cast<int>(i) + 1, res.alphas[i], config.alpha_frame_density);
        }
        res.audit["q0"] = res.q0;
        res.audit["ok"] = res.exit_code == 0;
        write_text_file(fs::path(config.out_dir) / "audit.json", res.audit.dump(2) + "\n");
        write_text_file(fs::path(config.out_dir) / "manifest.json",
                        make_manifest(config_json, "pipeline-build").dump(2) + "\n");
    } catch (const std::exception& e) {
        res.exit_code = 3;
        res.failed_stage = res.failed_stage.empty() ? "exception" : res.failed_stage;
        res.audit["error"] = e.what();
        write_text_file(fs::path(config.out_dir) / "audit.json", res.audit.dump(2) + "\n");
    }
    return res;
}

/// Plot-data emission from persisted artifacts: schema-stable CSV plus a
/// small gnuplot script. Kinds: alpha, beta, branches, exclusion.
inline void emit_plot_data(const std::string& kind, const std::string& run_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(run_dir);
    if (!fs::exists(dir / "manifest.json"))
        throw std::invalid_argument("emit_plot_data: missing artifact manifest in " + run_dir);
    const njson manifest = njson::parse(read_text_file((dir / "manifest.json").string()));
    const RunConfig config = config_from_json(manifest.at("config"));
    const EpsilonSchedule schedule =
        schedule_from_json(njson::parse(read_text_file((dir / "schedule.json").string())));
    DomainParams params;
    params.schedule = schedule;
    params.level = config.level;
    params.profile = zero_profile();

    if (kind == "alpha") {
        if (!fs::exists(dir / "alpha.csv"))
            throw std::invalid_argument("emit_plot_data: missing alpha.csv");
        write_text_file((dir / "plot_alpha.csv").string(),
                        read_text_file((dir / "alpha.csv").string()));
        write_text_file((dir / "plot_alpha.gnuplot").string(),
                        "set datafile separator ','\nset key autotitle columnhead\n"
                        "set xlabel 'n'\nset ylabel 'alpha(n)'\n"
                        "plot 'plot_alpha.csv' using 1:2 with linespoints\n");
    } else if (kind == "beta") {
        const njson audit = njson::parse(read_text_file((dir / "audit.json").string()));
        const int q0 = audit.at("q0").get<int>();
        CsvWriter csv((dir / "plot_beta.csv").string());
        csv.header({"n", "delta", "beta", "disks_sampled"});
        for (int n = q0; n <= q0 + 1; ++n) {
            for (double delta = 0.02; delta <= 0.64; delta *= 2.0) {
                const BetaNReport rep = beta_n(params, n, delta, config.beta_disks,
                                               config.seed, config.beta_cells);
                csv.row(n, delta, rep.beta, rep.disks);
            }
        }
        write_text_file((dir / "plot_beta.gnuplot").string(),
                        "set datafile separator ','\nset key autotitle columnhead\n"
                        "set logscale x\nset xlabel 'delta'\nset ylabel 'beta_n'\n"
                        "plot 'plot_beta.csv' using 2:3 with points\n");
    } else if (kind == "branches") {
        CsvWriter csv((dir / "plot_branches.csv").string());
        csv.header({"re_z", "im_z", "re_w", "im_w", "signature"});
        const int n = 1;
        const double side = n + 0.5;
        for (int i = 0; i < 160; ++i) {
            const double t = static_cast<double>(i) / 160.0;
            cplx z;
            if (t < 0.25)
                z = cplx(side, -side + 8 * side * t);
            else if (t < 0.5)
                z = cplx(side - 8 * side * (t - 0.25), side);
            else if (t < 0.75)
                z = cplx(-side, side - 8 * side * (t - 0.5));
            else
                z = cplx(-side + 8 * side * (t - 0.75), -side);
            const auto vals = branch_values(schedule, config.level, z);
            for (size_t sgn = 0; sgn < vals.size(); ++sgn)
                csv.row(z.real(), z.imag(), vals[sgn].real(), vals[sgn].imag(),
                        static_cast<long>(sgn));
        }
        write_text_file((dir / "plot_branches.gnuplot").string(),
                        "set datafile separator ','\nset key autotitle columnhead\n"
                        "set xlabel 're w'\nset ylabel 'im w'\n"
                        "plot 'plot_branches.csv' using 3:4 with dots\n");
    } else if (kind == "exclusion") {
        CsvWriter csv((dir / "plot_exclusion.csv").string());
        csv.header({"d", "best_radius", "trials"});
        for (double d : {0.5, 1.0, 2.0, 4.0}) {
            const ExclusionReport rep =
                disk_exclusion_search(params, d, config.seed, {.trials = 16});
            csv.row(d, rep.best_radius, rep.trials);
        }
        write_text_file((dir / "plot_exclusion.gnuplot").string(),
                        "set datafile separator ','\nset key autotitle columnhead\n"
                        "set xlabel 'd'\nset ylabel 'r(d)'\n"
                        "plot 'plot_exclusion.csv' using 1:2 with linespoints\n");
    } else {
        throw std::invalid_argument("emit_plot_data: unknown kind " + kind);
    }
}

}  // namespace wermerlab

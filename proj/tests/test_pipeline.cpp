#include "doctest.h"
#include "wermerlab/pipeline.hpp"

#include <filesystem>

using namespace wermerlab;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const std::string& dir) {
    RunConfig c;
    c.level = 4;
    c.horizon = 2;
    c.seed = 7;
    c.out_dir = dir;
    c.kappa_samples = 512;
    c.kappa_exact_cap = 8;
    c.q_z_density = 1.5;
    c.alpha_frame_density = 3;
    c.alpha_circle_points = 8;
    c.beta_disks = 4;
    c.beta_cells = 24;
    c.delta_bisections = 6;
    c.audit_samples = 500;
    return c;
}

std::vector<std::string> artifact_names() {
    return {"schedule.json", "profile.json", "calibration.csv", "alpha.csv",
            "audit.json",    "manifest.json"};
}

}  // namespace

TEST_CASE("pipeline builds the domain and passes its own audits") {
    const std::string dir = (fs::temp_directory_path() / "wermerlab_test_run").string();
    fs::remove_all(dir);
    const RunConfig config = small_config(dir);
    const PipelineResult res = pipeline_build_domain(config);
    REQUIRE(res.exit_code == 0);
    CHECK(res.failed_stage.empty());
    CHECK(res.q0 >= 1);
    CHECK(res.q0 <= 4);
    for (const auto& name : artifact_names()) CHECK(fs::exists(fs::path(dir) / name));

    // c(n) increasing, rho dominates it on the shifted bands
    for (size_t i = 1; i < res.c_values.size(); ++i)
        CHECK(res.c_values[i] > res.c_values[i - 1]);
    for (int n = 1; n <= config.horizon; ++n) {
        for (double t = std::max(0.0, n - 1.0); t <= n + 2.0; t += 0.05)
            CHECK(rho_eval(res.profile, t) >= res.c_values[n - 1]);
    }

    // schedule round-trips through the persisted artifact
    const EpsilonSchedule back = schedule_from_json(
        njson::parse(read_text_file((fs::path(dir) / "schedule.json").string())));
    CHECK(certify(back).ok);
    CHECK(back.m == config.schedule_depth());

    SUBCASE("plot emission from the persisted artifacts") {
        emit_plot_data("alpha", dir);
        emit_plot_data("branches", dir);
        CHECK(fs::exists(fs::path(dir) / "plot_alpha.csv"));
        CHECK(fs::exists(fs::path(dir) / "plot_branches.csv"));
        const std::string head =
            read_text_file((fs::path(dir) / "plot_branches.csv").string()).substr(0, 33);
        CHECK(head == "re_z,im_z,re_w,im_w,signature\n1.5");
        CHECK_THROWS_AS(emit_plot_data("nope", dir), std::invalid_argument);
        CHECK_THROWS_AS(emit_plot_data("alpha", dir + "_missing"), std::invalid_argument);
    }
}

TEST_CASE("pipeline reruns with the same manifest are byte-identical") {
    const std::string dir_a = (fs::temp_directory_path() / "wermerlab_det_a").string();
    const std::string dir_b = (fs::temp_directory_path() / "wermerlab_det_b").string();
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    RunConfig ca = small_config(dir_a);
    RunConfig cb = small_config(dir_b);
    REQUIRE(pipeline_build_domain(ca).exit_code == 0);
    REQUIRE(pipeline_build_domain(cb).exit_code == 0);
    for (const auto& name : artifact_names()) {
        const std::string a = read_text_file((fs::path(dir_a) / name).string());
        const std::string b = read_text_file((fs::path(dir_b) / name).string());
        CHECK(a == b);
    }
    // a different seed produces a different manifest (and is allowed to differ)
    RunConfig cc = small_config(dir_b);
    cc.seed = 8;
    CHECK(config_hash(to_json(ca)) != config_hash(to_json(cc)));
}

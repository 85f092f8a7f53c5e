#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdi/experiment.hpp"

using namespace tdi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// small, fast configuration for pipeline smoke tests
experiment::ExperimentConfig small_config() {
    auto c = experiment::preset("ex1");
    c.boundary_nodes = 64;
    c.grid_resolution = 41;
    c.epsilon_ratios = {1.0};
    return c;
}

}  // namespace

TEST_CASE("preset: the four benchmark configurations") {
    const auto e1 = experiment::preset("ex1");
    REQUIRE(e1.cracks.size() == 1);
    CHECK(e1.cracks[0].center_x == 0.0);
    CHECK(e1.cracks[0].center_y == 0.0);
    CHECK(e1.cracks[0].half_length == 0.03);
    CHECK(e1.frequency == 875e6);
    CHECK(e1.directions == 32);
    CHECK(e1.boundary_nodes == 256);
    CHECK(e1.grid_resolution == 201);
    CHECK(e1.snr_db == 20.0);

    const auto e2 = experiment::preset("ex2");
    REQUIRE(e2.cracks.size() == 2);
    CHECK(e2.cracks[0].center_x == 0.6);
    CHECK(e2.cracks[0].angle_deg == 45.0);
    CHECK(e2.cracks[1].center_y == 0.5);

    const auto e3 = experiment::preset("ex3");
    REQUIRE(e3.cracks.size() == 3);
    CHECK(e3.cracks[0].center_x == -0.6);
    CHECK(e3.cracks[2].angle_deg == 210.0);
    for (const auto& c : e3.cracks) CHECK(c.half_length == 0.03);

    const auto e4 = experiment::preset("ex4");
    REQUIRE(e4.cracks.size() == 3);
    CHECK(e4.cracks[0].half_length == 0.02);
    CHECK(e4.cracks[1].half_length == 0.06);
    CHECK(e4.cracks[2].half_length == 0.01);

    CHECK_THROWS_AS(experiment::preset("ex9"), std::invalid_argument);
}

TEST_CASE("config: save/load round trip is identity") {
    for (const char* name : {"ex1", "ex2", "ex3", "ex4"}) {
        auto cfg = experiment::preset(name);
        cfg.epsilon_ratios = {0.6, 1.0, 2.0};
        cfg.seed = 123456789ull;
        std::stringstream ss;
        experiment::save_config(cfg, ss);
        const auto back = experiment::load_config(ss);
        CHECK(back == cfg);
    }
}

TEST_CASE("config: no-noise sentinel round trips through 'none'") {
    auto cfg = small_config();
    cfg.snr_db = forward::no_noise;
    std::stringstream ss;
    experiment::save_config(cfg, ss);
    CHECK(ss.str().find("snr_db = none") != std::string::npos);
    const auto back = experiment::load_config(ss);
    CHECK(back.snr_db == forward::no_noise);
}

TEST_CASE("config: malformed input rejected") {
    std::stringstream bad1("frequency = fast\n[crack]\nhalf_length = 0.03\n");
    CHECK_THROWS(experiment::load_config(bad1));
    std::stringstream bad2("unknown_key = 3\n");
    CHECK_THROWS(experiment::load_config(bad2));
    std::stringstream bad3("frequency = -875e6\n[crack]\nhalf_length = 0.03\n");
    CHECK_THROWS(experiment::load_config(bad3));
}

TEST_CASE("make_scene: degrees become radians, angles reduced to [0, pi)") {
    const auto scene = experiment::make_scene(experiment::preset("ex3"));
    CHECK(scene.cracks[1].angle == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(scene.cracks[2].angle == doctest::Approx(pi / 6).epsilon(1e-12));  // 210 deg -> 30 deg
}

TEST_CASE("ratio_label: compact filename tags") {
    CHECK(experiment::ratio_label(0.6) == "0.6");
    CHECK(experiment::ratio_label(1.0) == "1");
    CHECK(experiment::ratio_label(1.2) == "1.2");
    CHECK(experiment::ratio_label(2.0) == "2");
}

TEST_CASE("run_experiment: emits the selected artifacts and a summary") {
    const auto out = fs::temp_directory_path() / "tdi_exp_smoke";
    fs::remove_all(out);
    auto cfg = small_config();
    cfg.epsilon_ratios = {0.6, 1.0};
    std::ostringstream log;
    const auto results = experiment::run_experiment(cfg, out, log);
    REQUIRE(results.size() == 2);
    for (const char* tag : {"0.6", "1"}) {
        CHECK(fs::exists(out / (std::string("map_F_") + tag + ".csv")));
        CHECK(fs::exists(out / (std::string("map_Phi_") + tag + ".csv")));
        CHECK(fs::exists(out / (std::string("map_F_") + tag + ".pgm")));
        CHECK(fs::exists(out / (std::string("map_Phi_") + tag + ".pgm")));
        CHECK(fs::exists(out / (std::string("map_F_") + tag + ".meta.json")));
        CHECK(fs::exists(out / (std::string("peaks_") + tag + ".csv")));
    }
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(results[0].peak_count >= 1);
    // origin crack: the shift error is at most one grid cell for every ratio
    for (const auto& r : results)
        CHECK(r.shift_errors[0] <= 2.0 / (cfg.grid_resolution - 1) + 1e-12);
    fs::remove_all(out);
}

TEST_CASE("run_experiment: identical config and seed give byte-identical CSV outputs") {
    const auto out1 = fs::temp_directory_path() / "tdi_exp_det1";
    const auto out2 = fs::temp_directory_path() / "tdi_exp_det2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    auto cfg = small_config();
    cfg.outputs.pgm = false;
    std::ostringstream log;
    experiment::run_experiment(cfg, out1, log);
    experiment::run_experiment(cfg, out2, log);
    for (const char* f : {"map_F_1.csv", "map_Phi_1.csv", "peaks_1.csv", "summary.csv"})
        CHECK(slurp(out1 / f) == slurp(out2 / f));
    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("run_experiment: invalid configurations fail before any file is written") {
    const auto out = fs::temp_directory_path() / "tdi_exp_invalid";
    fs::remove_all(out);
    auto cfg = small_config();
    cfg.frequency = -1.0;
    std::ostringstream log;
    CHECK_THROWS_AS(experiment::run_experiment(cfg, out, log), std::invalid_argument);
    CHECK(!fs::exists(out / "summary.csv"));
    fs::remove_all(out);
}

// Config loading (TOML subset), JSON round trips, deterministic file output
// and CLI command exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "aeris/commands.hpp"
#include "aeris/config.hpp"
#include "aeris/io.hpp"
#include "aeris/toml.hpp"
#include "test_util.hpp"

using namespace aeris;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

// single-line sample, fast schedule; valid on its own
const char* kMiniConfig = R"(seed = 7
[sample]
b_ext_t = 2.1
temperature_k = 296.0
t1_s = 0.1
t2_star_s = 0.05
rf_carrier_mhz = 90.0
[[sample.component]]
detuning_hz = -235.0
amplitude_pt = 426.33
[schedule]
tau_ms = 1.0
t_m_us = 40.0
cycles = 400
rabi_khz = 50.0
)";

} // namespace

TEST_CASE("toml subset parses") {
    const auto root = toml::parse(R"(title = "hi # there"
count = 1_000
x = 2.5e-1
flag = true
grid = [1.0, 2.5, 4.0]
t1 = inf
[outer.inner]
k = -3
[[items]]
a = 1
[[items]]
a = 2
)");
    CHECK(root.at("title").as_string("title") == "hi # there");
    CHECK(root.at("count").as_int("count") == 1000);
    CHECK(root.at("x").as_double("x") == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(root.at("flag").as_bool("flag"));
    const auto& grid = root.at("grid").as_array("grid");
    REQUIRE(grid.size() == 3);
    CHECK(grid[1].as_double("grid") == 2.5);
    CHECK(std::isinf(root.at("t1").as_double("t1")));
    const auto& outer = root.at("outer").as_table("outer");
    CHECK(outer.at("inner").as_table("inner").at("k").as_int("k") == -3);
    const auto& items = root.at("items").as_array("items");
    REQUIRE(items.size() == 2);
    CHECK(items[1].as_table("items").at("a").as_int("a") == 2);
    // ints promote to double, never the reverse
    CHECK(root.at("count").as_double("count") == 1000.0);
    CHECK_THROWS_AS(root.at("x").as_int("x"), ConfigError);
}

TEST_CASE("toml errors carry line numbers") {
    auto message = [](const std::string& text) {
        try {
            toml::parse(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("a = 1\nb =\n").find("toml: line 2:") == 0);
    CHECK(message("a = 1\na = 2\n").find("toml: line 2:") != std::string::npos);
    CHECK(message("just words\n").find("toml: line 1:") == 0);
    CHECK(message("s = \"open\n").find("line 1") != std::string::npos);
    CHECK(message("x = 12banana\n").find("12banana") != std::string::npos);
    CHECK_THROWS_AS(toml::parse_file("/no/such/file.toml"), IoError);
}

TEST_CASE("ethanol preset resolves to eight lines") {
    const auto cfg = load_config(AERIS_PRESET_DIR "/ethanol.toml");
    CHECK(cfg.seed == 42);
    CHECK(cfg.sample.rf_carrier_hz == 90.0e6);
    CHECK(cfg.sample.t1_s == 2.0);
    CHECK(cfg.sample.t2_star_s == 0.2);

    const std::vector<double> want_hz = {-342.45, -335.55, -328.65, -321.75,
                                         -234.9,  -117.6,  -110.7,  -103.8};
    REQUIRE(cfg.sample.components.size() == 8);
    double total = 0.0;
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(cfg.sample.components[k].detuning_hz ==
              doctest::Approx(want_hz[k]).epsilon(1e-12));
        total += cfg.sample.components[k].amplitude_t;
    }
    CHECK(testutil::rel_err(total, 2.558e-9) < 1e-12);

    CHECK(cfg.schedule.tau_s == 1e-3);
    CHECK(cfg.schedule.t_m_s == doctest::Approx(40e-6).epsilon(1e-15));
    CHECK(cfg.schedule.cycles == 1500);
    CHECK(cfg.schedule.rabi_hz == 50e3);
    CHECK(cfg.schedule.variant == Variant::standard);
    CHECK(cfg.sensor.modulation == ModulationKind::xy4);
    CHECK(cfg.analysis.zero_pad_factor == 4);
    CHECK(!cfg.noise.has_value());
    CHECK(cfg.realizations == 1);
    REQUIRE(cfg.geometry.has_value());
    CHECK(cfg.geometry->depth_m == 5e-9);
    CHECK(cfg.geometry->resolution == 200);
    CHECK(cfg.geometry->eta_grid.size() == 12);
    CHECK(cfg.geometry->eta_grid.front() == 1.5);
    CHECK(cfg.geometry->eta_grid.back() == 50.0);
}

TEST_CASE("severe preset pairs robust variant with double echo") {
    const auto cfg = load_config(AERIS_PRESET_DIR "/robustness_severe.toml");
    CHECK(cfg.schedule.variant == Variant::robust);
    CHECK(cfg.sensor.modulation == ModulationKind::double_echo);
    REQUIRE(cfg.noise.has_value());
    CHECK(cfg.noise->sigma == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(cfg.noise->corr_time_s == doctest::Approx(5e-4).epsilon(1e-15));
    CHECK(cfg.noise->amp_shift == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(cfg.noise->seed == 1234);
    REQUIRE(cfg.robustness.has_value());
    const std::vector<double> want = {0.0, 0.005, 0.01, 0.02};
    REQUIRE(cfg.robustness->sigmas.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(cfg.robustness->sigmas[i] ==
              doctest::Approx(want[i]).epsilon(1e-12));
    CHECK(cfg.robustness->realizations == 200);
    CHECK(cfg.realizations == 200);
}

TEST_CASE("config rejections") {
    auto parse_cfg = [](const std::string& text) {
        return config_from_toml(toml::parse(text));
    };
    auto rejection = [&](const std::string& text) -> std::string {
        try {
            parse_cfg(text);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "no error";
    };
    CHECK_NOTHROW(parse_cfg(kMiniConfig));

    SUBCASE("unknown keys anywhere") {
        CHECK(rejection(std::string(kMiniConfig) + "bogus = 1\n")
                  .find("bogus") != std::string::npos);
        std::string s(kMiniConfig);
        s.replace(s.find("cycles = 400"), 12, "cycels = 400");
        CHECK(rejection(s).find("schedule.cycels") != std::string::npos);
    }

    SUBCASE("chemistry and component are mutually exclusive") {
        std::string both(kMiniConfig);
        both +=
            "[sample.chemistry]\nj_coupling_hz = 6.9\n"
            "total_amplitude_nt = 2.558\n"
            "[[sample.chemistry.multiplet]]\nshift_ppm = 1.0\n"
            "ratios = [1.0]\nprotons = 1.0\n";
        CHECK(rejection(both).find("exactly one") != std::string::npos);

        std::string neither(kMiniConfig);
        const auto at = neither.find("[[sample.component]]");
        neither.erase(at, neither.find("[schedule]") - at);
        CHECK_THROWS_AS(parse_cfg(neither), ConfigError);
    }

    SUBCASE("bad field values") {
        auto swap = [&](const std::string& from, const std::string& to) {
            std::string s(kMiniConfig);
            s.replace(s.find(from), from.size(), to);
            return s;
        };
        CHECK_THROWS_AS(parse_cfg(swap("cycles = 400", "cycles = 0")),
                        ConfigError);
        CHECK_THROWS_AS(parse_cfg(swap("seed = 7", "seed = -1")), ConfigError);
        CHECK_THROWS_AS(parse_cfg(swap("t1_s = 0.1", "t1_s = 0.01")),
                        ConfigError);  // t1 < t2*
        CHECK_THROWS_AS(parse_cfg(swap("tau_ms = 1.0", "tau_ms = \"x\"")),
                        ConfigError);
    }
}

TEST_CASE("json round trip is byte-stable") {
    for (const char* name : {"/ethanol.toml", "/robustness_severe.toml"}) {
        const auto cfg = load_config(std::string(AERIS_PRESET_DIR) + name);
        const auto j = to_json(cfg);
        const auto back = to_json(config_from_json(j));
        CHECK(back.dump() == j.dump());
        CHECK(config_hash_hex(config_from_json(j)) == config_hash_hex(cfg));
    }
}

TEST_CASE("infinite relaxation times survive json") {
    std::string s(kMiniConfig);
    s.replace(s.find("t1_s = 0.1"), 10, "t1_s = inf");
    auto cfg = config_from_toml(toml::parse(s));
    CHECK(std::isinf(cfg.sample.t1_s));
    const auto back = config_from_json(to_json(cfg));
    CHECK(std::isinf(back.sample.t1_s));
    CHECK(back.sample.t2_star_s == 0.05);
}

TEST_CASE("fnv-1a and config hash") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);

    const auto cfg = load_config(AERIS_PRESET_DIR "/ethanol.toml");
    const std::string h = config_hash_hex(cfg);
    CHECK(h.size() == 16);
    CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(config_hash_hex(load_config(AERIS_PRESET_DIR "/ethanol.toml")) == h);
    auto other = cfg;
    other.seed = 43;
    CHECK(config_hash_hex(other) != h);
}

TEST_CASE("record csv round trip") {
    const fs::path dir = fresh_dir("aeris_unit_config_csv");
    MeasurementRecord rec;
    rec.values = {0.1, 1.0 / 3.0, -2.5e-17, 1e-300, std::numbers::pi * 1e-3,
                  0.0};
    for (std::size_t n = 0; n < rec.values.size(); ++n)
        rec.precession_times_s.push_back(static_cast<double>(n) * 1e-3);
    rec.trigger_phase_rad = std::numbers::pi / 2;
    rec.meta.seed = 777;
    rec.meta.noisy = true;
    rec.meta.note = "mean of 3 realizations";

    write_record_csv(dir / "r.csv", rec, "deadbeefdeadbeef");
    const auto back = read_record_csv(dir / "r.csv");
    REQUIRE(back.values.size() == rec.values.size());
    for (std::size_t n = 0; n < rec.values.size(); ++n) {
        CHECK(back.values[n] == rec.values[n]);  // %.17g: exact
        CHECK(back.precession_times_s[n] == rec.precession_times_s[n]);
    }
    CHECK(back.trigger_phase_rad == rec.trigger_phase_rad);
    CHECK(back.meta.seed == 777);
    CHECK(back.meta.noisy);
    CHECK(back.meta.note == rec.meta.note);

    // rewriting the parsed record reproduces the file byte for byte
    write_record_csv(dir / "r2.csv", back, "deadbeefdeadbeef");
    const std::string b1 = slurp(dir / "r.csv"), b2 = slurp(dir / "r2.csv");
    CHECK(b1 == b2);
    CHECK(b1.find('\r') == std::string::npos);
    CHECK(b1.back() == '\n');
}

TEST_CASE("metadata json round trip") {
    const fs::path dir = fresh_dir("aeris_unit_config_meta");
    const auto cfg = load_config(AERIS_PRESET_DIR "/ethanol.toml");
    const std::string hash = config_hash_hex(cfg);
    write_metadata_json(dir / "metadata.json", cfg, hash);
    std::string hash_back;
    const auto back = read_metadata_json(dir / "metadata.json", &hash_back);
    CHECK(hash_back == hash);
    CHECK(to_json(back).dump() == to_json(cfg).dump());
}

TEST_CASE("io failures throw IoError") {
    CHECK_THROWS_AS(read_record_csv("/no/such/record.csv"), IoError);
    CHECK_THROWS_AS(read_metadata_json("/no/such/metadata.json"), IoError);

    const fs::path dir = fresh_dir("aeris_unit_config_bad");
    spit(dir / "garbage.csv", "# header\nn,t,v\n0,not_a_number,1\n");
    CHECK_THROWS_AS(read_record_csv(dir / "garbage.csv"), IoError);
    spit(dir / "empty.csv", "# nothing\nn,t,v\n");
    CHECK_THROWS_AS(read_record_csv(dir / "empty.csv"), IoError);
    spit(dir / "metadata.json", "{ not json");
    CHECK_THROWS_AS(read_metadata_json(dir / "metadata.json"), IoError);
}

TEST_CASE("cli commands run the pipeline and map exit codes") {
    const fs::path dir = fresh_dir("aeris_unit_config_cli");
    std::string text(kMiniConfig);
    text +=
        "[geometry]\ndepth_nm = 5.0\nresolution = 100\neta_grid = [2.0]\n"
        "[robustness]\nsigma_percent_grid = [0.0]\nrealizations = 1\n";
    spit(dir / "mini.toml", text);

    CliOptions opt;
    opt.config_path = (dir / "mini.toml").string();
    opt.out_dir = (dir / "out").string();

    SUBCASE("simulate then spectrum") {
        CHECK(run_cli_command(cmd_simulate, opt) == 0);
        CHECK(fs::exists(dir / "out/record_cos.csv"));
        CHECK(fs::exists(dir / "out/record_sin.csv"));
        CHECK(fs::exists(dir / "out/metadata.json"));

        CHECK(run_cli_command(cmd_spectrum, opt) == 0);
        CHECK(fs::exists(dir / "out/spectrum.json"));
        const auto peaks =
            nlohmann::json::parse(slurp(dir / "out/peaks.json"));
        REQUIRE(peaks.at("peaks").size() == 1);
        const auto& p = peaks.at("peaks")[0];
        CHECK(p.at("fit_ok").get<bool>());
        // single line at -235 Hz, T2* = 50 ms
        CHECK(std::abs(p.at("frequency_hz").get<double>() + 235.0) <
              1.0 / (4 * 0.400));
        CHECK(std::abs(p.at("fit").at("center_hz").get<double>() + 235.0) <
              0.5);
        CHECK(p.at("fit").at("fwhm_hz").get<double>() > 5.0);
        CHECK(p.at("fit").at("fwhm_hz").get<double>() < 9.0);

        // byte-identical outputs on a repeat run
        const std::string cos1 = slurp(dir / "out/record_cos.csv");
        const std::string spec1 = slurp(dir / "out/spectrum.json");
        CHECK(run_cli_command(cmd_simulate, opt) == 0);
        CHECK(run_cli_command(cmd_spectrum, opt) == 0);
        CHECK(slurp(dir / "out/record_cos.csv") == cos1);
        CHECK(slurp(dir / "out/spectrum.json") == spec1);
    }

    SUBCASE("geometry and robustness commands") {
        CHECK(run_cli_command(cmd_geometry, opt) == 0);
        CHECK(fs::exists(dir / "out/geometry.csv"));
        const std::string csv = slurp(dir / "out/geometry.csv");
        const auto line = csv.find("\n2,");  // eta = 2 data row
        REQUIRE(line != std::string::npos);
        const double f = std::stod(csv.substr(line + 3));
        CHECK(testutil::rel_err(f, 1.3090) < 0.03);

        CHECK(run_cli_command(cmd_robustness, opt) == 0);
        const std::string curve = slurp(dir / "out/fwhm_vs_noise.csv");
        CHECK(curve.find("sigma,fwhm_standard_hz") != std::string::npos);
        CHECK(curve.rfind(",1\n") == curve.size() - 3);  // robust_ok
    }

    SUBCASE("exit codes") {
        CliOptions bad = opt;
        bad.config_path.clear();
        CHECK(run_cli_command(cmd_simulate, bad) == 2);  // missing --config

        spit(dir / "unknown.toml", std::string(kMiniConfig) + "zzz = 1\n");
        bad = opt;
        bad.config_path = (dir / "unknown.toml").string();
        CHECK(run_cli_command(cmd_simulate, bad) == 2);

        bad.config_path = (dir / "missing.toml").string();
        CHECK(run_cli_command(cmd_simulate, bad) == 4);

        // tau too long for the -235 Hz line: physics precondition
        std::string nyq(kMiniConfig);
        nyq.replace(nyq.find("tau_ms = 1.0"), 12, "tau_ms = 5.0");
        spit(dir / "nyquist.toml", nyq);
        bad = opt;
        bad.config_path = (dir / "nyquist.toml").string();
        CHECK(run_cli_command(cmd_simulate, bad) == 3);

        // spectrum without records
        bad = opt;
        bad.records_dir = (dir / "nowhere").string();
        CHECK(run_cli_command(cmd_spectrum, bad) == 4);

        // geometry command without a [geometry] table
        spit(dir / "nogeo.toml", kMiniConfig);
        bad = opt;
        bad.config_path = (dir / "nogeo.toml").string();
        CHECK(run_cli_command(cmd_geometry, bad) == 2);
    }
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "jpi/config.hpp"
#include "jpi/errors.hpp"
#include "jpi/recipes.hpp"
#include "jpi/runner.hpp"

using namespace jpi;
using nlohmann::json;

namespace {

json synth_config() {
    return json::parse(R"({
        "mode": "synth",
        "filter": {"order": 3, "center_freq_hz": 7.3e9, "bandwidth_hz": 8e8, "ripple_db": 0.125},
        "network": {"pole_impedances_ohm": [15, 10, 15], "inverters": "ideal"}
    })");
}

std::string field_of(const json& cfg) {
    try {
        run(cfg);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

}  // namespace

TEST(Config, ErrorsNameTheField) {
    auto c = synth_config();
    c["filter"]["ripple_db"] = "small";
    EXPECT_EQ(field_of(c), "filter.ripple_db");

    c = synth_config();
    c["filter"].erase("center_freq_hz");
    EXPECT_EQ(field_of(c), "filter.center_freq_hz");

    c = synth_config();
    c["network"]["inverter"] = "ideal";
    EXPECT_EQ(field_of(c), "network.inverter");

    c = synth_config();
    c["filtre"] = json::object();
    EXPECT_EQ(field_of(c), "filtre");

    c = synth_config();
    c["mode"] = "simulate";
    EXPECT_EQ(field_of(c), "mode");

    c = synth_config();
    c["network"]["pole_impedances_ohm"] = {15, 10};
    EXPECT_EQ(field_of(c), "network.pole_impedances_ohm");

    c = synth_config();
    c["output"] = {{"formats", {"xml"}}};
    EXPECT_EQ(field_of(c), "output.formats");
}

TEST(Config, OptimizeRequiresPhases) {
    auto c = synth_config();
    c["mode"] = "optimize";
    c["pumps"] = {{"alpha_pi", 0.064}, {"pump_freq_hz", 691e6}};
    EXPECT_EQ(field_of(c), "pumps.phases_deg");
}

TEST(Config, PumpCountMustMatchSquids) {
    auto c = synth_config();
    c["mode"] = "sparams";
    c["pumps"] = {{"alpha_pi", 0.064}, {"pump_freq_hz", 691e6}, {"phases_deg", {0, 45}}};
    EXPECT_EQ(field_of(c), "pumps.phases_deg");
}

TEST(Config, RecipesAllParse) {
    const auto names = recipes::names();
    EXPECT_GE(names.size(), 6u);
    for (const auto& n : names) {
        const auto j = json::parse(recipes::get(n));
        EXPECT_NO_THROW(config::validate(j)) << n;
    }
    EXPECT_THROW(recipes::get("nope"), ConfigError);
}

TEST(Config, SynthNetlistReproducesDesignBitwise) {
    auto c = synth_config();
    const auto synth = run(c);
    json again{{"mode", "sparams"},
               {"netlist", synth.summary["netlist"]},
               {"grid", {{"start_hz", 6.9e9}, {"stop_hz", 7.7e9}, {"points", 9}}}};
    again["netlist"]["n_sidebands"] = 0;
    auto direct = c;
    direct["mode"] = "sparams";
    direct["network"]["n_sidebands"] = 0;
    direct["grid"] = again["grid"];
    const auto a = run(again);
    const auto b = run(direct);
    EXPECT_EQ(a.tables[0].to_csv(), b.tables[0].to_csv());
}

TEST(Config, HashIsStableAndSensitive) {
    const auto c = synth_config();
    EXPECT_EQ(config::config_hash(c), config::config_hash(json::parse(c.dump())));
    auto d = c;
    d["filter"]["ripple_db"] = 0.1251;
    EXPECT_NE(config::config_hash(c), config::config_hash(d));
    EXPECT_EQ(config::config_hash(c).size(), 16u);
}

TEST(Report, CsvPrecisionAndSpecialValues) {
    Table t{"x", {"a", "b"}, {{1.0 / 3.0, std::numeric_limits<double>::infinity()}}};
    EXPECT_EQ(t.to_csv(), "a,b\n0.333333333,inf\n");
}

TEST(Report, WritesFilesAndReportsIoErrors) {
    const auto dir = std::filesystem::temp_directory_path() / "jpi_report_test";
    std::filesystem::remove_all(dir);
    const auto r = run(synth_config());
    r.write((dir / "out").string(), true, true);
    EXPECT_TRUE(std::filesystem::exists(dir / "out_poles.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "out_inverters.csv"));
    std::ifstream f(dir / "out.json");
    const auto j = json::parse(f);
    EXPECT_EQ(j["metadata"]["mode"], "synth");
    EXPECT_EQ(j["metadata"]["config_hash"], config::config_hash(r.config));
    EXPECT_EQ(j["tables"]["poles"]["rows"].size(), 3u);

    std::ofstream(dir / "blocker") << "x";
    EXPECT_THROW(r.write((dir / "blocker" / "out").string(), true, false), IoError);
    std::filesystem::remove_all(dir);
}

TEST(Runner, CoupledModeRecipeFigures) {
    const auto r = run(json::parse(recipes::get("two-pole-coupled-mode")));
    EXPECT_NEAR(r.summary["gamma0_hz"].get<double>(), 0.8896e9, 1e6);
    EXPECT_NEAR(r.summary["beta_c"].get<double>(), 0.5821, 1e-3);
}

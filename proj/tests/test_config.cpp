#include <catch_amalgamated.hpp>

#include <string>

#include "rwacav/config.hpp"

using namespace rwacav;

TEST_CASE("sections prefix bare keys", "[config]") {
    const auto entries = parse_config_text(R"(
# leading comment
[scenario]
id = fig3       # trailing comment
scale=0.1

[atoms]
gamma2 = 9
modes.lowest_index = 2
)");
    REQUIRE(entries.size() == 4);
    CHECK(entries[0].key == "scenario.id");
    CHECK(entries[0].value == "fig3");
    CHECK(entries[2].key == "atoms.gamma2");
    CHECK(entries[3].key == "modes.lowest_index");  // dotted keys are absolute
    CHECK(entries[2].origin == "config:8");
}

TEST_CASE("build_scenario applies the preset then each key", "[config]") {
    const auto cfg = build_scenario(parse_config_text(R"(
[scenario]
id = fig3
scale = 0.1
[atoms]
gamma2 = 9
[modes]
counts = 1000, 2000
[integrator]
phase_per_step = 0.02
)"));
    CHECK(cfg.id == ScenarioId::fig3);
    CHECK(cfg.policy == ModePolicyKind::asymmetric);
    CHECK(cfg.resolved_center_index() == 501);
    CHECK(cfg.atoms.decay_rates[1] == 9.0);
    CHECK(cfg.mode_counts == std::vector<long>{1000, 2000});
    CHECK(cfg.phase_per_step == 0.02);
    CHECK(cfg.t_end == 0.25);
}

TEST_CASE("overrides come after the file", "[config]") {
    auto entries = parse_config_text("[atoms]\ndelta = 4\n");
    entries.push_back(parse_override("atoms.delta=2.5"));
    entries.push_back(parse_override("scenario.id = fig5"));
    const auto cfg = build_scenario(entries);
    CHECK(cfg.atoms.detuning == 2.5);
    CHECK(cfg.id == ScenarioId::fig5);
    CHECK(cfg.t_end == 0.6);
    CHECK_THROWS_AS(parse_override("novalue"), ConfigError);
}

TEST_CASE("unknown keys are errors that name the key", "[config][errors]") {
    try {
        (void)build_scenario(parse_config_text("[atoms]\ngama2 = 16\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "atoms.gama2");
        CHECK(std::string(e.what()).find("atoms.gama2") != std::string::npos);
    }
}

TEST_CASE("malformed values and lines", "[config][errors]") {
    CHECK_THROWS_AS(build_scenario(parse_config_text("atoms.gamma1 = fast\n")), ConfigError);
    CHECK_THROWS_AS(build_scenario(parse_config_text("modes.counts = 10,x\n")), ConfigError);
    CHECK_THROWS_AS(build_scenario(parse_config_text("integrator.sample_stride = -3\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[atoms\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just words\n"), ConfigError);
    CHECK_THROWS_AS(build_scenario(parse_config_text("scenario.scale = 2\n")), ConfigError);
    CHECK_THROWS_AS(build_scenario(parse_config_text("atoms.x1 = 1.5\n")), ConfigError);
    CHECK_THROWS_AS(build_scenario(parse_config_text("modes.policy = sideways\n")), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/rwacav.cfg"), ConfigError);
}

TEST_CASE("every key is documented with units", "[config]") {
    const auto keys = config_keys();
    CHECK(keys.size() >= 25);
    for (const auto& k : keys) {
        CHECK_FALSE(k.units.empty());
        CHECK_FALSE(k.description.empty());
        // each documented key is accepted
        if (k.key == "scenario.id" || k.key == "modes.policy" || k.key == "output.dir" || k.key == "output.prefix")
            continue;
        const std::string value = k.key == "modes.counts" ? "2001" : (k.key == "scenario.scale" ? "0.2" : "1");
        std::vector<ConfigEntry> e{{std::string(k.key), value, "test"}};
        if (k.key == "atoms.x1" || k.key == "atoms.x2" || k.key == "atoms.x3") e[0].value = "0.3";
        if (k.key == "observables.profile_time") e[0].value = "0.1";
        if (k.key == "integrator.phase_per_step") e[0].value = "0.01";
        if (k.key == "integrator.t_end") e[0].value = "0.3";
        if (k.key == "observables.grid_points") e[0].value = "11";
        if (k.key == "atoms.center_index") e[0].value = "1001";
        INFO(k.key);
        CHECK_NOTHROW(build_scenario(e));
    }
}

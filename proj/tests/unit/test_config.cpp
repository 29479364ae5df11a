#include "ringqed/config.hpp"
#include "ringqed/errors.hpp"

#include <doctest.h>

#include <cstdlib>
#include <string>

using namespace ringqed;

namespace {

std::string error_of(const std::string& yaml) {
    try {
        parse_config_text(yaml);
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("minimal config takes documented defaults") {
    const RunConfig c = parse_config_text("experiment: cloud-decay\n");
    CHECK(c.experiment == ExperimentKind::cloud_decay);
    CHECK(c.trials == 1000);
    CHECK(c.seed == 1);
    CHECK(c.c1 == 0.05);
    CHECK(c.cavity.kappa_i == 100.0);
    CHECK(c.cavity.n_eff == doctest::Approx(1.69));
    CHECK(c.calibration.lambda0_nm() == doctest::Approx(852.0));
}

TEST_CASE("unknown keys are rejected with their line") {
    const std::string yaml = "experiment: spectrum\ncavity:\n  kappa_i: 100\n  kappa_x: 3\n";
    try {
        parse_config_text(yaml);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.line.has_value());
        CHECK(*e.line == 4);
        CHECK(contains(e.what(), "kappa_x"));
    }
    CHECK(contains(error_of("experiment: spectrum\nbogus: 1\n"), "line 2"));
}

TEST_CASE("domain violations are named") {
    CHECK(contains(error_of("experiment: array-map\nd: -0.3\n"), "spacing must be positive"));
    CHECK(contains(error_of("experiment: cloud-decay\ntrials: 0\n"), "trials"));
    CHECK(contains(error_of("experiment: cloud-decay\nn_eff: 0.5\n"), "n_eff"));
    CHECK(contains(error_of("seed: 3\n"), "experiment"));
    CHECK(contains(error_of("experiment: warp-drive\n"), "warp-drive"));
    CHECK(contains(error_of("experiment: [1, 2\n"), "line"));
    CHECK(contains(error_of("experiment: disorder\ndisorder:\n  axis: filling\n  values: [0.5, 1.5]\n"), "filling"));
}

TEST_CASE("experiment must match the subcommand") {
    CHECK_THROWS_AS(parse_config_text("experiment: spectrum\n", ExperimentKind::disorder), ConfigError);
    CHECK(parse_config_text("trials: 5\n", ExperimentKind::disorder).experiment == ExperimentKind::disorder);
}

TEST_CASE("lengths in nanometres") {
    const Calibration cal;
    CHECK(parse_length("0.3", cal) == doctest::Approx(0.3));
    CHECK(parse_length("255.6nm", cal) == doctest::Approx(0.3));
    CHECK(parse_length("426 nm", cal) == doctest::Approx(0.5));
    CHECK_THROWS(parse_length("12 furlongs", cal));
    const RunConfig c = parse_config_text("experiment: disorder\ndelta_z: 50nm\nspacing: 0.3\n");
    CHECK(c.array.delta_z == doctest::Approx(50.0 / 852.0));
}

TEST_CASE("grids as lists or ranges") {
    const RunConfig c = parse_config_text(
        "experiment: array-map\narray_map:\n  spacings: {start: 0.1, stop: 0.5, count: 5}\n  n_effs: [1.0, 1.5]\n");
    REQUIRE(c.array_map.spacings.size() == 5);
    CHECK(c.array_map.spacings[1] == doctest::Approx(0.2));
    CHECK(c.array_map.n_effs.size() == 2);
}

TEST_CASE("YAML round trip") {
    for (const auto& name : experiment_names()) {
        const ExperimentKind kind = experiment_from_string(name);
        RunConfig c = default_config(kind);
        c.seed = 77;
        c.c1 = 0.08;
        c.cavity.delta_c = 2.5;
        const RunConfig back = parse_config_text(to_yaml(c));
        CHECK(to_json(back) == to_json(c));
    }
}

TEST_CASE("emitted templates parse back to the defaults") {
    for (const auto& name : experiment_names()) {
        const ExperimentKind kind = experiment_from_string(name);
        const std::string text = emit_config(kind);
        CHECK(contains(text, "#"));
        CHECK(to_json(parse_config_text(text)) == to_json(default_config(kind)));
    }
}

TEST_CASE("worker count from the environment") {
    ::setenv("RINGQED_WORKERS", "3", 1);
    CHECK(workers_from_environment(std::nullopt) == 3);
    CHECK(workers_from_environment(5u) == 5);
    ::setenv("RINGQED_WORKERS", "lots", 1);
    CHECK_THROWS(workers_from_environment(std::nullopt));
    ::unsetenv("RINGQED_WORKERS");
    CHECK(workers_from_environment(std::nullopt) == 0);
}

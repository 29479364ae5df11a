// ringqed — command-line driver for the collective-emission experiments.
#include "ringqed/config.hpp"
#include "ringqed/errors.hpp"
#include "ringqed/runner.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Overrides {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    std::optional<int> n_atoms;
    std::optional<double> c1;
    std::optional<double> n_eff;
    std::optional<std::string> spacing;
    std::optional<std::string> delta_z;
    std::optional<double> filling;
    std::optional<std::string> excitation;
    std::optional<std::string> axis;
    bool no_freespace = false;
    bool uniform_c = false;
    bool poisson_n = false;
    bool gnuplot = false;
};

ringqed::RunConfig build_config(ringqed::ExperimentKind kind, const Overrides& o) {
    using namespace ringqed;
    RunConfig c = o.config ? parse_config(*o.config, kind) : default_config(kind);
    if (o.seed) c.seed = *o.seed;
    if (o.trials) {
        c.trials = *o.trials;
        if (kind == ExperimentKind::oracle_check) c.oracle.instances = *o.trials;
    }
    c.workers = workers_from_environment(o.workers ? o.workers : (o.config ? std::optional(c.workers) : std::nullopt));
    if (o.out) c.out = *o.out;
    if (o.n_atoms) {
        c.cloud.n_atoms = *o.n_atoms;
        c.array.n_sites = *o.n_atoms;
        if (kind == ExperimentKind::oracle_check) c.oracle.max_atoms = *o.n_atoms;
    }
    if (o.c1) c.c1 = *o.c1;
    if (o.n_eff) c.cavity.n_eff = *o.n_eff;
    if (o.spacing) c.array.spacing = parse_length(*o.spacing, c.calibration);
    if (o.delta_z) c.array.delta_z = parse_length(*o.delta_z, c.calibration);
    if (o.filling) c.array.filling = *o.filling;
    if (o.excitation) c.excitation = excitation_from_string(*o.excitation);
    if (o.axis) {
        const auto axis = disorder_axis_from_string(*o.axis);
        if (axis != c.disorder.axis) c.disorder.values.clear();
        c.disorder.axis = axis;
    }
    if (o.no_freespace) {
        if (kind == ExperimentKind::spectrum) {
            c.spectrum.no_freespace_variant = true;
        } else {
            c.free_space = false;
        }
    }
    if (o.uniform_c) c.uniform_c = true;
    if (o.poisson_n) c.cloud.poisson_n = true;
    if (o.gnuplot) c.gnuplot = true;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective emission of atoms coupled to a ring resonator and free space"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config, "YAML configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--trials", o.trials, "Monte Carlo trials (oracle-check: instances)")->check(CLI::PositiveNumber);
    app.add_option("--workers", o.workers, "worker threads (default: RINGQED_WORKERS or all cores)");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--n-atoms", o.n_atoms, "atom number (cloud mean, array sites; oracle-check: max atoms)");
    app.add_option("--c1", o.c1, "mean single-atom cooperativity");
    app.add_option("--n-eff", o.n_eff, "effective index of the resonator mode");
    app.add_option("--spacing", o.spacing, "array spacing (λ0, or e.g. 255nm)");
    app.add_option("--delta-z", o.delta_z, "array height disorder (λ0, or e.g. 50nm)");
    app.add_option("--filling", o.filling, "array filling fraction");
    app.add_option("--excitation", o.excitation, "tds or ss")->check(CLI::IsMember({"tds", "ss"}));
    app.add_option("--axis", o.axis, "disorder axis")->check(CLI::IsMember({"delta_z", "filling"}));
    app.add_flag("--no-freespace", o.no_freespace, "drop free-space coupling (spectrum: add that variant)");
    app.add_flag("--uniform-c", o.uniform_c, "uniform cooperativity c1 for every atom");
    app.add_flag("--poisson-n", o.poisson_n, "Poisson-distributed cloud atom number");
    app.add_flag("--gnuplot", o.gnuplot, "also write gnuplot scripts");

    std::vector<std::pair<CLI::App*, ringqed::ExperimentKind>> runs;
    for (const auto& name : ringqed::experiment_names()) {
        runs.emplace_back(app.add_subcommand(name, "run the " + name + " experiment"),
                          ringqed::experiment_from_string(name));
    }
    std::string template_kind = "cloud-decay";
    auto* emit = app.add_subcommand("emit-config", "print a commented default configuration");
    emit->add_option("experiment", template_kind, "experiment")->check(CLI::IsMember(ringqed::experiment_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (emit->parsed()) {
        std::cout << ringqed::emit_config(ringqed::experiment_from_string(template_kind));
        return 0;
    }

    ringqed::RunConfig config;
    for (const auto& [sub, kind] : runs) {
        if (!sub->parsed()) continue;
        try {
            config = build_config(kind, o);
        } catch (const ringqed::ConfigError& e) {
            std::cerr << "ringqed: config error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const ringqed::InvalidArgument& e) {
            std::cerr << "ringqed: invalid configuration: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    try {
        const ringqed::RunOutcome outcome = ringqed::run(config);
        std::cout << outcome.summary << "\n";
        return outcome.pass ? 0 : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << fmt::format("ringqed: {} failed: {}\n", ringqed::to_string(config.experiment), e.what());
        return kExitRuntime;
    }
}

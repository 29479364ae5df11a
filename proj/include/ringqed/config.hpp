// config.hpp — run configuration: strict YAML parsing, validation, templates.
#pragma once

#include "ringqed/cavity.hpp"
#include "ringqed/dynamics.hpp"
#include "ringqed/experiments.hpp"
#include "ringqed/geometry.hpp"
#include "ringqed/units.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ringqed {

enum class ExperimentKind { cloud_decay, spectrum, array_map, disorder, ring_vs_line, ratio_sweep, oracle_check };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);
const std::vector<std::string>& experiment_names();

enum class SpectrumGeometry { cloud, array };

struct RunConfig {
    ExperimentKind experiment = ExperimentKind::cloud_decay;
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    unsigned workers = 0;  // 0: available parallelism
    std::filesystem::path out = "results";
    bool gnuplot = false;

    Calibration calibration;
    double c1 = 0.05;
    ExcitationKind excitation = ExcitationKind::tds;
    bool uniform_c = false;
    bool free_space = true;

    CloudParams cloud;
    ArrayParams array;
    CavityParams cavity;

    struct {
        std::vector<double> k_scan;  // k_wg/k0 values
    } cloud_decay;

    struct {
        SpectrumGeometry geometry = SpectrumGeometry::cloud;
        std::optional<double> half_width;  // default: 8 (1 + N C1)
        std::size_t points = 201;
        ProbeMode probe = ProbeMode::cavity_locked;
        std::vector<int> n_values;  // linewidth vs N; empty: single run at n
        bool no_freespace_variant = false;
        bool no_stochastic_variant = false;
    } spectrum;

    struct {
        std::vector<double> spacings;
        std::vector<double> n_effs;
    } array_map;

    struct {
        DisorderAxis axis = DisorderAxis::delta_z;
        std::vector<double> values;
        std::vector<int> targets{20, 40};
    } disorder;

    struct {
        std::vector<int> n_values;
    } ring_vs_line;

    struct {
        std::vector<int> n_values;
        std::vector<ExcitationKind> kinds{ExcitationKind::tds, ExcitationKind::ss};
    } ratio_sweep;

    struct {
        std::size_t instances = 20;
        int max_atoms = 4;
        double kappa_scale = 10.0;
        double t_end = 5.0;
    } oracle;

    // Throws InvalidArgument naming the offending field.
    void validate() const;
};

// Defaults for one experiment (grids filled in).
RunConfig default_config(ExperimentKind kind);

// Strict parse: unknown keys and malformed values raise ConfigError with the
// line number. Lengths accept plain numbers (λ0 units) or strings with an
// "nm" suffix, converted with the configured λ0.
// If `expected` is given the experiment key may be omitted; a conflicting
// key is an error.
RunConfig parse_config_text(const std::string& text, std::optional<ExperimentKind> expected = std::nullopt);
RunConfig parse_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected = std::nullopt);

// "0.3" (λ0 units) or "255nm".
double parse_length(const std::string& text, const Calibration& cal);

// Fully resolved configuration, reparseable by parse_config.
nlohmann::json to_json(const RunConfig& config);
std::string to_yaml(const RunConfig& config);

// Commented template with every default for the experiment.
std::string emit_config(ExperimentKind kind);

// Worker count from an explicit flag, then RINGQED_WORKERS, then 0 (auto).
unsigned workers_from_environment(std::optional<unsigned> flag);

}  // namespace ringqed

#include "ringqed/config.hpp"

#include "ringqed/errors.hpp"
#include "ringqed/io.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace ringqed {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& experiment_table() {
    static const std::vector<std::pair<ExperimentKind, std::string>> table = {
        {ExperimentKind::cloud_decay, "cloud-decay"},   {ExperimentKind::spectrum, "spectrum"},
        {ExperimentKind::array_map, "array-map"},       {ExperimentKind::disorder, "disorder"},
        {ExperimentKind::ring_vs_line, "ring-vs-line"}, {ExperimentKind::ratio_sweep, "ratio-sweep"},
        {ExperimentKind::oracle_check, "oracle-check"},
    };
    return table;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 1) return {lo};
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

// --- strict YAML reading -----------------------------------------------------

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
    const int line = line_of(node);
    throw ConfigError(line > 0 ? fmt::format("line {}: {}", line, message) : message,
                      line > 0 ? std::optional<int>(line) : std::nullopt);
}

void require_map(const YAML::Node& node, const std::string& where) {
    if (!node.IsMap()) fail(node, fmt::format("'{}' must be a mapping", where));
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& section) {
    for (const auto& kv : map) {
        const std::string key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            fail(kv.first, section.empty() ? fmt::format("unknown key '{}'", key)
                                           : fmt::format("unknown key '{}' in '{}'", key, section));
        }
    }
}

template <class T>
T get(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(node, fmt::format("field '{}' must be a scalar", field));
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, fmt::format("field '{}' has invalid value '{}'", field, node.Scalar()));
    }
}

bool is_null(const YAML::Node& node) {
    return node.IsNull() || (node.IsScalar() && (node.Scalar() == "auto" || node.Scalar() == "~"));
}

class LengthReader {
public:
    explicit LengthReader(const Calibration* cal) : cal_(cal) {}

    double operator()(const YAML::Node& node, const std::string& field) const {
        if (!node.IsScalar()) fail(node, fmt::format("field '{}' must be a scalar", field));
        try {
            return parse_length(node.Scalar(), *cal_);
        } catch (const InvalidArgument&) {
            fail(node, fmt::format("field '{}' has invalid length '{}'", field, node.Scalar()));
        }
    }

private:
    const Calibration* cal_;
};

// Sequence of values, or {start, stop, count}.
template <class Elem>
std::vector<double> read_grid(const YAML::Node& node, const std::string& field, Elem elem) {
    std::vector<double> out;
    if (node.IsSequence()) {
        for (const auto& item : node) out.push_back(elem(item, field));
    } else if (node.IsMap()) {
        check_keys(node, {"start", "stop", "count"}, field);
        if (!node["start"] || !node["stop"] || !node["count"]) {
            fail(node, fmt::format("'{}' range needs start, stop and count", field));
        }
        const auto count = get<std::size_t>(node["count"], field + ".count");
        if (count < 1) fail(node["count"], fmt::format("'{}' count must be at least 1", field));
        out = linspace(elem(node["start"], field + ".start"), elem(node["stop"], field + ".stop"), count);
    } else {
        fail(node, fmt::format("field '{}' must be a list or a {{start, stop, count}} range", field));
    }
    return out;
}

std::vector<int> read_ints(const YAML::Node& node, const std::string& field) {
    if (!node.IsSequence()) fail(node, fmt::format("field '{}' must be a list", field));
    std::vector<int> out;
    for (const auto& item : node) out.push_back(get<int>(item, field));
    return out;
}

template <class Fn>
auto enum_value(const YAML::Node& node, const std::string& field, Fn parse) {
    const auto text = get<std::string>(node, field);
    try {
        return parse(text);
    } catch (const InvalidArgument& e) {
        fail(node, fmt::format("field '{}': {}", field, e.what()));
    }
}

void set_n(RunConfig& c, int n) {
    c.cloud.n_atoms = n;
    c.array.n_sites = n;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidArgument(message);
}

// --- YAML emission -------------------------------------------------------------

std::string yaml_scalar(const nlohmann::json& v) {
    if (v.is_null()) return "null";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number()) return format_number(v.get<double>());
    return v.dump();  // double-quoted JSON string is valid YAML
}

void emit_yaml(std::string& out, const nlohmann::json& j, int indent, const std::string& prefix,
               const std::map<std::string, std::string>* comments) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    // Top level: a reading order instead of the object's sorted order.
    static const std::vector<std::string> order = {
        "experiment", "seed", "trials", "workers", "out", "gnuplot", "units", "n", "c1", "excitation",
        "uniform_c", "free_space", "poisson_n", "spacing", "n_eff", "delta_z", "filling", "cavity", "cloud",
        "array"};
    std::vector<std::string> keys;
    if (prefix.empty()) {
        for (const auto& k : order) {
            if (j.contains(k)) keys.push_back(k);
        }
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& key : keys) {
        const nlohmann::json& value = j.at(key);
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (comments) {
            if (const auto it = comments->find(path); it != comments->end()) {
                out += fmt::format("{}# {}\n", pad, it->second);
            }
        }
        if (value.is_object()) {
            out += fmt::format("{}{}:\n", pad, key);
            emit_yaml(out, value, indent + 2, path, comments);
        } else if (value.is_array()) {
            std::vector<std::string> items;
            for (const auto& item : value) items.push_back(yaml_scalar(item));
            out += fmt::format("{}{}: [{}]\n", pad, key, fmt::join(items, ", "));
        } else {
            out += fmt::format("{}{}: {}\n", pad, key, yaml_scalar(value));
        }
    }
}

const std::map<std::string, std::string>& template_comments() {
    static const std::map<std::string, std::string> c = {
        {"experiment", "cloud-decay | spectrum | array-map | disorder | ring-vs-line | ratio-sweep | oracle-check"},
        {"seed", "master seed; per-trial seeds are derived from it"},
        {"trials", "Monte Carlo trials per ensemble"},
        {"workers", "worker threads (0: available parallelism; RINGQED_WORKERS also honoured)"},
        {"out", "output directory"},
        {"gnuplot", "also write a gnuplot script next to each CSV"},
        {"units", "physical calibration used for reports and 'nm' lengths"},
        {"units.lambda0_nm", "resonant wavelength (nm)"},
        {"units.gamma0_mhz", "single-atom decay rate / 2π (MHz)"},
        {"n", "atom number (cloud mean, or array sites)"},
        {"c1", "mean single-atom cooperativity"},
        {"excitation", "tds (timed-Dicke) or ss (weak-drive steady state)"},
        {"uniform_c", "give every atom cooperativity c1 instead of the height-dependent value"},
        {"free_space", "include free-space dipole-dipole coupling"},
        {"poisson_n", "draw the cloud atom number from a Poisson distribution with mean n"},
        {"spacing", "array lattice constant (λ0 units, or e.g. \"255nm\")"},
        {"n_eff", "effective index of the resonator mode (k_wg = n_eff k0)"},
        {"delta_z", "r.m.s. height disorder of array atoms"},
        {"filling", "array site occupation probability"},
        {"cavity", "rates in Γ0 units"},
        {"cavity.z_ev", "evanescent decay length of g; null derives it from n_eff"},
        {"cavity.eta", "bus drive rate (transmission normalization)"},
        {"cloud", "Gaussian cloud r.m.s. widths and mean height (λ0 units or nm)"},
        {"array", "array trap height, shape (line | ring), optional target atom count"},
        {"cloud_decay.k_scan", "waveguide wavenumbers k_wg / k0 scanned in the cavity phases"},
        {"spectrum.geometry", "cloud or array"},
        {"spectrum.half_width", "detuning half-span in Γ0; null: 8 (1 + n c1)"},
        {"spectrum.probe", "cavity-locked (Δ_C fixed) or co-moving (Δ_C follows the probe)"},
        {"spectrum.n_values", "atom numbers for linewidth-vs-N; empty: single run at n"},
        {"spectrum.no_freespace_variant", "add the variant without free-space coupling"},
        {"spectrum.no_stochastic_variant", "add the variant with fixed N, uniform C, no height spread"},
        {"array_map.spacings", "lattice constants (λ0)"},
        {"array_map.n_effs", "effective indices"},
        {"disorder.axis", "delta_z or filling"},
        {"disorder.values", "axis values; empty picks a default range for the axis"},
        {"disorder.targets", "atom numbers per configuration"},
        {"ring_vs_line.n_values", "atom numbers"},
        {"ratio_sweep.n_values", "cloud atom numbers (uniform C)"},
        {"ratio_sweep.kinds", "excitations compared"},
        {"oracle.instances", "random instances compared against the density-matrix models"},
        {"oracle.max_atoms", "largest instance size (at most 6)"},
        {"oracle.kappa_scale", "second pass with κ multiplied by this factor"},
        {"oracle.t_end", "propagation time (1/Γ0)"},
    };
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, name] : experiment_table()) {
        if (k == kind) return name;
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
    for (const auto& [k, n] : experiment_table()) {
        if (n == name) return k;
    }
    throw InvalidArgument("unknown experiment '" + name + "'");
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, n] : experiment_table()) v.push_back(n);
        return v;
    }();
    return names;
}

RunConfig default_config(ExperimentKind kind) {
    RunConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::cloud_decay:
            set_n(c, 60);
            c.cloud_decay.k_scan = linspace(0.0, 2.5, 26);
            break;
        case ExperimentKind::spectrum:
            set_n(c, 60);
            break;
        case ExperimentKind::array_map:
            set_n(c, 20);
            c.array_map.spacings = linspace(0.05, 1.0, 20);
            c.array_map.n_effs = linspace(1.0, 2.5, 16);
            break;
        case ExperimentKind::disorder:
            set_n(c, 20);
            break;
        case ExperimentKind::ring_vs_line:
            set_n(c, 20);
            c.ring_vs_line.n_values = {1, 2, 3, 5, 10, 15, 20, 30, 40, 50, 60, 70, 80, 90, 100};
            break;
        case ExperimentKind::ratio_sweep:
            set_n(c, 60);
            c.uniform_c = true;
            c.ratio_sweep.n_values = {1, 5, 10, 20, 30, 40, 50, 60};
            break;
        case ExperimentKind::oracle_check:
            set_n(c, 4);
            break;
    }
    return c;
}

void RunConfig::validate() const {
    calibration.validate();
    require(trials >= 1, "trials must be at least 1");
    require(c1 > 0, "c1 must be positive");
    require(excitation != ExcitationKind::custom, "excitation must be tds or ss");
    cloud.validate();
    array.validate();
    cavity.validate();
    for (double k : cloud_decay.k_scan) require(k >= 0, "cloud_decay.k_scan values must be non-negative");
    require(spectrum.points >= 8, "spectrum.points must be at least 8");
    require(!spectrum.half_width || *spectrum.half_width > 0, "spectrum.half_width must be positive");
    for (int n : spectrum.n_values) require(n >= 1, "spectrum.n_values must be at least 1");
    for (double d : array_map.spacings) require(d > 0, "spacing must be positive");
    for (double k : array_map.n_effs) require(k > 0, "array_map.n_effs must be positive");
    for (double v : disorder.values) {
        if (disorder.axis == DisorderAxis::filling) {
            require(v > 0 && v <= 1, "filling must lie in (0, 1]");
        } else {
            require(v >= 0, "delta_z must be non-negative");
        }
    }
    for (int t : disorder.targets) require(t >= 1, "disorder.targets must be at least 1");
    for (int n : ring_vs_line.n_values) require(n >= 1, "ring_vs_line.n_values must be at least 1");
    for (int n : ratio_sweep.n_values) require(n >= 1, "ratio_sweep.n_values must be at least 1");
    for (auto k : ratio_sweep.kinds) require(k != ExcitationKind::custom, "ratio_sweep.kinds must be tds or ss");
    require(oracle.instances >= 1, "oracle.instances must be at least 1");
    require(oracle.max_atoms >= 1 && oracle.max_atoms <= 6, "oracle.max_atoms must lie in [1, 6]");
    require(oracle.kappa_scale > 1, "oracle.kappa_scale must exceed 1");
    require(oracle.t_end > 0, "oracle.t_end must be positive");
}

double parse_length(const std::string& text, const Calibration& cal) {
    std::string body = text;
    double scale = 1.0;
    if (body.size() > 2 && body.compare(body.size() - 2, 2, "nm") == 0) {
        body.resize(body.size() - 2);
        scale = 1.0 / cal.lambda0_nm();
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(body, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("invalid length '" + text + "'");
    }
    if (body.find_first_not_of(' ', used) != std::string::npos) throw InvalidArgument("invalid length '" + text + "'");
    return value * scale;
}

RunConfig parse_config_text(const std::string& text, std::optional<ExperimentKind> expected) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(fmt::format("line {}: {}", e.mark.line + 1, e.msg), e.mark.line + 1);
    }
    if (root.IsNull()) throw ConfigError("empty configuration");
    require_map(root, "configuration");
    check_keys(root,
               {"experiment", "seed", "trials", "workers", "out", "gnuplot", "units", "n", "n_atoms", "c1",
                "excitation", "uniform_c", "free_space", "poisson_n", "spacing", "d", "n_eff", "delta_z",
                "filling", "cavity", "cloud", "array", "cloud_decay", "spectrum", "array_map", "disorder",
                "ring_vs_line", "ratio_sweep", "oracle"},
               "");
    std::optional<ExperimentKind> kind = expected;
    if (root["experiment"]) {
        const auto named = enum_value(root["experiment"], "experiment", experiment_from_string);
        if (expected && named != *expected) {
            fail(root["experiment"], fmt::format("config is for '{}' but '{}' was requested", to_string(named),
                                                 to_string(*expected)));
        }
        kind = named;
    }
    if (!kind) throw ConfigError("missing required key 'experiment'");
    RunConfig c = default_config(*kind);

    // Units first: "nm" lengths depend on λ0.
    if (const auto u = root["units"]) {
        require_map(u, "units");
        check_keys(u, {"lambda0_nm", "gamma0_mhz"}, "units");
        if (u["lambda0_nm"]) c.calibration.lambda0_m = get<double>(u["lambda0_nm"], "units.lambda0_nm") / 1e9;
        if (u["gamma0_mhz"]) {
            c.calibration.gamma0_per_s = 2.0 * std::numbers::pi * (get<double>(u["gamma0_mhz"], "units.gamma0_mhz") * 1e6);
        }
        try {
            c.calibration.validate();
        } catch (const InvalidArgument& e) {
            fail(u, e.what());
        }
    }
    const LengthReader length(&c.calibration);
    auto number = [](const YAML::Node& n, const std::string& f) { return get<double>(n, f); };

    if (root["seed"]) c.seed = get<std::uint64_t>(root["seed"], "seed");
    if (root["trials"]) c.trials = get<std::size_t>(root["trials"], "trials");
    if (root["workers"]) c.workers = get<unsigned>(root["workers"], "workers");
    if (root["out"]) c.out = get<std::string>(root["out"], "out");
    if (root["gnuplot"]) c.gnuplot = get<bool>(root["gnuplot"], "gnuplot");
    if (root["n"] && root["n_atoms"]) fail(root["n_atoms"], "'n' and 'n_atoms' are aliases; give one");
    if (root["n"]) set_n(c, get<int>(root["n"], "n"));
    if (root["n_atoms"]) set_n(c, get<int>(root["n_atoms"], "n_atoms"));
    if (root["c1"]) c.c1 = get<double>(root["c1"], "c1");
    if (root["excitation"]) c.excitation = enum_value(root["excitation"], "excitation", excitation_from_string);
    if (root["uniform_c"]) c.uniform_c = get<bool>(root["uniform_c"], "uniform_c");
    if (root["free_space"]) c.free_space = get<bool>(root["free_space"], "free_space");
    if (root["poisson_n"]) c.cloud.poisson_n = get<bool>(root["poisson_n"], "poisson_n");
    if (root["spacing"] && root["d"]) fail(root["d"], "'spacing' and 'd' are aliases; give one");
    if (root["spacing"]) c.array.spacing = length(root["spacing"], "spacing");
    if (root["d"]) c.array.spacing = length(root["d"], "d");
    if (root["n_eff"]) c.cavity.n_eff = get<double>(root["n_eff"], "n_eff");
    if (root["delta_z"]) c.array.delta_z = length(root["delta_z"], "delta_z");
    if (root["filling"]) c.array.filling = get<double>(root["filling"], "filling");

    if (const auto s = root["cavity"]) {
        require_map(s, "cavity");
        check_keys(s, {"kappa_i", "kappa_e", "delta_c", "z_ev", "eta"}, "cavity");
        if (s["kappa_i"]) c.cavity.kappa_i = get<double>(s["kappa_i"], "cavity.kappa_i");
        if (s["kappa_e"]) c.cavity.kappa_e = get<double>(s["kappa_e"], "cavity.kappa_e");
        if (s["delta_c"]) c.cavity.delta_c = get<double>(s["delta_c"], "cavity.delta_c");
        if (s["z_ev"]) {
            c.cavity.z_ev = is_null(s["z_ev"]) ? std::nullopt : std::optional(length(s["z_ev"], "cavity.z_ev"));
        }
        if (s["eta"]) c.cavity.eta = get<double>(s["eta"], "cavity.eta");
    }
    if (const auto s = root["cloud"]) {
        require_map(s, "cloud");
        check_keys(s, {"sigma_x", "sigma_y", "sigma_z", "z_mean"}, "cloud");
        if (s["sigma_x"]) c.cloud.sigma_x = length(s["sigma_x"], "cloud.sigma_x");
        if (s["sigma_y"]) c.cloud.sigma_y = length(s["sigma_y"], "cloud.sigma_y");
        if (s["sigma_z"]) c.cloud.sigma_z = length(s["sigma_z"], "cloud.sigma_z");
        if (s["z_mean"]) c.cloud.z_mean = length(s["z_mean"], "cloud.z_mean");
    }
    if (const auto s = root["array"]) {
        require_map(s, "array");
        check_keys(s, {"z_height", "shape", "target_atoms"}, "array");
        if (s["z_height"]) c.array.z_height = length(s["z_height"], "array.z_height");
        if (s["shape"]) c.array.shape = enum_value(s["shape"], "array.shape", array_shape_from_string);
        if (s["target_atoms"]) {
            c.array.target_atoms = is_null(s["target_atoms"])
                                       ? std::nullopt
                                       : std::optional(get<int>(s["target_atoms"], "array.target_atoms"));
        }
    }
    if (const auto s = root["cloud_decay"]) {
        require_map(s, "cloud_decay");
        check_keys(s, {"k_scan"}, "cloud_decay");
        if (s["k_scan"]) c.cloud_decay.k_scan = read_grid(s["k_scan"], "cloud_decay.k_scan", number);
    }
    if (const auto s = root["spectrum"]) {
        require_map(s, "spectrum");
        check_keys(s, {"geometry", "half_width", "points", "probe", "n_values", "no_freespace_variant",
                       "no_stochastic_variant"},
                   "spectrum");
        if (s["geometry"]) {
            const auto g = get<std::string>(s["geometry"], "spectrum.geometry");
            if (g != "cloud" && g != "array") fail(s["geometry"], "spectrum.geometry must be cloud or array");
            c.spectrum.geometry = g == "cloud" ? SpectrumGeometry::cloud : SpectrumGeometry::array;
        }
        if (s["half_width"]) {
            c.spectrum.half_width = is_null(s["half_width"])
                                        ? std::nullopt
                                        : std::optional(get<double>(s["half_width"], "spectrum.half_width"));
        }
        if (s["points"]) c.spectrum.points = get<std::size_t>(s["points"], "spectrum.points");
        if (s["probe"]) c.spectrum.probe = enum_value(s["probe"], "spectrum.probe", probe_mode_from_string);
        if (s["n_values"]) c.spectrum.n_values = read_ints(s["n_values"], "spectrum.n_values");
        if (s["no_freespace_variant"]) {
            c.spectrum.no_freespace_variant = get<bool>(s["no_freespace_variant"], "spectrum.no_freespace_variant");
        }
        if (s["no_stochastic_variant"]) {
            c.spectrum.no_stochastic_variant =
                get<bool>(s["no_stochastic_variant"], "spectrum.no_stochastic_variant");
        }
    }
    if (const auto s = root["array_map"]) {
        require_map(s, "array_map");
        check_keys(s, {"spacings", "n_effs"}, "array_map");
        if (s["spacings"]) c.array_map.spacings = read_grid(s["spacings"], "array_map.spacings", length);
        if (s["n_effs"]) c.array_map.n_effs = read_grid(s["n_effs"], "array_map.n_effs", number);
    }
    if (const auto s = root["disorder"]) {
        require_map(s, "disorder");
        check_keys(s, {"axis", "values", "targets"}, "disorder");
        if (s["axis"]) c.disorder.axis = enum_value(s["axis"], "disorder.axis", disorder_axis_from_string);
        if (s["values"]) c.disorder.values = read_grid(s["values"], "disorder.values", length);
        if (s["targets"]) c.disorder.targets = read_ints(s["targets"], "disorder.targets");
    }
    if (const auto s = root["ring_vs_line"]) {
        require_map(s, "ring_vs_line");
        check_keys(s, {"n_values"}, "ring_vs_line");
        if (s["n_values"]) c.ring_vs_line.n_values = read_ints(s["n_values"], "ring_vs_line.n_values");
    }
    if (const auto s = root["ratio_sweep"]) {
        require_map(s, "ratio_sweep");
        check_keys(s, {"n_values", "kinds"}, "ratio_sweep");
        if (s["n_values"]) c.ratio_sweep.n_values = read_ints(s["n_values"], "ratio_sweep.n_values");
        if (s["kinds"]) {
            if (!s["kinds"].IsSequence()) fail(s["kinds"], "field 'ratio_sweep.kinds' must be a list");
            c.ratio_sweep.kinds.clear();
            for (const auto& k : s["kinds"]) {
                c.ratio_sweep.kinds.push_back(enum_value(k, "ratio_sweep.kinds", excitation_from_string));
            }
        }
    }
    if (const auto s = root["oracle"]) {
        require_map(s, "oracle");
        check_keys(s, {"instances", "max_atoms", "kappa_scale", "t_end"}, "oracle");
        if (s["instances"]) c.oracle.instances = get<std::size_t>(s["instances"], "oracle.instances");
        if (s["max_atoms"]) c.oracle.max_atoms = get<int>(s["max_atoms"], "oracle.max_atoms");
        if (s["kappa_scale"]) c.oracle.kappa_scale = get<double>(s["kappa_scale"], "oracle.kappa_scale");
        if (s["t_end"]) c.oracle.t_end = get<double>(s["t_end"], "oracle.t_end");
    }

    c.validate();
    return c;
}

RunConfig parse_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), expected);
}

nlohmann::json to_json(const RunConfig& c) {
    using nlohmann::json;
    auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
    json j = {
        {"experiment", to_string(c.experiment)},
        {"seed", c.seed},
        {"trials", c.trials},
        {"workers", c.workers},
        {"out", c.out.string()},
        {"gnuplot", c.gnuplot},
        {"units",
         {{"lambda0_nm", c.calibration.lambda0_nm()},
          {"gamma0_mhz", c.calibration.gamma0_per_s / (2.0 * std::numbers::pi * 1e6)}}},
        {"n", c.cloud.n_atoms},
        {"c1", c.c1},
        {"excitation", to_string(c.excitation)},
        {"uniform_c", c.uniform_c},
        {"free_space", c.free_space},
        {"poisson_n", c.cloud.poisson_n},
        {"spacing", c.array.spacing},
        {"n_eff", c.cavity.n_eff},
        {"delta_z", c.array.delta_z},
        {"filling", c.array.filling},
        {"cavity",
         {{"kappa_i", c.cavity.kappa_i},
          {"kappa_e", c.cavity.kappa_e},
          {"delta_c", c.cavity.delta_c},
          {"z_ev", opt(c.cavity.z_ev)},
          {"eta", c.cavity.eta}}},
        {"cloud",
         {{"sigma_x", c.cloud.sigma_x},
          {"sigma_y", c.cloud.sigma_y},
          {"sigma_z", c.cloud.sigma_z},
          {"z_mean", c.cloud.z_mean}}},
        {"array",
         {{"z_height", c.array.z_height},
          {"shape", to_string(c.array.shape)},
          {"target_atoms", opt(c.array.target_atoms)}}},
    };
    std::vector<std::string> kinds;
    for (auto k : c.ratio_sweep.kinds) kinds.push_back(to_string(k));
    switch (c.experiment) {
        case ExperimentKind::cloud_decay:
            j["cloud_decay"] = {{"k_scan", c.cloud_decay.k_scan}};
            break;
        case ExperimentKind::spectrum:
            j["spectrum"] = {{"geometry", c.spectrum.geometry == SpectrumGeometry::cloud ? "cloud" : "array"},
                             {"half_width", opt(c.spectrum.half_width)},
                             {"points", c.spectrum.points},
                             {"probe", to_string(c.spectrum.probe)},
                             {"n_values", c.spectrum.n_values},
                             {"no_freespace_variant", c.spectrum.no_freespace_variant},
                             {"no_stochastic_variant", c.spectrum.no_stochastic_variant}};
            break;
        case ExperimentKind::array_map:
            j["array_map"] = {{"spacings", c.array_map.spacings}, {"n_effs", c.array_map.n_effs}};
            break;
        case ExperimentKind::disorder:
            j["disorder"] = {{"axis", to_string(c.disorder.axis)},
                             {"values", c.disorder.values},
                             {"targets", c.disorder.targets}};
            break;
        case ExperimentKind::ring_vs_line:
            j["ring_vs_line"] = {{"n_values", c.ring_vs_line.n_values}};
            break;
        case ExperimentKind::ratio_sweep:
            j["ratio_sweep"] = {{"n_values", c.ratio_sweep.n_values}, {"kinds", kinds}};
            break;
        case ExperimentKind::oracle_check:
            j["oracle"] = {{"instances", c.oracle.instances},
                           {"max_atoms", c.oracle.max_atoms},
                           {"kappa_scale", c.oracle.kappa_scale},
                           {"t_end", c.oracle.t_end}};
            break;
    }
    return j;
}

std::string to_yaml(const RunConfig& config) {
    std::string out;
    emit_yaml(out, to_json(config), 0, "", nullptr);
    return out;
}

std::string emit_config(ExperimentKind kind) {
    std::string out = fmt::format(
        "# ringqed {} configuration. Lengths are in units of the resonant wavelength\n"
        "# unless written with an nm suffix (\"50nm\"); rates and detunings in units of\n"
        "# the single-atom decay rate. Unknown keys are rejected.\n",
        to_string(kind));
    emit_yaml(out, to_json(default_config(kind)), 0, "", &template_comments());
    return out;
}

unsigned workers_from_environment(std::optional<unsigned> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("RINGQED_WORKERS"); env && *env) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0') return static_cast<unsigned>(v);
        throw InvalidArgument(fmt::format("RINGQED_WORKERS must be a non-negative integer (got '{}')", env));
    }
    return 0;
}

}  // namespace ringqed

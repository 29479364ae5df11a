#include "ringqed/experiments.hpp"

#include "ringqed/errors.hpp"
#include "ringqed/parallel.hpp"
#include "ringqed/random.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <numbers>

namespace ringqed {

namespace {

// Bi-orthonormality accepted into statistics.
constexpr double kBiorthogonalityTolerance = 1e-10;

struct TrialOutcome {
    std::optional<std::string> excluded;
    DecayMetrics metrics;
    double n_atoms = 0.0;
    double mean_cooperativity = 0.0;
};

// Maps the recoverable per-trial failures onto exclusion reasons; anything
// else propagates.
template <class Fn>
std::optional<std::string> guarded(Fn&& fn) {
    try {
        fn();
    } catch (const NearCoincidence&) {
        return "near_coincidence";
    } catch (const DefectiveMatrix&) {
        return "defective";
    } catch (const DarkPole&) {
        return "dark_pole";
    } catch (const NumericalConsistency&) {
        return "numerical";
    }
    return std::nullopt;
}

void check_biorthogonality(const EigenSystem& eig) {
    const double err = eig.biorthogonality_error();
    if (!(err <= kBiorthogonalityTolerance)) {
        throw DefectiveMatrix(fmt::format("bi-orthonormality error {:.3g}", err));
    }
}

std::optional<double> ratio(std::optional<double> a, std::optional<double> b) {
    if (!a || !b || *b == 0.0) return std::nullopt;
    return *a / *b;
}

void record(EnsembleStats& stats, const TrialOutcome& t) {
    if (t.excluded) {
        stats.exclude(*t.excluded);
        return;
    }
    ++stats.accepted;
    const DecayMetrics& m = t.metrics;
    auto& s = stats.metrics;
    s["gamma_f"].add(m.gamma_f);
    s["gamma_c"].add(m.gamma_c);
    s["Gamma_f"].add(m.Gamma_f);
    s["Gamma_c"].add(m.Gamma_c);
    s["Gamma_exp"].add(m.Gamma_exp);
    s["theta"].add(m.theta);
    s["gamma_c_over_gamma_f"].add(ratio(m.gamma_c, m.gamma_f));
    s["Gamma_c_over_Gamma_f"].add(ratio(m.Gamma_c, m.Gamma_f));
    s["n_atoms"].add(t.n_atoms);
    s["mean_cooperativity"].add(t.mean_cooperativity);
}

double phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

SweepGrid::Series& fill(SweepGrid::Series& series, std::size_t cell, const EnsembleStats& stats,
                        const std::string& metric) {
    const auto it = stats.metrics.find(metric);
    if (it != stats.metrics.end() && it->second.stats.count() > 0) {
        series.mean[cell] = it->second.stats.mean();
        series.standard_error[cell] = it->second.stats.standard_error();
        series.count[cell] = it->second.stats.count();
    } else {
        series.mean[cell] = std::nan("");
        series.standard_error[cell] = std::nan("");
        series.count[cell] = 0;
    }
    series.excluded[cell] = stats.excluded_total();
    return series;
}

void require_accepted(const EnsembleStats& stats, const char* what) {
    if (stats.accepted == 0) {
        throw Error(fmt::format("{}: all {} trials excluded", what, stats.requested));
    }
}

TrialOutcome evaluate(AtomConfig config, const CavityParams& cavity, const RealizationOptions& opts,
                      ExcitationKind kind) {
    TrialOutcome out;
    out.n_atoms = static_cast<double>(config.size());
    out.excluded = guarded([&] {
        const Realization r = assemble(std::move(config), cavity, opts);
        const ExcitationState state = excite(r, kind);
        out.metrics = decay_metrics(state.sigma, r.coupling, r.cavity, r.free);
        out.mean_cooperativity = r.cavity.cooperativities.mean();
    });
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Realization assemble(AtomConfig config, const CavityParams& cavity,
                     const RealizationOptions& options) {
    Realization r;
    r.cavity = build_cavity_matrix(config, cavity, options.uniform_c);
    if (options.k_scale) {
        if (!(*options.k_scale >= 0)) throw InvalidArgument("k scale must be non-negative");
        r.cavity.phases = cavity_phases(config, *options.k_scale);
        r.cavity = with_cavity_detuning(r.cavity, cavity, cavity.delta_c);
    }
    r.free = options.free_space ? build_free_matrix(config)
                                : independent_emitters(static_cast<Eigen::Index>(config.size()));
    r.coupling = build_coupling(options.delta_a, r.cavity, r.free);
    r.eig = eigendecompose(r.coupling.matrix);
    check_biorthogonality(r.eig);
    r.drive = drive_vector(r.cavity, cavity.eta);
    r.config = std::move(config);
    return r;
}

ExcitationState excite(const Realization& r, ExcitationKind kind, double eps) {
    switch (kind) {
        case ExcitationKind::tds:
            return timed_dicke_state(r.eig, r.drive, eps);
        case ExcitationKind::ss: {
            ExcitationState s = steady_state(r.eig, r.drive);
            const double norm = s.sigma.norm();
            if (!(norm > 0)) throw ZeroDrive("excite: steady state vanishes");
            s.sigma *= eps / norm;
            s.weights *= eps / norm;
            return s;
        }
        case ExcitationKind::custom:
            break;
    }
    throw InvalidArgument("excite: excitation kind must be tds or ss");
}

double mean_relative_cooperativity(double mean, double sigma, double z_ref, double z_ev) {
    if (!(z_ev > 0)) throw InvalidCalibration("z_ev must be positive");
    const double a = 2.0 / z_ev;  // C ∝ g² ∝ e^{-a (z - z_ref)}
    if (sigma == 0.0) return std::exp(-a * (mean - z_ref));
    // E[e^{-a z} | z > z_min] for z ~ N(mean, σ²), via the shifted Gaussian.
    const double shifted = mean - a * sigma * sigma;
    const double num = phi((shifted - kMinHeight) / sigma);
    const double den = phi((mean - kMinHeight) / sigma);
    if (!(num > 0) || !(den > 0)) {
        throw InvalidCalibration("cooperativity calibration underflows for this height distribution");
    }
    const double log_value =
        -a * (mean - z_ref) + 0.5 * a * a * sigma * sigma + std::log(num) - std::log(den);
    return std::exp(log_value);
}

CavityParams calibrate_cloud(const CloudParams& cloud, CavityParams cavity, double c1) {
    if (!(c1 > 0)) throw InvalidCalibration("c1 must be positive");
    cavity.z_ev = cavity.evanescent_length();
    cavity.z_ref = cloud.z_mean;
    cavity.c_ref = c1 / mean_relative_cooperativity(cloud.z_mean, cloud.sigma_z, cavity.z_ref,
                                                    *cavity.z_ev);
    return cavity;
}

CavityParams calibrate_array(const ArrayParams& array, CavityParams cavity, double c1) {
    if (!(c1 > 0)) throw InvalidCalibration("c1 must be positive");
    if (!cavity.z_ev && cavity.n_eff > 1.0) cavity.z_ev = cavity.evanescent_length();
    cavity.z_ref = array.z_height;
    cavity.c_ref = c1;
    return cavity;
}

// ---------------------------------------------------------------------------

CloudEnsembleResult run_cloud_ensemble(const CloudEnsembleSpec& spec) {
    if (spec.trials < 1) throw InvalidArgument("trials must be at least 1");
    spec.cloud.validate();
    const CavityParams base = calibrate_cloud(spec.cloud, spec.cavity, spec.c1);

    CloudEnsembleResult result;
    result.k_scale = spec.k_scan.empty() ? std::vector<double>{spec.cavity.n_eff} : spec.k_scan;
    const std::size_t nk = result.k_scale.size();

    RealizationOptions base_opts;
    base_opts.delta_a = spec.delta_a;
    if (spec.uniform_c) base_opts.uniform_c = spec.c1;

    // One cloud per trial, shared across the k scan.
    auto outcomes = parallel_map<std::vector<TrialOutcome>>(spec.trials, spec.workers, [&](std::size_t i) {
        const AtomConfig config = sample_cloud(spec.cloud, derive_seed(spec.seed, i));
        std::vector<TrialOutcome> row;
        row.reserve(nk);
        for (double k : result.k_scale) {
            RealizationOptions opts = base_opts;
            opts.k_scale = k;
            row.push_back(evaluate(config, base, opts, spec.excitation));
        }
        return row;
    });

    const double n_mean = spec.cloud.n_atoms;
    for (std::size_t k = 0; k < nk; ++k) {
        EnsembleStats stats;
        stats.with_histogram("gamma_f", 0.0, 3.0, spec.histogram_bins);
        stats.with_histogram("gamma_c", 0.0, 3.0 * n_mean * spec.c1, spec.histogram_bins);
        for (const auto& row : outcomes) {
            ++stats.requested;
            record(stats, row[k]);
        }
        require_accepted(stats, "cloud ensemble");
        result.stats.push_back(std::move(stats));
    }
    return result;
}

// ---------------------------------------------------------------------------

std::vector<double> detuning_grid(double half_width, std::size_t points) {
    if (!(half_width > 0)) throw InvalidArgument("detuning half-width must be positive");
    if (points < 2) throw InvalidArgument("detuning grid needs at least two points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

SpectrumResult compute_spectrum(const SpectrumSpec& spec) {
    if (spec.trials < 1) throw InvalidArgument("trials must be at least 1");
    if (spec.detunings.size() < 8) throw InvalidArgument("spectrum: detuning grid needs at least 8 points");

    // Geometry sampler and calibrated cavity.
    std::function<AtomConfig(std::uint64_t)> sample;
    CavityParams cavity;
    bool uniform = spec.uniform_c || spec.stochastic_off;
    if (const auto* cloud = std::get_if<CloudParams>(&spec.geometry)) {
        CloudParams c = *cloud;
        if (spec.poisson_n) c.poisson_n = true;
        if (spec.stochastic_off) {
            c.poisson_n = false;
            c.sigma_z = 0.0;
        }
        c.validate();
        cavity = calibrate_cloud(c, spec.cavity, spec.c1);
        sample = [c](std::uint64_t seed) { return sample_cloud(c, seed); };
    } else {
        const ArrayParams a = std::get<ArrayParams>(spec.geometry);
        a.validate();
        cavity = calibrate_array(a, spec.cavity, spec.c1);
        sample = [a](std::uint64_t seed) { return build_array(a, seed); };
    }
    if (cavity.eta == 0.0) throw UndefinedTransmission("spectrum: drive rate eta is zero");

    RealizationOptions opts;
    opts.free_space = spec.free_space;
    if (uniform) opts.uniform_c = spec.c1;

    const std::size_t nd = spec.detunings.size();
    struct Trial {
        std::optional<std::string> excluded;
        std::vector<double> power;
    };

    auto trials = parallel_map<Trial>(spec.trials, spec.workers, [&](std::size_t i) {
        Trial t;
        t.excluded = guarded([&] {
            AtomConfig config = sample(derive_seed(spec.seed, i));
            t.power.resize(nd);
            if (spec.probe == ProbeMode::cavity_locked) {
                // Δ_A enters M as a multiple of the identity: decompose once.
                const Realization r = assemble(std::move(config), cavity, opts);
                for (std::size_t k = 0; k < nd; ++k) {
                    const CVector w = weights_ss(r.eig, r.drive, spec.detunings[k]);
                    const CVector sigma = r.eig.right * w;
                    t.power[k] = std::norm(bus_transmission(sigma, r.cavity, cavity));
                }
            } else {
                const CavityMatrix cav0 = build_cavity_matrix(config, cavity, opts.uniform_c);
                const FreeSpaceMatrix free =
                    opts.free_space ? build_free_matrix(config)
                                    : independent_emitters(static_cast<Eigen::Index>(config.size()));
                for (std::size_t k = 0; k < nd; ++k) {
                    const double delta = spec.detunings[k];
                    const CavityMatrix cav = with_cavity_detuning(cav0, cavity, cavity.delta_c + delta);
                    const CouplingMatrix m = build_coupling(delta, cav, free);
                    const CVector sigma = steady_state_direct(m.matrix, drive_vector(cav, cavity.eta));
                    t.power[k] = std::norm(bus_transmission(sigma, cav, cavity));
                }
            }
        });
        return t;
    });

    SpectrumResult result;
    result.detunings = spec.detunings;
    std::vector<StreamingStats> power(nd);
    for (const auto& t : trials) {
        if (t.excluded) {
            ++result.excluded[*t.excluded];
            continue;
        }
        ++result.accepted;
        for (std::size_t k = 0; k < nd; ++k) power[k].add(t.power[k]);
    }
    if (result.accepted == 0) throw Error(fmt::format("spectrum: all {} trials excluded", spec.trials));

    result.transmission.resize(nd);
    result.extinction.resize(nd);
    for (std::size_t k = 0; k < nd; ++k) {
        result.transmission[k] = power[k].mean();
        result.extinction[k] = 1.0 - power[k].mean();
    }
    result.fit = fit_lorentzian(result.detunings, result.extinction);
    return result;
}

// ---------------------------------------------------------------------------

std::size_t SweepGrid::cells() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

SweepGrid::Series& SweepGrid::add_series(const std::string& name) {
    Series s;
    s.name = name;
    const std::size_t n = cells();
    s.mean.assign(n, std::nan(""));
    s.standard_error.assign(n, std::nan(""));
    s.count.assign(n, 0);
    s.excluded.assign(n, 0);
    series.push_back(std::move(s));
    return series.back();
}

const SweepGrid::Series& SweepGrid::get(const std::string& name) const {
    for (const auto& s : series) {
        if (s.name == name) return s;
    }
    throw InvalidArgument("sweep grid: no series named '" + name + "'");
}

double SweepGrid::value(const std::string& name, std::size_t i, std::size_t j) const {
    const std::size_t stride = axes.size() > 1 ? axes[1].values.size() : 1;
    return get(name).mean.at(i * stride + j);
}

SweepGrid sweep_array_map(const ArrayMapSpec& spec) {
    if (spec.spacings.empty() || spec.n_effs.empty()) throw InvalidArgument("array map: empty axis");
    SweepGrid grid;
    grid.axes = {{"spacing", spec.spacings}, {"n_eff", spec.n_effs}};
    auto& gamma_f = grid.add_series("gamma_f");
    auto& gamma_c = grid.add_series("gamma_c");
    // γ_f of a uniform-C array does not depend on C1, so the nominal value is used.
    RealizationOptions opts;
    opts.uniform_c = spec.c1;
    std::size_t cell = 0;
    for (double d : spec.spacings) {
        for (double n_eff : spec.n_effs) {
            ArrayParams a = spec.base;
            a.spacing = d;
            a.filling = 1.0;
            a.delta_z = 0.0;
            CavityParams cav = calibrate_array(a, spec.cavity, spec.c1);
            cav.n_eff = n_eff;
            EnsembleStats stats;
            stats.requested = 1;
            record(stats, evaluate(build_array(a, 0), cav, opts, ExcitationKind::tds));
            fill(gamma_f, cell, stats, "gamma_f");
            fill(gamma_c, cell, stats, "gamma_c");
            ++cell;
        }
    }
    return grid;
}

SweepGrid sweep_disorder(const DisorderSpec& spec) {
    if (spec.values.empty()) throw InvalidArgument("disorder: empty axis");
    if (spec.trials < 1) throw InvalidArgument("trials must be at least 1");
    SweepGrid grid;
    grid.axes = {{to_string(spec.axis), spec.values}};
    RealizationOptions uniform;
    uniform.uniform_c = spec.c1;

    for (int target : spec.targets) {
        auto& zdep = grid.add_series(fmt::format("gamma_f_zdep_N{}", target));
        auto& flat = grid.add_series(fmt::format("gamma_f_uniform_N{}", target));
        for (std::size_t v = 0; v < spec.values.size(); ++v) {
            ArrayParams a = spec.base;
            a.target_atoms = target;
            if (spec.axis == DisorderAxis::delta_z) {
                a.delta_z = spec.values[v];
            } else {
                a.filling = spec.values[v];
            }
            a.validate();
            const CavityParams cav = calibrate_array(a, spec.cavity, spec.c1);
            // Both couplings see the same configuration in each trial.
            auto outcomes = parallel_map<std::pair<TrialOutcome, TrialOutcome>>(
                spec.trials, spec.workers, [&](std::size_t i) {
                    const AtomConfig config = build_array(a, derive_seed(spec.seed, i));
                    return std::pair{evaluate(config, cav, {}, ExcitationKind::tds),
                                     evaluate(config, cav, uniform, ExcitationKind::tds)};
                });
            EnsembleStats s_zdep, s_flat;
            for (const auto& [z, u] : outcomes) {
                ++s_zdep.requested;
                ++s_flat.requested;
                record(s_zdep, z);
                record(s_flat, u);
            }
            fill(zdep, v, s_zdep, "gamma_f");
            fill(flat, v, s_flat, "gamma_f");
        }
    }
    return grid;
}

SweepGrid compare_line_ring(const LineRingSpec& spec) {
    if (spec.n_values.empty()) throw InvalidArgument("ring-vs-line: empty N list");
    SweepGrid grid;
    std::vector<double> ns(spec.n_values.begin(), spec.n_values.end());
    grid.axes = {{"n_atoms", ns}};
    auto& line = grid.add_series("gamma_f_line");
    auto& ring = grid.add_series("gamma_f_ring");
    RealizationOptions opts;
    opts.uniform_c = spec.c1;
    for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
        for (auto [shape, series] : {std::pair{ArrayShape::line, &line}, std::pair{ArrayShape::ring, &ring}}) {
            ArrayParams a;
            a.n_sites = spec.n_values[i];
            a.spacing = spec.spacing;
            a.z_height = spec.z_height;
            a.shape = shape;
            const CavityParams cav = calibrate_array(a, spec.cavity, spec.c1);
            EnsembleStats stats;
            stats.requested = 1;
            record(stats, evaluate(build_array(a, 0), cav, opts, ExcitationKind::tds));
            fill(*series, i, stats, "gamma_f");
        }
    }
    return grid;
}

SweepGrid decay_ratio_sweep(const RatioSweepSpec& spec) {
    if (spec.n_values.empty()) throw InvalidArgument("ratio sweep: empty N list");
    SweepGrid grid;
    std::vector<double> ns(spec.n_values.begin(), spec.n_values.end());
    grid.axes = {{"n_atoms", ns}};
    static const char* metrics[] = {"gamma_c_over_gamma_f", "Gamma_c_over_Gamma_f", "theta",
                                    "gamma_f", "gamma_c", "Gamma_f", "Gamma_c"};
    for (ExcitationKind kind : spec.kinds) {
        for (const char* m : metrics) grid.add_series(fmt::format("{}_{}", to_string(kind), m));
    }
    for (std::size_t i = 0; i < spec.n_values.size(); ++i) {
        for (ExcitationKind kind : spec.kinds) {
            CloudEnsembleSpec e;
            e.cloud = spec.cloud;
            e.cloud.n_atoms = spec.n_values[i];
            e.cavity = spec.cavity;
            e.c1 = spec.c1;
            e.excitation = kind;
            e.trials = spec.trials;
            e.seed = derive_seed(spec.seed, i);  // shared by the excitation kinds
            e.uniform_c = spec.uniform_c;
            e.workers = spec.workers;
            const EnsembleStats stats = run_cloud_ensemble(e).stats.front();
            for (const char* m : metrics) {
                const std::string name = fmt::format("{}_{}", to_string(kind), m);
                for (auto& s : grid.series) {
                    if (s.name == name) fill(s, i, stats, m);
                }
            }
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------

std::string to_string(ExcitationKind kind) {
    switch (kind) {
        case ExcitationKind::tds: return "tds";
        case ExcitationKind::ss: return "ss";
        case ExcitationKind::custom: return "custom";
    }
    return "custom";
}

ExcitationKind excitation_from_string(const std::string& name) {
    if (name == "tds") return ExcitationKind::tds;
    if (name == "ss") return ExcitationKind::ss;
    throw InvalidArgument("unknown excitation '" + name + "' (expected tds or ss)");
}

std::string to_string(ProbeMode mode) {
    return mode == ProbeMode::cavity_locked ? "cavity-locked" : "co-moving";
}

ProbeMode probe_mode_from_string(const std::string& name) {
    if (name == "cavity-locked") return ProbeMode::cavity_locked;
    if (name == "co-moving") return ProbeMode::co_moving;
    throw InvalidArgument("unknown probe mode '" + name + "' (expected cavity-locked or co-moving)");
}

std::string to_string(DisorderAxis axis) {
    return axis == DisorderAxis::delta_z ? "delta_z" : "filling";
}

DisorderAxis disorder_axis_from_string(const std::string& name) {
    if (name == "delta_z") return DisorderAxis::delta_z;
    if (name == "filling") return DisorderAxis::filling;
    throw InvalidArgument("unknown disorder axis '" + name + "' (expected delta_z or filling)");
}

}  // namespace ringqed

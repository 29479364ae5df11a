#include "ringqed/runner.hpp"

#include "ringqed/errors.hpp"
#include "ringqed/io.hpp"
#include "ringqed/oracle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>

namespace ringqed {

namespace {

// "x" or "x ± se" with `digits` decimals; the error is dropped when it
// rounds to zero.
std::string with_error(double mean, double se, int digits) {
    if (!(se >= 0.5 * std::pow(10.0, -digits))) return fmt::format("{:.{}f}", mean, digits);
    return fmt::format("{:.{}f} ± {:.{}f}", mean, digits, se, digits);
}

std::size_t nearest(const std::vector<double>& values, double target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (std::abs(values[i] - target) < std::abs(values[best] - target)) best = i;
    }
    return best;
}

void add_exclusions(nlohmann::json& j, const std::map<std::string, std::size_t>& excluded) {
    for (const auto& [reason, n] : excluded) j[reason] = j.value(reason, std::size_t{0}) + n;
}

// Collects outputs and writes the sidecar whether or not the run completes.
class Artifacts {
public:
    Artifacts(const RunConfig& config, const std::string& stem) : config_(config), stem_(stem) {
        sidecar_.experiment = to_string(config.experiment);
        sidecar_.config = to_json(config);
        sidecar_.seed = config.seed;
    }

    void table(const std::string& name, const CsvTable& t, const std::vector<std::string>& plot = {},
               bool log_y = false) {
        const auto path = config_.out / (name + ".csv");
        write_text(path, t.str());
        files_.push_back(path);
        if (config_.gnuplot && !plot.empty()) {
            const auto gp = config_.out / (name + ".gp");
            write_text(gp, gnuplot_script(path, t, plot, log_y));
            files_.push_back(gp);
        }
    }

    nlohmann::json& exclusions() { return sidecar_.exclusions; }
    nlohmann::json& results() { return sidecar_.extra; }

    void finish(bool partial, const std::string& error = {}) {
        sidecar_.outputs = files_;
        sidecar_.partial = partial;
        if (!error.empty()) sidecar_.extra["error"] = error;
        const auto path = config_.out / (stem_ + ".json");
        write_sidecar(sidecar_, path);
        files_.push_back(path);
    }

    const std::vector<std::filesystem::path>& files() const { return files_; }

private:
    const RunConfig& config_;
    std::string stem_;
    Sidecar sidecar_;
    std::vector<std::filesystem::path> files_;
};

// --- drivers -----------------------------------------------------------------

std::string run_cloud_decay(const RunConfig& c, Artifacts& art) {
    CloudEnsembleSpec spec;
    spec.cloud = c.cloud;
    spec.cavity = c.cavity;
    spec.c1 = c.c1;
    spec.excitation = c.excitation;
    spec.k_scan = c.cloud_decay.k_scan;
    spec.trials = c.trials;
    spec.seed = c.seed;
    spec.uniform_c = c.uniform_c;
    spec.workers = c.workers;
    if (!c.free_space) throw InvalidArgument("cloud-decay: free-space coupling cannot be disabled (γ_f undefined)");
    const CloudEnsembleResult r = run_cloud_ensemble(spec);

    CsvTable wide;
    static const char* metrics[] = {"gamma_f", "gamma_c", "Gamma_f", "Gamma_c", "Gamma_exp", "theta",
                                    "gamma_c_over_gamma_f", "Gamma_c_over_Gamma_f"};
    wide.columns = {"k_scale"};
    for (const char* m : metrics) {
        wide.columns.push_back(m);
        wide.columns.push_back(std::string(m) + "_se");
    }
    wide.columns.insert(wide.columns.end(), {"accepted", "excluded"});
    for (std::size_t k = 0; k < r.k_scale.size(); ++k) {
        const EnsembleStats& s = r.stats[k];
        std::vector<std::string> row{format_number(r.k_scale[k])};
        for (const char* m : metrics) {
            const auto& st = s.at(m).stats;
            row.push_back(format_number(st.count() ? st.mean() : std::nan("")));
            row.push_back(format_number(st.standard_error()));
        }
        row.push_back(format_number(s.accepted));
        row.push_back(format_number(s.excluded_total()));
        wide.add_row(std::move(row));
        add_exclusions(art.exclusions(), s.excluded);
    }
    art.table("cloud_decay", wide, {"gamma_f", "gamma_c"});
    art.table("cloud_decay_stats", ensemble_summary_table(r));
    art.table("cloud_decay_hist_gamma_f", ensemble_histogram_table(r, "gamma_f"));
    art.table("cloud_decay_hist_gamma_c", ensemble_histogram_table(r, "gamma_c"));

    const CavityParams cal = calibrate_cloud(c.cloud, c.cavity, c.c1);
    art.results()["calibration"] = {{"c_ref", cal.c_ref}, {"z_ref", cal.z_ref}, {"z_ev", *cal.z_ev}};
    art.results()["ensembles"] = nlohmann::json::array();
    for (const auto& s : r.stats) art.results()["ensembles"].push_back(to_json(s));

    const std::size_t k = nearest(r.k_scale, c.cavity.n_eff);
    const auto& gf = r.stats[k].at("gamma_f").stats;
    const auto& gc = r.stats[k].at("gamma_c").stats;
    std::string line = fmt::format("gamma_f = {} Γ0, gamma_c = {} Γ0", with_error(gf.mean(), gf.standard_error(), 3),
                                   with_error(gc.mean(), gc.standard_error(), 4));
    return line;
}

std::string run_spectrum(const RunConfig& c, Artifacts& art) {
    const std::vector<int> ns = c.spectrum.n_values.empty() ? std::vector<int>{c.cloud.n_atoms} : c.spectrum.n_values;
    struct Variant {
        std::string name;
        bool free_space;
        bool stochastic_off;
    };
    std::vector<Variant> variants{{"full", c.free_space, false}};
    if (c.spectrum.no_freespace_variant) variants.push_back({"no_freespace", false, false});
    if (c.spectrum.no_stochastic_variant) variants.push_back({"no_stochastic", c.free_space, true});

    CsvTable spectra;
    spectra.columns = {"n", "detuning"};
    for (const auto& v : variants) {
        spectra.columns.push_back("transmission_" + v.name);
        spectra.columns.push_back("extinction_" + v.name);
    }
    CsvTable fits;
    fits.columns = {"n", "variant", "center", "fwhm", "amplitude", "offset", "residual", "converged",
                    "degenerate", "accepted", "excluded"};
    CsvTable widths;
    widths.columns = {"n"};
    for (const auto& v : variants) widths.columns.push_back("fwhm_" + v.name);

    std::string headline;
    for (int n : ns) {
        const double half = c.spectrum.half_width.value_or(8.0 * (1.0 + n * c.c1));
        std::vector<SpectrumResult> results;
        for (const auto& v : variants) {
            SpectrumSpec spec;
            if (c.spectrum.geometry == SpectrumGeometry::cloud) {
                CloudParams cloud = c.cloud;
                cloud.n_atoms = n;
                spec.geometry = cloud;
            } else {
                ArrayParams array = c.array;
                array.n_sites = n;
                spec.geometry = array;
            }
            spec.cavity = c.cavity;
            spec.c1 = c.c1;
            spec.detunings = detuning_grid(half, c.spectrum.points);
            spec.trials = c.trials;
            spec.seed = c.seed;
            spec.free_space = v.free_space;
            spec.uniform_c = c.uniform_c;
            spec.poisson_n = c.cloud.poisson_n;
            spec.stochastic_off = v.stochastic_off;
            spec.probe = c.spectrum.probe;
            spec.workers = c.workers;
            results.push_back(compute_spectrum(spec));
        }
        const auto& grid = results.front().detunings;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            std::vector<std::string> row{format_number(static_cast<std::size_t>(n)), format_number(grid[k])};
            for (const auto& r : results) {
                row.push_back(format_number(r.transmission[k]));
                row.push_back(format_number(r.extinction[k]));
            }
            spectra.add_row(std::move(row));
        }
        std::vector<std::string> wrow{format_number(static_cast<std::size_t>(n))};
        for (std::size_t i = 0; i < variants.size(); ++i) {
            const SpectrumResult& r = results[i];
            const LorentzianFit& f = r.fit;
            std::size_t excluded = 0;
            for (const auto& [reason, count] : r.excluded) excluded += count;
            add_exclusions(art.exclusions(), r.excluded);
            fits.add_row({format_number(static_cast<std::size_t>(n)), variants[i].name, format_number(f.center),
                          format_number(f.fwhm), format_number(f.amplitude), format_number(f.offset),
                          format_number(f.residual), f.converged ? "1" : "0", f.degenerate ? "1" : "0",
                          format_number(r.accepted), format_number(excluded)});
            wrow.push_back(format_number(f.fwhm));
        }
        widths.add_row(std::move(wrow));
        const LorentzianFit& f = results.front().fit;
        headline = fmt::format("fwhm = {:.4f} Γ0 (N = {}{}{})", f.fwhm, n,
                               results.size() > 1 ? fmt::format(", {} = {:.4f} Γ0", variants[1].name, results[1].fit.fwhm) : "",
                               results.front().flagged() ? ", fit flagged" : "");
    }
    std::vector<std::string> plot;
    for (const auto& v : variants) plot.push_back("fwhm_" + v.name);
    art.table("spectrum", spectra);
    art.table("spectrum_fit", fits);
    art.table("spectrum_linewidth", widths, plot);
    return headline;
}

std::string run_array_map(const RunConfig& c, Artifacts& art) {
    ArrayMapSpec spec;
    spec.base = c.array;
    spec.cavity = c.cavity;
    spec.c1 = c.c1;
    spec.spacings = c.array_map.spacings;
    spec.n_effs = c.array_map.n_effs;
    const SweepGrid grid = sweep_array_map(spec);
    art.table("array_map", sweep_table(grid));
    const auto& gf = grid.get("gamma_f").mean;
    const std::size_t i = nearest(spec.spacings, c.array.spacing);
    const std::size_t j = nearest(spec.n_effs, c.cavity.n_eff);
    return fmt::format("gamma_f = {:.4f} Γ0 at d = {:g}, n_eff = {:g}; range [{:.4f}, {:.4f}] Γ0 over {} cells",
                       grid.value("gamma_f", i, j), spec.spacings[i], spec.n_effs[j],
                       *std::min_element(gf.begin(), gf.end()), *std::max_element(gf.begin(), gf.end()),
                       grid.cells());
}

std::string run_disorder(const RunConfig& c, Artifacts& art) {
    DisorderSpec spec;
    spec.base = c.array;
    spec.cavity = c.cavity;
    spec.c1 = c.c1;
    spec.axis = c.disorder.axis;
    spec.values = c.disorder.values;
    spec.targets = c.disorder.targets;
    spec.trials = c.trials;
    spec.seed = c.seed;
    spec.workers = c.workers;
    const SweepGrid grid = sweep_disorder(spec);
    std::vector<std::string> plot;
    for (const auto& s : grid.series) plot.push_back(s.name);
    art.table("disorder", sweep_table(grid), plot);
    for (const auto& s : grid.series) {
        std::size_t excl = 0;
        for (auto e : s.excluded) excl += e;
        art.exclusions()[s.name] = excl;
    }
    const auto& first = grid.series.front();
    return fmt::format("{} = {} → {} Γ0 over {} ∈ [{:g}, {:g}]", first.name,
                       with_error(first.mean.front(), first.standard_error.front(), 4),
                       with_error(first.mean.back(), first.standard_error.back(), 4), to_string(spec.axis),
                       spec.values.front(), spec.values.back());
}

std::string run_ring_vs_line(const RunConfig& c, Artifacts& art) {
    LineRingSpec spec;
    spec.n_values = c.ring_vs_line.n_values;
    spec.spacing = c.array.spacing;
    spec.z_height = c.array.z_height;
    spec.c1 = c.c1;
    spec.cavity = c.cavity;
    const SweepGrid grid = compare_line_ring(spec);
    art.table("ring_vs_line", sweep_table(grid), {"gamma_f_line", "gamma_f_ring"}, true);
    const std::size_t last = spec.n_values.size() - 1;
    return fmt::format("N = {}: gamma_f ring = {:.3e} Γ0, line = {:.3e} Γ0", spec.n_values[last],
                       grid.value("gamma_f_ring", last), grid.value("gamma_f_line", last));
}

std::string run_ratio_sweep(const RunConfig& c, Artifacts& art) {
    RatioSweepSpec spec;
    spec.cloud = c.cloud;
    spec.cavity = c.cavity;
    spec.c1 = c.c1;
    spec.n_values = c.ratio_sweep.n_values;
    spec.kinds = c.ratio_sweep.kinds;
    spec.trials = c.trials;
    spec.seed = c.seed;
    spec.uniform_c = c.uniform_c;
    spec.workers = c.workers;
    const SweepGrid grid = decay_ratio_sweep(spec);
    std::vector<std::string> plot;
    for (auto k : spec.kinds) plot.push_back(to_string(k) + "_gamma_c_over_gamma_f");
    art.table("ratio_sweep", sweep_table(grid), plot);
    const std::size_t last = spec.n_values.size() - 1;
    std::vector<std::string> parts;
    for (auto k : spec.kinds) {
        const auto& ratio = grid.get(to_string(k) + "_gamma_c_over_gamma_f");
        const auto& theta = grid.get(to_string(k) + "_theta");
        parts.push_back(fmt::format("{}: gamma_c/gamma_f = {}, theta = {}", to_string(k),
                                    with_error(ratio.mean[last], ratio.standard_error[last], 3),
                                    with_error(theta.mean[last], theta.standard_error[last], 3)));
    }
    return fmt::format("N = {} (N C1 = {:g}): {}", spec.n_values[last], spec.n_values[last] * c.c1,
                       fmt::join(parts, "; "));
}

std::string run_oracle(const RunConfig& c, Artifacts& art, bool& pass) {
    oracle::OracleCheckSpec spec;
    spec.instances = c.oracle.instances;
    spec.max_atoms = c.oracle.max_atoms;
    spec.cavity = calibrate_array(c.array, c.cavity, c.c1);
    spec.kappa_scale = c.oracle.kappa_scale;
    spec.t_end = c.oracle.t_end;
    spec.seed = c.seed;
    const oracle::OracleCheckResult r = oracle::run_oracle_check(spec);

    CsvTable t;
    t.columns = {"instance", "n_atoms", "eigen_vs_eliminated", "eliminated_vs_full", "eliminated_vs_full_scaled",
                 "pass"};
    for (std::size_t i = 0; i < r.base.size(); ++i) {
        t.add_row({format_number(i), format_number(r.base[i].n_atoms),
                   format_number(r.base[i].eigen_vs_eliminated.max()),
                   format_number(r.base[i].eliminated_vs_full.max()),
                   format_number(r.scaled[i].eliminated_vs_full.max()), r.base[i].pass() ? "1" : "0"});
    }
    art.table("oracle_check", t);
    pass = r.pass();
    art.results()["pass"] = pass;
    const double tol = oracle::ComparisonTolerances{}.eigen_vs_eliminated;
    return fmt::format("max deviation eigen/RK4 = {:.1e} (<{:.0e}), eliminated/full = {:.1e} (κ×{:g}: {:.1e}): {}",
                       r.max_eigen_deviation(), tol, r.max_full_deviation(), spec.kappa_scale,
                       r.max_full_deviation_scaled(), pass ? "PASS" : "FAIL");
}

}  // namespace

RunConfig resolve(const RunConfig& config) {
    RunConfig c = config;
    if (c.experiment == ExperimentKind::disorder && c.disorder.values.empty()) {
        std::vector<double> v;
        if (c.disorder.axis == DisorderAxis::delta_z) {
            const double top = 100.0 / c.calibration.lambda0_nm();
            for (int i = 0; i <= 10; ++i) v.push_back(top * i / 10.0);
        } else {
            for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
        }
        c.disorder.values = v;
    }
    // The headline numbers are quoted at the cavity's own n_eff, so a k scan
    // always contains it.
    auto& ks = c.cloud_decay.k_scan;
    if (c.experiment == ExperimentKind::cloud_decay && !ks.empty() &&
        std::none_of(ks.begin(), ks.end(), [&](double k) { return std::abs(k - c.cavity.n_eff) < 1e-12; })) {
        ks.insert(std::upper_bound(ks.begin(), ks.end(), c.cavity.n_eff), c.cavity.n_eff);
    }
    c.validate();
    return c;
}

RunOutcome run(const RunConfig& input) {
    const RunConfig c = resolve(input);
    const std::string stem = [&] {
        std::string s = to_string(c.experiment);
        std::replace(s.begin(), s.end(), '-', '_');
        return s;
    }();
    Artifacts art(c, stem);
    RunOutcome outcome;
    try {
        switch (c.experiment) {
            case ExperimentKind::cloud_decay: outcome.summary = run_cloud_decay(c, art); break;
            case ExperimentKind::spectrum: outcome.summary = run_spectrum(c, art); break;
            case ExperimentKind::array_map: outcome.summary = run_array_map(c, art); break;
            case ExperimentKind::disorder: outcome.summary = run_disorder(c, art); break;
            case ExperimentKind::ring_vs_line: outcome.summary = run_ring_vs_line(c, art); break;
            case ExperimentKind::ratio_sweep: outcome.summary = run_ratio_sweep(c, art); break;
            case ExperimentKind::oracle_check: outcome.summary = run_oracle(c, art, outcome.pass); break;
        }
    } catch (const std::exception& e) {
        try {
            art.finish(true, e.what());
        } catch (...) {
            // the original error is more useful than a failed flush
        }
        throw;
    }
    art.results()["summary"] = outcome.summary;
    art.finish(false);
    outcome.files = art.files();
    return outcome;
}

}  // namespace ringqed

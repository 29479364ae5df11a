#include "ringqed/io.hpp"

#include "ringqed/errors.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include <chrono>
#include <algorithm>
#include <cmath>
#include <fstream>

namespace ringqed {

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) {
        throw DimensionMismatch(fmt::format("csv: row has {} cells, expected {}", row.size(), columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::string out = fmt::format("{}\n", fmt::join(columns, ","));
    for (const auto& row : rows) out += fmt::format("{}\n", fmt::join(row, ","));
    return out;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

std::string format_number(std::size_t n) { return fmt::format("{}", n); }

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string content_hash(std::string_view content) {
    std::string blob = fmt::format("blob {}", content.size());
    blob.push_back('\0');
    blob.append(content);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(blob.data(), blob.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
        throw Error("content_hash: SHA-1 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string input_hash(const Sidecar& sidecar) {
    const nlohmann::json inputs = {
        {"experiment", sidecar.experiment}, {"config", sidecar.config}, {"seed", sidecar.seed}};
    return content_hash(inputs.dump());
}

nlohmann::json sidecar_json(const Sidecar& sidecar, const std::filesystem::path& dir) {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& p : sidecar.outputs) {
        nlohmann::json entry = {{"file", p.filename().string()}};
        const auto full = dir / p.filename();
        if (std::filesystem::exists(full)) {
            std::ifstream in(full, std::ios::binary);
            const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            entry["hash"] = content_hash(text);
        }
        outputs.push_back(std::move(entry));
    }
    const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    nlohmann::json j = {
        {"experiment", sidecar.experiment},
        {"config", sidecar.config},
        {"seed", sidecar.seed},
        {"input_hash", input_hash(sidecar)},
        {"exclusions", sidecar.exclusions},
        {"outputs", outputs},
        {"status", sidecar.partial ? "partial" : "complete"},
        {"timestamp", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now)},
    };
    if (!sidecar.extra.empty()) j["results"] = sidecar.extra;
    return j;
}

void write_sidecar(const Sidecar& sidecar, const std::filesystem::path& path) {
    write_text(path, sidecar_json(sidecar, path.parent_path()).dump(2) + "\n");
}

// ---------------------------------------------------------------------------

CsvTable ensemble_summary_table(const CloudEnsembleResult& result) {
    CsvTable t;
    t.columns = {"k_scale", "metric", "mean", "std_error", "std_dev", "min", "max", "count", "undefined",
                 "requested", "excluded"};
    for (std::size_t k = 0; k < result.k_scale.size(); ++k) {
        const EnsembleStats& s = result.stats[k];
        for (const auto& [name, m] : s.metrics) {
            t.add_row({format_number(result.k_scale[k]), name, format_number(m.stats.mean()),
                       format_number(m.stats.standard_error()), format_number(std::sqrt(m.stats.variance())),
                       format_number(m.stats.min()), format_number(m.stats.max()),
                       format_number(m.stats.count()), format_number(m.undefined),
                       format_number(s.requested), format_number(s.excluded_total())});
        }
    }
    return t;
}

CsvTable ensemble_histogram_table(const CloudEnsembleResult& result, const std::string& metric) {
    CsvTable t;
    t.columns = {"k_scale", "bin_center", "count"};
    for (std::size_t k = 0; k < result.k_scale.size(); ++k) {
        const auto it = result.stats[k].metrics.find(metric);
        if (it == result.stats[k].metrics.end() || !it->second.histogram) continue;
        const Histogram& h = *it->second.histogram;
        for (std::size_t b = 0; b < h.bins(); ++b) {
            t.add_row({format_number(result.k_scale[k]), format_number(h.bin_center(b)),
                       format_number(h.counts()[b])});
        }
    }
    return t;
}

CsvTable spectrum_table(const std::vector<std::pair<std::string, const SpectrumResult*>>& spectra) {
    if (spectra.empty()) throw InvalidArgument("spectrum table: no spectra");
    CsvTable t;
    t.columns = {"detuning"};
    for (const auto& [name, s] : spectra) {
        t.columns.push_back("transmission_" + name);
        t.columns.push_back("extinction_" + name);
    }
    const auto& grid = spectra.front().second->detunings;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<std::string> row{format_number(grid[k])};
        for (const auto& [name, s] : spectra) {
            row.push_back(format_number(s->transmission.at(k)));
            row.push_back(format_number(s->extinction.at(k)));
        }
        t.add_row(std::move(row));
    }
    return t;
}

CsvTable spectrum_fit_table(const std::vector<std::pair<std::string, const SpectrumResult*>>& spectra) {
    CsvTable t;
    t.columns = {"variant", "center", "fwhm", "amplitude", "offset", "residual", "converged", "degenerate",
                 "accepted", "excluded"};
    for (const auto& [name, s] : spectra) {
        std::size_t excluded = 0;
        for (const auto& [reason, n] : s->excluded) excluded += n;
        const LorentzianFit& f = s->fit;
        t.add_row({name, format_number(f.center), format_number(f.fwhm), format_number(f.amplitude),
                   format_number(f.offset), format_number(f.residual), f.converged ? "1" : "0",
                   f.degenerate ? "1" : "0", format_number(s->accepted), format_number(excluded)});
    }
    return t;
}

CsvTable sweep_table(const SweepGrid& grid) {
    CsvTable t;
    for (const auto& a : grid.axes) t.columns.push_back(a.name);
    for (const auto& s : grid.series) {
        t.columns.push_back(s.name);
        t.columns.push_back(s.name + "_se");
        t.columns.push_back(s.name + "_count");
        t.columns.push_back(s.name + "_excluded");
    }
    const std::size_t n = grid.cells();
    for (std::size_t cell = 0; cell < n; ++cell) {
        std::vector<std::string> row;
        std::size_t rem = cell;
        std::vector<std::size_t> idx(grid.axes.size());
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            idx[a] = rem % grid.axes[a].values.size();
            rem /= grid.axes[a].values.size();
        }
        for (std::size_t a = 0; a < grid.axes.size(); ++a) {
            row.push_back(format_number(grid.axes[a].values[idx[a]]));
        }
        for (const auto& s : grid.series) {
            row.push_back(format_number(s.mean[cell]));
            row.push_back(format_number(s.standard_error[cell]));
            row.push_back(format_number(s.count[cell]));
            row.push_back(format_number(s.excluded[cell]));
        }
        t.add_row(std::move(row));
    }
    return t;
}

std::string gnuplot_script(const std::filesystem::path& csv, const CsvTable& table,
                           const std::vector<std::string>& y_columns, bool log_y) {
    std::string out = "set datafile separator ','\nset key autotitle columnhead\n";
    out += fmt::format("set xlabel '{}'\n", table.columns.front());
    if (log_y) out += "set logscale y\n";
    std::vector<std::string> plots;
    for (const auto& y : y_columns) {
        const auto it = std::find(table.columns.begin(), table.columns.end(), y);
        if (it == table.columns.end()) throw InvalidArgument("gnuplot: no column '" + y + "'");
        const auto col = std::distance(table.columns.begin(), it) + 1;
        plots.push_back(fmt::format("'{}' using 1:{} with linespoints", csv.filename().string(), col));
    }
    out += fmt::format("plot {}\npause -1\n", fmt::join(plots, ", \\\n     "));
    return out;
}

nlohmann::json to_json(const LorentzianFit& fit) {
    return {{"center", fit.center},       {"fwhm", fit.fwhm},           {"amplitude", fit.amplitude},
            {"offset", fit.offset},       {"residual", fit.residual},   {"iterations", fit.iterations},
            {"converged", fit.converged}, {"degenerate", fit.degenerate}};
}

}  // namespace ringqed

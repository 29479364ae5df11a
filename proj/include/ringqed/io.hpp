// io.hpp — CSV tables, provenance sidecars and plot scripts.
#pragma once

#include "ringqed/experiments.hpp"
#include "ringqed/stats.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ringqed {

// Column-oriented table written as CSV. Cells are preformatted so that the
// output is byte-stable across runs and platforms.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string str() const;
};

// Shortest round-trip representation; "nan" for missing values.
std::string format_number(double x);
std::string format_number(std::size_t n);

void write_text(const std::filesystem::path& path, std::string_view text);

// Git blob hash: SHA-1 over "blob <size>\0" followed by the content.
std::string content_hash(std::string_view content);

struct Sidecar {
    std::string experiment;
    nlohmann::json config;  // fully resolved
    std::uint64_t seed = 0;
    nlohmann::json exclusions = nlohmann::json::object();
    std::vector<std::filesystem::path> outputs;
    bool partial = false;
    nlohmann::json extra = nlohmann::json::object();
};

// Hash of the inputs (resolved config + seed); independent of the timestamp.
std::string input_hash(const Sidecar& sidecar);

// Writes <stem>.json next to the outputs; the timestamp is the only
// run-dependent field.
nlohmann::json sidecar_json(const Sidecar& sidecar, const std::filesystem::path& dir);
void write_sidecar(const Sidecar& sidecar, const std::filesystem::path& path);

// Tables for the experiment results.
CsvTable ensemble_summary_table(const CloudEnsembleResult& result);
CsvTable ensemble_histogram_table(const CloudEnsembleResult& result, const std::string& metric);
CsvTable spectrum_table(const std::vector<std::pair<std::string, const SpectrumResult*>>& spectra);
CsvTable spectrum_fit_table(const std::vector<std::pair<std::string, const SpectrumResult*>>& spectra);
CsvTable sweep_table(const SweepGrid& grid);

// Minimal gnuplot script plotting columns of a CSV against its first column.
std::string gnuplot_script(const std::filesystem::path& csv, const CsvTable& table,
                           const std::vector<std::string>& y_columns, bool log_y = false);

nlohmann::json to_json(const LorentzianFit& fit);

}  // namespace ringqed

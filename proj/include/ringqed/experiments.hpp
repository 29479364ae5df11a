// experiments.hpp — Monte Carlo ensembles, spectra and parameter sweeps.
#pragma once

#include "ringqed/cavity.hpp"
#include "ringqed/dynamics.hpp"
#include "ringqed/free_space.hpp"
#include "ringqed/geometry.hpp"
#include "ringqed/lorentzian.hpp"
#include "ringqed/stats.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ringqed {

// ---------------------------------------------------------------------------
// Single realization

struct RealizationOptions {
    std::optional<double> uniform_c;  // override every atom's cooperativity
    bool free_space = true;           // false: independent emitters only
    double delta_a = 0.0;
    std::optional<double> k_scale;  // phase wavenumber k_wg/k0 overriding n_eff (k scans)
};

// Matrices and eigensystem for one atom configuration.
struct Realization {
    AtomConfig config;
    CavityMatrix cavity;
    FreeSpaceMatrix free;
    CouplingMatrix coupling;
    EigenSystem eig;
    CVector drive;
};

Realization assemble(AtomConfig config, const CavityParams& cavity,
                     const RealizationOptions& options = {});

// TDS or SS excitation, normalized to ‖σ‖ = eps.
ExcitationState excite(const Realization& r, ExcitationKind kind, double eps = 0.01);

// Cooperativity calibration. For clouds, z_ref is the mean height and c_ref
// is chosen so that the mean single-atom cooperativity over the truncated
// Gaussian height distribution equals c1. For arrays, z_ref is the trap
// height and c_ref = c1. Both fix z_ev to its resolved value.
CavityParams calibrate_cloud(const CloudParams& cloud, CavityParams cavity, double c1);
CavityParams calibrate_array(const ArrayParams& array, CavityParams cavity, double c1);

// Mean of e^{-2(z - z_ref)/z_ev} over N(mean, sigma²) truncated to z > kMinHeight.
double mean_relative_cooperativity(double mean, double sigma, double z_ref, double z_ev);

// ---------------------------------------------------------------------------
// Cloud ensembles

struct CloudEnsembleSpec {
    CloudParams cloud;
    CavityParams cavity;
    double c1 = 0.05;
    ExcitationKind excitation = ExcitationKind::tds;
    std::vector<double> k_scan;  // k_wg/k0 values for the phases; empty: cavity.n_eff only
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    bool uniform_c = false;
    double delta_a = 0.0;
    unsigned workers = 0;
    std::size_t histogram_bins = 60;
};

struct CloudEnsembleResult {
    std::vector<double> k_scale;
    std::vector<EnsembleStats> stats;  // one per n_eff
};

CloudEnsembleResult run_cloud_ensemble(const CloudEnsembleSpec& spec);

// ---------------------------------------------------------------------------
// Transmission spectra

enum class ProbeMode {
    cavity_locked,  // Δ_C fixed at the configured value, probe sweeps Δ_A
    co_moving,      // ω_A = ω_C: Δ_A and Δ_C both follow the probe
};

struct SpectrumSpec {
    std::variant<CloudParams, ArrayParams> geometry;
    CavityParams cavity;
    double c1 = 0.05;
    std::vector<double> detunings;
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    bool free_space = true;
    bool uniform_c = false;
    bool poisson_n = false;
    // Fixed N, uniform C and no height spread (x-y randomness kept).
    bool stochastic_off = false;
    ProbeMode probe = ProbeMode::cavity_locked;
    unsigned workers = 0;
};

struct SpectrumResult {
    std::vector<double> detunings;
    std::vector<double> transmission;  // ensemble mean |t|²
    std::vector<double> extinction;    // 1 - |t|²
    LorentzianFit fit;                 // fitted to the extinction
    std::size_t accepted = 0;
    std::map<std::string, std::size_t> excluded;
    bool flagged() const { return !fit.converged || fit.degenerate; }
};

SpectrumResult compute_spectrum(const SpectrumSpec& spec);

// Symmetric grid of `points` detunings spanning ±half_width.
std::vector<double> detuning_grid(double half_width, std::size_t points);

// ---------------------------------------------------------------------------
// Sweeps

// Named series over one or two axes, stored row-major (first axis slowest).
struct SweepGrid {
    struct Axis {
        std::string name;
        std::vector<double> values;
    };
    struct Series {
        std::string name;
        std::vector<double> mean;
        std::vector<double> standard_error;
        std::vector<std::size_t> count;
        std::vector<std::size_t> excluded;
    };

    std::vector<Axis> axes;
    std::deque<Series> series;  // deque: references from add_series stay valid

    std::size_t cells() const;
    Series& add_series(const std::string& name);
    const Series& get(const std::string& name) const;
    double value(const std::string& name, std::size_t i, std::size_t j = 0) const;
};

struct ArrayMapSpec {
    ArrayParams base;  // perfect line array (filling 1, δz 0)
    CavityParams cavity;
    double c1 = 0.05;
    std::vector<double> spacings;
    std::vector<double> n_effs;
};

// γ_f of the TDS of a perfect array over (d, n_eff).
SweepGrid sweep_array_map(const ArrayMapSpec& spec);

enum class DisorderAxis { delta_z, filling };

struct DisorderSpec {
    ArrayParams base;
    CavityParams cavity;
    double c1 = 0.05;
    DisorderAxis axis = DisorderAxis::delta_z;
    std::vector<double> values;
    std::vector<int> targets{20, 40};
    std::size_t trials = 200;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

// Ensemble-mean TDS γ_f with height-dependent C ("zdep") and with the
// uniform-C override ("uniform"); one series pair per target atom number.
SweepGrid sweep_disorder(const DisorderSpec& spec);

struct LineRingSpec {
    std::vector<int> n_values;
    double spacing = 0.3;
    double z_height = 330.0 / 852.0;
    double c1 = 0.05;
    CavityParams cavity;
};

SweepGrid compare_line_ring(const LineRingSpec& spec);

struct RatioSweepSpec {
    CloudParams cloud;
    CavityParams cavity;
    double c1 = 0.05;
    std::vector<int> n_values;
    std::vector<ExcitationKind> kinds{ExcitationKind::tds, ExcitationKind::ss};
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    bool uniform_c = true;
    unsigned workers = 0;
};

// Ensemble means of γ_c/γ_f, Γ_c/Γ_f and θ versus N for each excitation.
SweepGrid decay_ratio_sweep(const RatioSweepSpec& spec);

std::string to_string(ExcitationKind kind);
ExcitationKind excitation_from_string(const std::string& name);
std::string to_string(ProbeMode mode);
ProbeMode probe_mode_from_string(const std::string& name);
std::string to_string(DisorderAxis axis);
DisorderAxis disorder_axis_from_string(const std::string& name);

}  // namespace ringqed

// oracle.hpp — brute-force density-matrix propagators used to validate the
// eigenmode fast path and the adiabatic elimination of the cavity.
//
// Eliminated model basis: {|g⟩, |e_1⟩ … |e_N⟩}.
// Full model basis:       {|g,0⟩, |e_1,0⟩ … |e_N,0⟩, |g,1⟩} (Fock cutoff 1).
// Both are integrated with fixed-step RK4.
#pragma once

#include "ringqed/cavity.hpp"
#include "ringqed/dynamics.hpp"
#include "ringqed/free_space.hpp"
#include "ringqed/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ringqed::oracle {

struct DensityMatrix {
    CMatrix rho;

    Eigen::Index dim() const { return rho.rows(); }
    double trace() const { return rho.trace().real(); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double purity() const { return (rho * rho).trace().real(); }
    double min_eigenvalue() const;
};

// |ψ⟩ = sqrt(1 - ‖σ‖²)|g⟩ + Σ σ_j |e_j⟩, optionally with an empty cavity
// level appended.
DensityMatrix pure_state(const CVector& sigma, bool with_cavity_level = false);

// Full-model state with the cavity amplitude already slaved to the atoms,
// α = u†σ/κ̃ (the state adiabatic elimination assumes), so no loading
// transient of the empty mode appears.
DensityMatrix dressed_state(const CVector& sigma, const CavityMatrix& cavity);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> excitation;  // Σ_j ρ_{e_j e_j}
    std::vector<double> rate_c;      // photons/time into the cavity channel (κ_i + κ_e)
    std::vector<double> rate_f;      // photons/time into free space
    std::vector<double> rate_c_intrinsic;  // κ_i share (full model only)
    std::vector<double> rate_c_external;   // κ_e share (full model only)
    std::vector<double> photons;           // ⟨a†a⟩ (full model only)
    std::vector<cplx> field;               // ⟨a⟩ (full model only)
    std::vector<CVector> sigma;            // ⟨σ_j^-⟩
    std::vector<double> trace;
    DensityMatrix final_state;
};

struct StepControl {
    std::optional<double> dt;  // default: 0.01 / max |generator entry|
    double t_end = 5.0;
    std::size_t record_every = 1;
};

Trajectory propagate_eliminated(const CavityMatrix& cavity, const FreeSpaceMatrix& free,
                                const CVector& drive, double delta_a, const DensityMatrix& rho0,
                                const StepControl& control);

Trajectory propagate_full_cavity(const CavityMatrix& cavity, const CavityParams& params,
                                 const FreeSpaceMatrix& free, double eta, double delta_a,
                                 const DensityMatrix& rho0, const StepControl& control);

struct ComparisonTolerances {
    double eigen_vs_eliminated = 1e-6;
    double eliminated_vs_full = 0.03;
};

struct ComparisonSpec {
    AtomConfig config;
    CavityParams cavity;
    std::optional<double> uniform_c;
    bool free_space = true;
    double t_end = 5.0;
    std::size_t samples = 200;
    ComparisonTolerances tolerances;
};

// Sup-norm deviations normalized by the sup of the reference curve.
struct Deviation {
    double excitation = 0.0;
    double rate_c = 0.0;
    double rate_f = 0.0;
    double max() const { return std::max({excitation, rate_c, rate_f}); }
};

struct ComparisonReport {
    std::size_t n_atoms = 0;
    Deviation eigen_vs_eliminated;
    Deviation eliminated_vs_full;  // over t ≥ 5/κ
    bool eigen_pass = false;
    bool full_pass = false;
    bool pass() const { return eigen_pass && full_pass; }
};

ComparisonReport compare_models(const ComparisonSpec& spec);

// Random non-pathological instance: 1..max_atoms atoms in a cube of side
// `box` above the surface, pairwise separation at least `min_separation`.
AtomConfig random_instance(std::uint64_t seed, int max_atoms, double box = 1.5,
                           double min_separation = 0.2);

struct OracleCheckSpec {
    std::size_t instances = 20;
    int max_atoms = 4;
    CavityParams cavity;        // z_ref/c_ref as configured
    double kappa_scale = 10.0;  // second pass with κ_i, κ_e multiplied by this
    double t_end = 5.0;
    std::uint64_t seed = 1;
};

struct OracleCheckResult {
    std::vector<ComparisonReport> base;    // configured κ
    std::vector<ComparisonReport> scaled;  // κ × kappa_scale
    double max_eigen_deviation() const;
    double max_full_deviation() const;
    double max_full_deviation_scaled() const;
    bool pass() const;  // all base reports pass and the scaled deviation is smaller
};

OracleCheckResult run_oracle_check(const OracleCheckSpec& spec);

}  // namespace ringqed::oracle

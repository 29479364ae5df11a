// cavity.hpp — adiabatically eliminated microring coupling.
//
// Each atom couples to a single running-wave WGM with strength g_j and
// phase φ_j = k_wg s_j. After eliminating the cavity field the atoms see
//   G_c[i][j] = g_i g_j e^{-i(φ_i - φ_j)} / κ̃,   κ̃ = Δ_C + i(κ_i + κ_e)/2,
// a rank-one matrix, and a drive Ω_j = -g_j e^{-iφ_j} η / κ̃.
#pragma once

#include "ringqed/geometry.hpp"
#include "ringqed/units.hpp"

#include <optional>

namespace ringqed {

struct CavityParams {
    double kappa_i = 100.0;
    double kappa_e = 100.0;
    double delta_c = 0.0;
    double n_eff = 1.69;
    double c_ref = 0.05;                 // single-atom cooperativity at z_ref
    double z_ref = 330.0 / 852.0;
    std::optional<double> z_ev;          // evanescent decay length of g
    double eta = 1.0;                    // classical bus drive rate

    void validate() const;

    double kappa_total() const { return kappa_i + kappa_e; }
    cplx kappa_tilde() const { return {delta_c, kappa_total() / 2.0}; }
    double k_wg() const { return n_eff * UnitSystem::k0; }
    double g_ref() const;
    // Explicit z_ev, or the guided-mode tail length for n_eff.
    double evanescent_length() const;
};

// λ0 / (2π sqrt(n_eff² - 1)).
double default_evanescent_length(double n_eff);

double coupling_at(double z, const CavityParams& params);

double cooperativity(double g, const CavityParams& params);

struct CavityMatrix {
    CMatrix matrix;
    cplx kappa_tilde;
    RVector couplings;        // g_j
    RVector phases;           // φ_j
    RVector cooperativities;  // C_j

    Eigen::Index size() const { return matrix.rows(); }
    // u_j = g_j e^{-iφ_j}; G_c = u u† / κ̃.
    CVector mode_vector() const;
};

// Cavity phases φ_j. On closed loops the wavenumber is rounded to the
// nearest resonant azimuthal order m = round(n_eff L / λ0).
RVector cavity_phases(const AtomConfig& config, double n_eff);

CavityMatrix build_cavity_matrix(const AtomConfig& config, const CavityParams& params,
                                 std::optional<double> uniform_c = std::nullopt);

// Same couplings and phases, different cavity detuning.
CavityMatrix with_cavity_detuning(const CavityMatrix& cavity, const CavityParams& params,
                                  double delta_c);

CVector drive_vector(const CavityMatrix& cavity, double eta);

CVector drive_vector(const AtomConfig& config, const CavityParams& params,
                     std::optional<double> uniform_c = std::nullopt);

// Steady cavity amplitude ⟨a⟩ = (Σ g_j e^{iφ_j} σ_j + η) / κ̃.
cplx cavity_field(const CVector& sigma, const CavityMatrix& cavity, double eta);

// Bus-waveguide amplitude transmission t = 1 - iκ_e⟨a⟩/η. The empty,
// critically coupled ring has t = 0 on resonance.
cplx bus_transmission(const CVector& sigma_ss, const CavityMatrix& cavity,
                      const CavityParams& params);

}  // namespace ringqed

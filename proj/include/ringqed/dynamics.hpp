// dynamics.hpp — linear-response dynamics in the single-excitation limit.
//
// The coherences σ_j = ⟨σ_j^-⟩ obey σ̇ = iMσ + iΩ with
// M = Δ_A·1 - G_c - G_f. M is neither Hermitian nor complex symmetric, so
// it is diagonalized with paired left and right eigenvectors normalized to
// L_αᵀ R_β = δ_αβ. An eigenvalue λ_α of M decays as e^{iλ_α t}, i.e. with
// total rate Γ_α = 2 Im λ_α and frequency shift J_α = -Re λ_α.
#pragma once

#include "ringqed/cavity.hpp"
#include "ringqed/free_space.hpp"
#include "ringqed/units.hpp"

#include <optional>
#include <vector>

namespace ringqed {

struct CouplingMatrix {
    CMatrix matrix;
    double delta_a = 0.0;
};

CouplingMatrix build_coupling(double delta_a, const CavityMatrix& cavity,
                              const FreeSpaceMatrix& free);

struct EigenSystem {
    CVector lambdas;
    CMatrix right;  // columns R_α, unit norm
    CMatrix left;   // columns L_α with L_αᵀ R_β = δ_αβ

    Eigen::Index size() const { return lambdas.size(); }
    RVector decay_rates() const { return 2.0 * lambdas.imag(); }
    // max |LᵀR - 1|
    double biorthogonality_error() const;
    // max over α of |M R_α - λ_α R_α| and |L_αᵀ M - λ_α L_αᵀ|, relative to ‖M‖.
    double residual(const CMatrix& m) const;
};

EigenSystem eigendecompose(const CMatrix& m);

enum class ExcitationKind { tds, ss, custom };

struct ExcitationState {
    CVector sigma;
    CVector weights;
    ExcitationKind kind = ExcitationKind::custom;

    double excitation() const { return sigma.squaredNorm(); }
};

// Expansion coefficients of an arbitrary state: w_α = L_αᵀ σ.
CVector mode_weights(const EigenSystem& eig, const CVector& sigma);

// Steady-state weights w_α = -(L_αᵀ Ω) / (λ_α + Δ_A), where λ_α are the
// eigenvalues of the decomposed matrix and delta_a an additional uniform
// atomic detuning. The resulting σ solves (M + Δ_A) σ = -Ω.
CVector weights_ss(const EigenSystem& eig, const CVector& omega, double delta_a = 0.0);

// Timed-Dicke weights: σ_TDS = eps·Ω/‖Ω‖ expanded in the eigenbasis.
CVector weights_tds(const EigenSystem& eig, const CVector& omega, double eps = 0.01);

ExcitationState steady_state(const EigenSystem& eig, const CVector& omega, double delta_a = 0.0);
ExcitationState timed_dicke_state(const EigenSystem& eig, const CVector& omega, double eps = 0.01);

// Dense LU solution of Mσ = -Ω.
CVector steady_state_direct(const CMatrix& m, const CVector& omega);

ExcitationState evolve(const EigenSystem& eig, const ExcitationState& state, double t);

struct EmissionRates {
    double cavity = 0.0;      // R_c
    double free_space = 0.0;  // R_f
    double total() const { return cavity + free_space; }
};

// R_c = σ† i(G_c - G_c†) σ and R_f = σ† i(G_f - G_f†) σ; at Δ_C = 0 these
// reduce to 2iσ†G_cσ and -2σ†Im{G_f}σ.
EmissionRates emission_rates(const CVector& sigma, const CavityMatrix& cavity,
                             const FreeSpaceMatrix& free);

struct DecayMetrics {
    double excitation = 0.0;  // e(0)
    EmissionRates rates;      // R_c(0), R_f(0)
    double d_rate_c = 0.0;    // Ṙ_c(0)
    double d_rate_f = 0.0;    // Ṙ_f(0)

    std::optional<double> gamma_f;    // R_f / e
    std::optional<double> gamma_c;    // R_c / e
    std::optional<double> Gamma_f;    // -Ṙ_f / R
    std::optional<double> Gamma_c;    // -Ṙ_c / R
    std::optional<double> Gamma_exp;  // -Ṙ_c / R_c
    std::optional<double> theta;      // (Ṙ_c/R_c) / (Ṙ_f/R_f)
};

// Initial-time decay metrics of σ0 evolving under σ̇ = iMσ. Derivatives are
// analytic; metrics whose denominators vanish are left empty.
DecayMetrics decay_metrics(const CVector& sigma0, const CouplingMatrix& m,
                           const CavityMatrix& cavity, const FreeSpaceMatrix& free);

struct EmissionRecord {
    std::vector<double> times;
    std::vector<double> rate_c;
    std::vector<double> rate_f;
    std::vector<double> excitation;
    DecayMetrics metrics;
    CVector eigenvalues;
};

// 200 log-spaced points on [1e-3, 50]/Γ0.
std::vector<double> default_time_grid(std::size_t points = 200, double t_min = 1e-3,
                                      double t_max = 50.0);

EmissionRecord emission_record(const EigenSystem& eig, const ExcitationState& state0,
                               const CouplingMatrix& m, const CavityMatrix& cavity,
                               const FreeSpaceMatrix& free, const std::vector<double>& times);

// ∫_0^∞ R(t) dt evaluated mode by mode; equals e(0) for a passive system.
double photon_budget(const EigenSystem& eig, const ExcitationState& state0,
                     const CavityMatrix& cavity, const FreeSpaceMatrix& free);

}  // namespace ringqed

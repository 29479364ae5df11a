#include "ringqed/cavity.hpp"

#include "ringqed/errors.hpp"

#include <cmath>

namespace ringqed {

void CavityParams::validate() const {
    if (!(kappa_i > 0) || !(kappa_e > 0)) {
        throw InvalidArgument("cavity: kappa_i and kappa_e must be positive");
    }
    if (!(n_eff >= 1.0)) throw InvalidArgument("cavity: n_eff must be at least 1");
    if (z_ev && !(*z_ev > 0)) throw InvalidArgument("cavity: z_ev must be positive");
    if (c_ref < 0) throw InvalidArgument("cavity: c_ref must be non-negative");
    if (!std::isfinite(delta_c) || !std::isfinite(eta)) {
        throw InvalidArgument("cavity: non-finite detuning or drive");
    }
}

double CavityParams::g_ref() const {
    return std::sqrt(c_ref * kappa_total() * UnitSystem::gamma0 / 4.0);
}

double default_evanescent_length(double n_eff) {
    if (!(n_eff > 1.0)) {
        throw InvalidArgument("evanescent length undefined for n_eff <= 1; set z_ev explicitly");
    }
    return UnitSystem::lambda0 / (2.0 * std::numbers::pi * std::sqrt(n_eff * n_eff - 1.0));
}

double CavityParams::evanescent_length() const {
    return z_ev ? *z_ev : default_evanescent_length(n_eff);
}

double coupling_at(double z, const CavityParams& params) {
    if (!(z > 0)) throw InvalidArgument("coupling_at: height must be positive");
    return params.g_ref() * std::exp(-(z - params.z_ref) / params.evanescent_length());
}

double cooperativity(double g, const CavityParams& params) {
    if (g < 0) throw InvalidArgument("cooperativity: g must be non-negative");
    return 4.0 * g * g / (params.kappa_total() * UnitSystem::gamma0);
}

CVector CavityMatrix::mode_vector() const {
    CVector u(couplings.size());
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        u(j) = couplings(j) * std::exp(-kI * phases(j));
    }
    return u;
}

RVector cavity_phases(const AtomConfig& config, double n_eff) {
    double k = n_eff * UnitSystem::k0;
    if (config.loop_length) {
        const double loop = *config.loop_length;
        const double order = std::round(n_eff * loop / UnitSystem::lambda0);
        k = 2.0 * std::numbers::pi * order / loop;
    }
    RVector phases(static_cast<Eigen::Index>(config.size()));
    for (std::size_t j = 0; j < config.size(); ++j) {
        phases(static_cast<Eigen::Index>(j)) = k * config.path[j];
    }
    return phases;
}

namespace {

CMatrix rank_one(const CVector& u, cplx kappa_tilde) {
    return (u * u.adjoint()) / kappa_tilde;
}

}  // namespace

CavityMatrix build_cavity_matrix(const AtomConfig& config, const CavityParams& params,
                                 std::optional<double> uniform_c) {
    params.validate();
    if (config.size() == 0) throw InvalidArgument("cavity: empty atom configuration");
    const auto n = static_cast<Eigen::Index>(config.size());

    CavityMatrix out;
    out.kappa_tilde = params.kappa_tilde();
    out.couplings.resize(n);
    out.cooperativities.resize(n);
    const double g_uniform =
        uniform_c ? std::sqrt(*uniform_c * params.kappa_total() * UnitSystem::gamma0 / 4.0) : 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double g = uniform_c ? g_uniform : coupling_at(config.positions[j].z(), params);
        out.couplings(j) = g;
        out.cooperativities(j) = cooperativity(g, params);
    }
    out.phases = cavity_phases(config, params.n_eff);
    out.matrix = rank_one(out.mode_vector(), out.kappa_tilde);
    return out;
}

CavityMatrix with_cavity_detuning(const CavityMatrix& cavity, const CavityParams& params,
                                  double delta_c) {
    CavityMatrix out = cavity;
    out.kappa_tilde = cplx(delta_c, params.kappa_total() / 2.0);
    out.matrix = rank_one(out.mode_vector(), out.kappa_tilde);
    return out;
}

CVector drive_vector(const CavityMatrix& cavity, double eta) {
    return -(eta / cavity.kappa_tilde) * cavity.mode_vector();
}

CVector drive_vector(const AtomConfig& config, const CavityParams& params,
                     std::optional<double> uniform_c) {
    return drive_vector(build_cavity_matrix(config, params, uniform_c), params.eta);
}

cplx cavity_field(const CVector& sigma, const CavityMatrix& cavity, double eta) {
    if (sigma.size() != cavity.size()) throw DimensionMismatch("cavity_field: size mismatch");
    // Σ g_j e^{iφ_j} σ_j = u† σ
    const cplx emitted = cavity.mode_vector().dot(sigma);
    return (emitted + eta) / cavity.kappa_tilde;
}

cplx bus_transmission(const CVector& sigma_ss, const CavityMatrix& cavity,
                      const CavityParams& params) {
    if (params.eta == 0.0) throw UndefinedTransmission("bus_transmission: drive rate eta is zero");
    const cplx field = cavity_field(sigma_ss, cavity, params.eta);
    return 1.0 - kI * params.kappa_e * field / params.eta;
}

}  // namespace ringqed

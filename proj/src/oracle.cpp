#include "ringqed/oracle.hpp"

#include "ringqed/errors.hpp"
#include "ringqed/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace ringqed::oracle {

double DensityMatrix::min_eigenvalue() const {
    const CMatrix h = (rho + rho.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix pure_state(const CVector& sigma, bool with_cavity_level) {
    const double excited = sigma.squaredNorm();
    if (excited > 1.0 + 1e-12) throw InvalidArgument("pure_state: ‖σ‖ exceeds 1");
    const Eigen::Index n = sigma.size();
    CVector psi = CVector::Zero(n + 1 + (with_cavity_level ? 1 : 0));
    psi(0) = std::sqrt(std::max(0.0, 1.0 - excited));
    psi.segment(1, n) = sigma;
    return {psi * psi.adjoint()};
}

DensityMatrix dressed_state(const CVector& sigma, const CavityMatrix& cavity) {
    const cplx alpha = cavity_field(sigma, cavity, 0.0);
    const double excited = sigma.squaredNorm() + std::norm(alpha);
    if (excited > 1.0 + 1e-12) throw InvalidArgument("dressed_state: excitation exceeds 1");
    const Eigen::Index n = sigma.size();
    CVector psi(n + 2);
    psi(0) = std::sqrt(std::max(0.0, 1.0 - excited));
    psi.segment(1, n) = sigma;
    psi(n + 1) = alpha;
    return {psi * psi.adjoint()};
}

namespace {

// Generator of dρ/dt = -i(Hρ - ρH†) + |g⟩⟨g| tr(K ρ_block) + |g⟩⟨g| κ ρ_cc.
struct Liouvillian {
    CMatrix h;             // non-Hermitian effective Hamiltonian
    CMatrix atom_loss;     // K over the excited block (indices 1..N)
    double cavity_loss = 0.0;
    Eigen::Index n_atoms = 0;
    bool has_cavity = false;

    CMatrix operator()(const CMatrix& rho) const {
        CMatrix d = -kI * (h * rho - rho * h.adjoint());
        cplx feed = (atom_loss.cwiseProduct(rho.block(1, 1, n_atoms, n_atoms).transpose())).sum();
        if (has_cavity) feed += cavity_loss * rho(n_atoms + 1, n_atoms + 1);
        d(0, 0) += feed;
        return d;
    }

    double max_entry() const { return h.cwiseAbs().maxCoeff(); }
};

CMatrix loss_operator(const CMatrix& g) {
    return kI * (g - g.adjoint());
}

double channel_rate(const CMatrix& k, const CMatrix& rho, Eigen::Index n) {
    // tr(K ρ_ee)
    return (k * rho.block(1, 1, n, n)).trace().real();
}

Trajectory integrate(const Liouvillian& gen, const DensityMatrix& rho0, const StepControl& control,
                     const CMatrix& cavity_k, const CMatrix& free_k, double kappa_i,
                     double kappa_e) {
    if (rho0.dim() != gen.h.rows()) {
        throw DimensionMismatch("oracle: initial density matrix has the wrong dimension");
    }
    if (!(control.t_end >= 0)) throw InvalidArgument("oracle: t_end must be non-negative");
    const Eigen::Index n = gen.n_atoms;
    double dt = control.dt ? *control.dt : 0.01 / std::max(gen.max_entry(), 1e-12);
    const auto steps = static_cast<std::size_t>(std::ceil(control.t_end / dt - 1e-9));
    dt = steps > 0 ? control.t_end / static_cast<double>(steps) : 0.0;
    const std::size_t every = std::max<std::size_t>(1, control.record_every);

    Trajectory traj;
    CMatrix rho = rho0.rho;
    const double trace0 = rho.trace().real();

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.excitation.push_back(rho.block(1, 1, n, n).trace().real());
        traj.rate_f.push_back(channel_rate(free_k, rho, n));
        traj.sigma.push_back(rho.block(1, 0, n, 1));
        traj.trace.push_back(rho.trace().real());
        if (gen.has_cavity) {
            const double photons = rho(n + 1, n + 1).real();
            traj.photons.push_back(photons);
            traj.field.push_back(rho(n + 1, 0));
            traj.rate_c_intrinsic.push_back(kappa_i * photons);
            traj.rate_c_external.push_back(kappa_e * photons);
            traj.rate_c.push_back((kappa_i + kappa_e) * photons);
        } else {
            traj.rate_c.push_back(channel_rate(cavity_k, rho, n));
        }
    };

    record(0.0);
    for (std::size_t step = 1; step <= steps; ++step) {
        const CMatrix k1 = gen(rho);
        const CMatrix k2 = gen(rho + (dt / 2.0) * k1);
        const CMatrix k3 = gen(rho + (dt / 2.0) * k2);
        const CMatrix k4 = gen(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double drift = std::abs(rho.trace().real() - trace0);
        if (!rho.allFinite() || drift > 1e-6) {
            throw StepSizeError("oracle: trace drift exceeds 1e-6; reduce the time step");
        }
        if (step % every == 0 || step == steps) record(static_cast<double>(step) * dt);
    }
    traj.final_state = DensityMatrix{rho};
    return traj;
}

}  // namespace

Trajectory propagate_eliminated(const CavityMatrix& cavity, const FreeSpaceMatrix& free,
                                const CVector& drive, double delta_a, const DensityMatrix& rho0,
                                const StepControl& control) {
    const Eigen::Index n = cavity.size();
    if (free.size() != n || drive.size() != n) {
        throw DimensionMismatch("propagate_eliminated: inconsistent sizes");
    }
    const CouplingMatrix m = build_coupling(delta_a, cavity, free);

    Liouvillian gen;
    gen.n_atoms = n;
    gen.h = CMatrix::Zero(n + 1, n + 1);
    gen.h.block(1, 1, n, n) = -m.matrix;
    // Drive normalized so that the coherences obey σ̇ = iMσ + iΩ.
    gen.h.block(1, 0, n, 1) = -drive;
    gen.h.block(0, 1, 1, n) = -drive.adjoint();
    const CMatrix cavity_k = loss_operator(cavity.matrix);
    const CMatrix free_k = loss_operator(free.matrix);
    gen.atom_loss = cavity_k + free_k;
    return integrate(gen, rho0, control, cavity_k, free_k, 0.0, 0.0);
}

Trajectory propagate_full_cavity(const CavityMatrix& cavity, const CavityParams& params,
                                 const FreeSpaceMatrix& free, double eta, double delta_a,
                                 const DensityMatrix& rho0, const StepControl& control) {
    params.validate();
    const Eigen::Index n = cavity.size();
    if (free.size() != n) throw DimensionMismatch("propagate_full_cavity: inconsistent sizes");
    const Eigen::Index c = n + 1;
    const double kappa = params.kappa_total();

    Liouvillian gen;
    gen.n_atoms = n;
    gen.has_cavity = true;
    gen.cavity_loss = kappa;
    gen.h = CMatrix::Zero(n + 2, n + 2);
    // Atoms: -Δ_A, coherent exchange J = Re G_f, free-space loss -iΓ/2.
    gen.h.block(1, 1, n, n) = free.matrix;
    gen.h.block(1, 1, n, n).diagonal().array() -= delta_a;
    // Cavity mode: -Δ_C with loss -iκ/2.
    gen.h(c, c) = cplx(-params.delta_c, -kappa / 2.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        const cplx coupling = cavity.couplings(j) * std::exp(-kI * cavity.phases(j));
        gen.h(1 + j, c) = coupling;
        gen.h(c, 1 + j) = std::conj(coupling);
    }
    gen.h(0, c) = eta;
    gen.h(c, 0) = eta;
    const CMatrix free_k = loss_operator(free.matrix);
    gen.atom_loss = free_k;
    return integrate(gen, rho0, control, CMatrix::Zero(n, n), free_k, params.kappa_i,
                     params.kappa_e);
}

namespace {

double sup_deviation(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& times, double t_from) {
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (times[k] < t_from) continue;
        worst = std::max(worst, std::abs(a[k] - b[k]));
        scale = std::max(scale, std::abs(b[k]));
    }
    return scale > 0 ? worst / scale : worst;
}

}  // namespace

ComparisonReport compare_models(const ComparisonSpec& spec) {
    const std::size_t n = spec.config.size();
    if (n < 1 || n > 6) throw InvalidArgument("compare_models: requires 1 <= N <= 6");
    const CavityMatrix cavity = build_cavity_matrix(spec.config, spec.cavity, spec.uniform_c);
    const FreeSpaceMatrix free = spec.free_space
                                     ? build_free_matrix(spec.config)
                                     : independent_emitters(static_cast<Eigen::Index>(n));
    const CouplingMatrix m = build_coupling(0.0, cavity, free);
    const EigenSystem eig = eigendecompose(m.matrix);
    // Decay of a timed-Dicke excitation with the drive switched off.
    const ExcitationState state0 = timed_dicke_state(eig, drive_vector(cavity, 1.0), 0.1);

    const std::size_t samples = std::max<std::size_t>(spec.samples, 2);
    const double sample_dt = spec.t_end / static_cast<double>(samples);

    // Full-model generator has |entries| up to κ/2; choose its step so that
    // output samples land on the same grid.
    const double kappa = spec.cavity.kappa_total();
    auto control_for = [&](double max_entry) {
        StepControl c;
        c.t_end = spec.t_end;
        const double target = 0.01 / max_entry;
        const auto per_sample = static_cast<std::size_t>(std::ceil(sample_dt / target));
        c.dt = sample_dt / static_cast<double>(per_sample);
        c.record_every = per_sample;
        return c;
    };
    const double elim_entry = std::max(m.matrix.cwiseAbs().maxCoeff(), 1e-12);
    const double full_entry =
        std::max({free.matrix.cwiseAbs().maxCoeff(), kappa / 2.0, cavity.couplings.maxCoeff(),
                  std::abs(spec.cavity.delta_c)});

    const Trajectory elim = propagate_eliminated(cavity, free, CVector::Zero(n), 0.0,
                                                 pure_state(state0.sigma), control_for(elim_entry));
    const Trajectory full =
        propagate_full_cavity(cavity, spec.cavity, free, 0.0, 0.0,
                              dressed_state(state0.sigma, cavity), control_for(full_entry));

    std::vector<double> e_fast, rc_fast, rf_fast;
    for (const double t : elim.times) {
        const ExcitationState s = evolve(eig, state0, t);
        const EmissionRates r = emission_rates(s.sigma, cavity, free);
        e_fast.push_back(s.excitation());
        rc_fast.push_back(r.cavity);
        rf_fast.push_back(r.free_space);
    }

    ComparisonReport report;
    report.n_atoms = n;
    report.eigen_vs_eliminated = {sup_deviation(e_fast, elim.excitation, elim.times, 0.0),
                                  sup_deviation(rc_fast, elim.rate_c, elim.times, 0.0),
                                  sup_deviation(rf_fast, elim.rate_f, elim.times, 0.0)};
    const double settle = 5.0 / kappa;
    report.eliminated_vs_full = {
        sup_deviation(elim.excitation, full.excitation, full.times, settle),
        sup_deviation(elim.rate_c, full.rate_c, full.times, settle),
        sup_deviation(elim.rate_f, full.rate_f, full.times, settle)};
    report.eigen_pass = report.eigen_vs_eliminated.max() < spec.tolerances.eigen_vs_eliminated;
    report.full_pass = report.eliminated_vs_full.max() < spec.tolerances.eliminated_vs_full;
    return report;
}

AtomConfig random_instance(std::uint64_t seed, int max_atoms, double box, double min_separation) {
    if (max_atoms < 1) throw InvalidArgument("random_instance: max_atoms must be at least 1");
    Rng rng(seed);
    std::uniform_int_distribution<int> count(1, max_atoms);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = count(rng);
    std::vector<Vec3> positions;
    for (int attempt = 0; static_cast<int>(positions.size()) < n; ++attempt) {
        if (attempt > 100'000) throw GenerationFailure("random_instance: cannot place atoms");
        const Vec3 r(box * (unit(rng) - 0.5), box * (unit(rng) - 0.5), 0.2 + 0.5 * box * unit(rng));
        const bool clear = std::all_of(positions.begin(), positions.end(),
                                       [&](const Vec3& q) { return (q - r).norm() >= min_separation; });
        if (clear) positions.push_back(r);
    }
    return from_positions(std::move(positions), "oracle-instance");
}

double OracleCheckResult::max_eigen_deviation() const {
    double worst = 0.0;
    for (const auto& r : base) worst = std::max(worst, r.eigen_vs_eliminated.max());
    return worst;
}

double OracleCheckResult::max_full_deviation() const {
    double worst = 0.0;
    for (const auto& r : base) worst = std::max(worst, r.eliminated_vs_full.max());
    return worst;
}

double OracleCheckResult::max_full_deviation_scaled() const {
    double worst = 0.0;
    for (const auto& r : scaled) worst = std::max(worst, r.eliminated_vs_full.max());
    return worst;
}

bool OracleCheckResult::pass() const {
    const bool all = std::all_of(base.begin(), base.end(), [](const auto& r) { return r.pass(); });
    return all && (scaled.empty() || max_full_deviation_scaled() < max_full_deviation());
}

OracleCheckResult run_oracle_check(const OracleCheckSpec& spec) {
    if (spec.instances < 1) throw InvalidArgument("oracle check: instances must be at least 1");
    if (spec.max_atoms < 1 || spec.max_atoms > 6) {
        throw InvalidArgument("oracle check: max_atoms must lie in [1, 6]");
    }
    if (!(spec.kappa_scale > 1.0)) throw InvalidArgument("oracle check: kappa_scale must exceed 1");
    OracleCheckResult result;
    for (std::size_t i = 0; i < spec.instances; ++i) {
        ComparisonSpec c;
        c.config = random_instance(derive_seed(spec.seed, i), spec.max_atoms);
        c.cavity = spec.cavity;
        c.t_end = spec.t_end;
        result.base.push_back(compare_models(c));
        // Same cooperativity at larger κ: g grows as sqrt(κ).
        c.cavity.kappa_i *= spec.kappa_scale;
        c.cavity.kappa_e *= spec.kappa_scale;
        result.scaled.push_back(compare_models(c));
    }
    return result;
}

}  // namespace ringqed::oracle

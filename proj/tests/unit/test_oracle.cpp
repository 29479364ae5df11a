#include "ringqed/errors.hpp"
#include "ringqed/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace ringqed;
using namespace ringqed::oracle;

TEST_CASE("single excited atom decays at Γ0") {
    const AtomConfig a = single_atom(Vec3(0, 0, 0.4));
    CavityParams p;
    const CavityMatrix cav = build_cavity_matrix(a, p, 1e-12);
    StepControl sc;
    sc.t_end = 3.0;
    sc.record_every = 50;
    const Trajectory tr = propagate_eliminated(cav, independent_emitters(1), CVector::Zero(1), 0.0,
                                               pure_state(CVector::Ones(1)), sc);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        CHECK(tr.excitation[k] == doctest::Approx(std::exp(-tr.times[k])).epsilon(1e-8));
        CHECK(tr.trace[k] == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(tr.final_state.min_eigenvalue() > -1e-9);
    CHECK(tr.final_state.hermiticity_error() < 1e-10);
}

TEST_CASE("bare cavity photon decays at κ") {
    const AtomConfig a = single_atom(Vec3(0, 0, 0.4));
    CavityParams p;
    const CavityMatrix cav = build_cavity_matrix(a, p, 1e-20);  // atom decoupled
    CMatrix rho = CMatrix::Zero(3, 3);
    rho(2, 2) = 1.0;
    StepControl sc;
    sc.t_end = 0.02;
    const Trajectory tr =
        propagate_full_cavity(cav, p, independent_emitters(1), 0.0, 0.0, DensityMatrix{rho}, sc);
    for (std::size_t k = 0; k < tr.times.size(); k += 10) {
        CHECK(tr.photons[k] == doctest::Approx(std::exp(-200.0 * tr.times[k])).epsilon(1e-6));
        CHECK(tr.rate_c_external[k] == doctest::Approx(100.0 * tr.photons[k]));
    }
}

TEST_CASE("eliminated propagation matches the eigenmode path") {
    const AtomConfig a = random_instance(7, 3);
    CavityParams p;
    const CavityMatrix cav = build_cavity_matrix(a, p);
    const FreeSpaceMatrix free = build_free_matrix(a);
    const CouplingMatrix m = build_coupling(0.0, cav, free);
    const EigenSystem eig = eigendecompose(m.matrix);
    const ExcitationState s0 = timed_dicke_state(eig, drive_vector(cav, 1.0), 1e-3);
    StepControl sc;
    sc.t_end = 1.0;
    const Trajectory tr = propagate_eliminated(cav, free, CVector::Zero(a.size()), 0.0, pure_state(s0.sigma), sc);
    // ρ_{e_j g} = σ_j sqrt(1 - e): weak-excitation corrections are O(‖σ‖³)
    const CVector want = evolve(eig, s0, 1.0).sigma;
    CHECK((tr.sigma.back() - want).norm() < 1e-8);
    // −de/dt = R_c + R_f along the trajectory
    for (std::size_t k = 1; k + 1 < tr.times.size(); k += 37) {
        const double dt = tr.times[k + 1] - tr.times[k - 1];
        const double de = (tr.excitation[k + 1] - tr.excitation[k - 1]) / dt;
        CHECK(-de == doctest::Approx(tr.rate_c[k] + tr.rate_f[k]).epsilon(1e-6));
    }
}

TEST_CASE("full model steady cavity field under weak drive") {
    const AtomConfig a = from_positions({Vec3(0, 0, 0.35), Vec3(0.3, 0.2, 0.45)});
    CavityParams p;
    p.eta = 0.02;
    const CavityMatrix cav = build_cavity_matrix(a, p);
    const FreeSpaceMatrix free = build_free_matrix(a);
    StepControl sc;
    sc.t_end = 25.0;
    sc.record_every = 1000;
    const Trajectory tr =
        propagate_full_cavity(cav, p, free, p.eta, 0.0, pure_state(CVector::Zero(2), true), sc);
    const CVector sigma = steady_state_direct(build_coupling(0.0, cav, free).matrix, drive_vector(cav, p.eta));
    const cplx want = cavity_field(sigma, cav, p.eta);
    CHECK(std::abs(tr.field.back() - want) < 0.01 * std::abs(want));
}

TEST_CASE("model comparison report") {
    ComparisonSpec spec;
    spec.config = from_positions({Vec3(0, 0, 0.4), Vec3(0.25, 0.1, 0.5)});
    spec.t_end = 2.0;
    const ComparisonReport r = compare_models(spec);
    CHECK(r.n_atoms == 2);
    CHECK(r.eigen_vs_eliminated.max() < 1e-6);
    CHECK(r.eliminated_vs_full.max() < 0.03);
    CHECK(r.pass());
    ComparisonSpec big = spec;
    big.config = random_instance(1, 7);
    big.config.positions.resize(7, Vec3(0, 0, 0.4));
    CHECK_THROWS_AS(compare_models(big), Error);
}

TEST_CASE("random instances") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const AtomConfig a = random_instance(s, 4);
        CHECK(a.size() >= 1);
        CHECK(a.size() <= 4);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.positions[i].z() >= 0.2);
            for (std::size_t j = 0; j < i; ++j) CHECK((a.positions[i] - a.positions[j]).norm() >= 0.2);
        }
    }
    CHECK_THROWS_AS(random_instance(0, 0), InvalidArgument);
}

TEST_CASE("pure states") {
    CVector s(2);
    s << cplx(0.3, 0.1), cplx(-0.2, 0.0);
    const DensityMatrix d = pure_state(s, true);
    CHECK(d.dim() == 4);
    CHECK(d.trace() == doctest::Approx(1.0));
    CHECK(d.purity() == doctest::Approx(1.0));
    CHECK_THROWS_AS(pure_state(CVector::Constant(2, 1.0)), InvalidArgument);
}

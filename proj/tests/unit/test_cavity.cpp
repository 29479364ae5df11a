#include "ringqed/cavity.hpp"
#include "ringqed/dynamics.hpp"
#include "ringqed/errors.hpp"
#include "ringqed/random.hpp"

#include <doctest.h>

#include <numbers>

using namespace ringqed;

TEST_CASE("evanescent coupling profile") {
    CavityParams p;
    CHECK(default_evanescent_length(1.69) ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi * std::sqrt(1.69 * 1.69 - 1.0))));
    CHECK(p.evanescent_length() == doctest::Approx(0.11679).epsilon(1e-4));
    CHECK_THROWS_AS(default_evanescent_length(1.0), InvalidArgument);
    CHECK(coupling_at(p.z_ref, p) == doctest::Approx(p.g_ref()));
    CHECK(cooperativity(p.g_ref(), p) == doctest::Approx(p.c_ref));
    const double dz = 0.07;
    CHECK(coupling_at(p.z_ref + dz, p) / coupling_at(p.z_ref, p) ==
          doctest::Approx(std::exp(-dz / p.evanescent_length())));
    // C = 4 g² / κ
    CHECK(cooperativity(2.0, p) == doctest::Approx(4.0 * 4.0 / 200.0));
}

TEST_CASE("cavity parameter validation") {
    CavityParams p;
    p.kappa_i = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    CavityParams q;
    q.n_eff = 0.9;
    CHECK_THROWS_AS(q.validate(), InvalidArgument);
    CavityParams r;
    r.z_ev = -1.0;
    CHECK_THROWS_AS(r.validate(), InvalidArgument);
}

TEST_CASE("cavity matrix elements") {
    CloudParams cloud;
    cloud.n_atoms = 6;
    const AtomConfig a = sample_cloud(cloud, 3);
    CavityParams p;
    p.delta_c = 1.3;
    const CavityMatrix cav = build_cavity_matrix(a, p);
    const cplx kt(1.3, 100.0);
    for (Eigen::Index i = 0; i < 6; ++i) {
        const double gi = coupling_at(a.positions[i].z(), p);
        CHECK(cav.couplings(i) == doctest::Approx(gi));
        CHECK(cav.phases(i) == doctest::Approx(1.69 * 2.0 * std::numbers::pi * a.positions[i].y()));
        CHECK(cav.cooperativities(i) == doctest::Approx(4.0 * gi * gi / 200.0));
        for (Eigen::Index j = 0; j < 6; ++j) {
            const double gj = coupling_at(a.positions[j].z(), p);
            const cplx want = gi * gj * std::exp(-kI * (cav.phases(i) - cav.phases(j))) / kt;
            CHECK(std::abs(cav.matrix(i, j) - want) < 1e-15);
        }
    }
}

TEST_CASE("resonant cavity matrix is skew-Hermitian and rank one") {
    CloudParams cloud;
    cloud.n_atoms = 12;
    const CavityMatrix cav = build_cavity_matrix(sample_cloud(cloud, 8), CavityParams{});
    CHECK((cav.matrix + cav.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-16);
    Eigen::JacobiSVD<CMatrix> svd(cav.matrix);
    CHECK(svd.singularValues()(1) < 1e-15 * svd.singularValues()(0));
}

TEST_CASE("uniform cooperativity override") {
    CloudParams cloud;
    cloud.n_atoms = 5;
    const CavityMatrix cav = build_cavity_matrix(sample_cloud(cloud, 1), CavityParams{}, 0.07);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(cav.cooperativities(i) == doctest::Approx(0.07));
}

TEST_CASE("ring phases close on an integer mode") {
    ArrayParams p;
    p.n_sites = 13;
    p.shape = ArrayShape::ring;
    const AtomConfig a = build_array(p, 0);
    REQUIRE(a.loop_length.has_value());
    const double loop = *a.loop_length;
    const RVector phi = cavity_phases(a, 1.69);
    // wavenumber implied by one step, times the loop, is an integer multiple of 2π
    const double k = (phi(1) - phi(0)) / (a.path[1] - a.path[0]);
    const double turns = k * loop / (2.0 * std::numbers::pi);
    CHECK(turns == doctest::Approx(std::round(1.69 * loop)).epsilon(1e-12));
    CHECK(turns >= 1.0);
    // open line: plain waveguide phase
    ArrayParams line;
    line.n_sites = 3;
    const AtomConfig l = build_array(line, 0);
    const RVector lphi = cavity_phases(l, 1.5);
    CHECK(lphi(2) - lphi(0) == doctest::Approx(1.5 * 2.0 * std::numbers::pi * 0.6));
}

TEST_CASE("empty critically coupled resonator") {
    const AtomConfig a = single_atom(Vec3(0, 0, 0.4));
    CavityParams p;
    const CavityMatrix cav = build_cavity_matrix(a, p);
    CHECK(std::abs(bus_transmission(CVector::Zero(1), cav, p)) < 1e-15);
    const CavityMatrix detuned = with_cavity_detuning(cav, p, 1e6);
    CHECK(std::abs(bus_transmission(CVector::Zero(1), detuned, p) - 1.0) < 1e-3);
    CavityParams undriven;
    undriven.eta = 0.0;
    CHECK_THROWS_AS(bus_transmission(CVector::Zero(1), cav, undriven), UndefinedTransmission);
}

TEST_CASE("single-atom transmission against the closed form") {
    // One atom on resonance with the cavity: M = Δ + i(1 + C)/2 and
    // t = 1 - iκ_e (g σ + η)/(κ̃ η) with σ = g η /(κ̃ M).
    CavityParams p;
    p.kappa_e = 80.0;
    const AtomConfig a = single_atom(Vec3(0, 0, 0.35));
    const CavityMatrix cav = build_cavity_matrix(a, p);
    const FreeSpaceMatrix free = independent_emitters(1);
    const double g = cav.couplings(0), c = cav.cooperativities(0);
    const cplx kt = p.kappa_tilde();
    for (double delta : {-3.0, -0.4, 0.0, 0.2, 5.0}) {
        const CouplingMatrix m = build_coupling(delta, cav, free);
        const CVector sigma = steady_state_direct(m.matrix, drive_vector(cav, p.eta));
        const cplx mm(delta, (1.0 + c) / 2.0);
        const cplx s_ref = g * p.eta / (kt * mm);
        const cplx t_ref = 1.0 - kI * p.kappa_e * (g * s_ref + p.eta) / (kt * p.eta);
        CHECK(std::abs(sigma(0) - s_ref) < 1e-14);
        CHECK(std::abs(bus_transmission(sigma, cav, p) - t_ref) < 1e-14);
    }
}

TEST_CASE("drive vector") {
    const AtomConfig a = from_positions({Vec3(0, 0, 0.4), Vec3(0, 0.25, 0.5)});
    CavityParams p;
    p.eta = 2.5;
    const CavityMatrix cav = build_cavity_matrix(a, p);
    const CVector omega = drive_vector(cav, p.eta);
    for (Eigen::Index j = 0; j < 2; ++j) {
        const cplx want = -cav.couplings(j) * std::exp(-kI * cav.phases(j)) * 2.5 / p.kappa_tilde();
        CHECK(std::abs(omega(j) - want) < 1e-15);
    }
    CHECK((drive_vector(a, p) - omega).norm() < 1e-15);
}

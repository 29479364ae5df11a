#include "ringqed/errors.hpp"
#include "ringqed/free_space.hpp"
#include "ringqed/geometry.hpp"
#include "ringqed/random.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <numbers>

using namespace ringqed;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

// 50-digit closed forms; the cancellation in j2 at small x costs far less
// than the 34 spare digits.
std::pair<double, double> h0_ref(double xd) {
    const big x = xd;
    return {static_cast<double>(sin(x) / x), static_cast<double>(-cos(x) / x)};
}

std::pair<double, double> h2_ref(double xd) {
    const big x = xd;
    const big a = 3 / (x * x) - 1;
    return {static_cast<double>(a * sin(x) / x - 3 * cos(x) / (x * x)),
            static_cast<double>(-a * cos(x) / x - 3 * sin(x) / (x * x))};
}

void check_close(double got, double want, double rel) {
    CHECK(std::abs(got - want) <= rel * std::max(std::abs(want), 1e-300));
}

}  // namespace

TEST_CASE("hankel functions against a 50-digit reference") {
    for (double x = 1e-3; x < 60.0; x *= 1.07) {
        const auto [j0, y0] = h0_ref(x);
        const auto [j2, y2] = h2_ref(x);
        const cplx h0 = hankel0(x), h2 = hankel2(x);
        check_close(h0.real(), j0, 1e-13);
        check_close(h0.imag(), y0, 1e-13);
        // j2 and y2 pass through zeros; compare on the scale of |h2|.
        const double scale = std::abs(cplx(j2, y2));
        CHECK(std::abs(h2.real() - j2) <= 1e-13 * scale);
        CHECK(std::abs(h2.imag() - y2) <= 1e-13 * scale);
        if (x < 0.5) check_close(h2.real(), j2, 1e-12);  // no cancellation as x -> 0
    }
}

TEST_CASE("half-wavelength pair along the quantization axis") {
    const cplx g = greens_pair(Vec3(0.5, 0, 0.4), Vec3(0, 0, 0.4));
    const double pi = std::numbers::pi;
    CHECK(-2.0 * g.imag() == doctest::Approx(-3.0 / (2.0 * pi * pi)).epsilon(1e-13));
    CHECK(g.real() == doctest::Approx(0.75 * (1.0 / pi - 1.0 / (pi * pi * pi))).epsilon(1e-13));
}

TEST_CASE("polarization coefficient") {
    CHECK(polarization_coefficient(Vec3(1, 0, 0)) == doctest::Approx(-0.5));
    CHECK(polarization_coefficient(Vec3(0, 2, 0)) == doctest::Approx(0.25));
    CHECK(polarization_coefficient(Vec3(0, 0, -3)) == doctest::Approx(0.25));
}

TEST_CASE("coincident limit recovers the single-atom rate") {
    for (const Vec3 dir : {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 1).normalized()}) {
        const cplx g = greens_pair(Vec3(0, 0, 1) + 1e-7 * dir, Vec3(0, 0, 1));
        CHECK(-2.0 * g.imag() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("free-space matrix structure") {
    CloudParams p;
    p.n_atoms = 30;
    const AtomConfig c = sample_cloud(p, 4);
    const FreeSpaceMatrix f = build_free_matrix(c);
    CHECK(f.matrix == f.matrix.transpose());
    for (Eigen::Index i = 0; i < f.size(); ++i) CHECK(f.matrix(i, i) == cplx(0.0, -0.5));
    CHECK(f.matrix(3, 7) == greens_pair(c.positions[3], c.positions[7]));
    // Γ is positive semidefinite (passive free-space bath).
    Eigen::SelfAdjointEigenSolver<RMatrix> es(f.dissipation());
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("near-coincident atoms are reported with their indices") {
    const AtomConfig c = from_positions({Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 0, 1 + 1e-12)});
    try {
        build_free_matrix(c);
        FAIL("expected NearCoincidence");
    } catch (const NearCoincidence& e) {
        REQUIRE(e.pair.has_value());
        CHECK(e.pair->first == 0);
        CHECK(e.pair->second == 2);
    }
    CHECK_THROWS_AS(greens_pair(Vec3(0, 0, 1), Vec3(0, 0, 1)), NearCoincidence);
}

TEST_CASE("independent emitters") {
    const FreeSpaceMatrix f = independent_emitters(4);
    CHECK(f.matrix.isDiagonal());
    CHECK(f.dissipation() == RMatrix::Identity(4, 4));
}

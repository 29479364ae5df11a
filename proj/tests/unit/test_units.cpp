#include "ringqed/errors.hpp"
#include "ringqed/random.hpp"
#include "ringqed/units.hpp"

#include <doctest.h>

#include <set>

using namespace ringqed;

TEST_CASE("dimensionless constants") {
    CHECK(UnitSystem::gamma0 == 1.0);
    CHECK(UnitSystem::lambda0 == 1.0);
    CHECK(UnitSystem::k0 == doctest::Approx(2.0 * 3.14159265358979323846).epsilon(1e-15));
}

TEST_CASE("calibration conversions") {
    const Calibration cal;
    // lifetime 1/(2π · 5.22 MHz)
    CHECK(to_physical(1.0, QuantityKind::time, cal) == doctest::Approx(3.0489e-8).epsilon(1e-4));
    CHECK(to_physical(1.0, QuantityKind::length, cal) == doctest::Approx(852e-9));
    CHECK(to_physical(2.0, QuantityKind::rate, cal) == doctest::Approx(2.0 * cal.gamma0_per_s));
    CHECK(nm_to_lambda0(852.0, cal) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(nm_to_lambda0(255.6, cal) == doctest::Approx(0.3).epsilon(1e-12));
    for (auto kind : {QuantityKind::time, QuantityKind::length, QuantityKind::rate}) {
        CHECK(from_physical(to_physical(0.37, kind, cal), kind, cal) == doctest::Approx(0.37).epsilon(1e-14));
    }
}

TEST_CASE("calibration validation") {
    Calibration bad;
    bad.lambda0_m = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidCalibration);
    Calibration zero;
    zero.gamma0_per_s = 0.0;
    CHECK_THROWS_AS(zero.validate(), InvalidCalibration);
}

TEST_CASE("derived seeds are distinct and stable") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
    CHECK(seen.size() == 10000);
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(derive_seed(42, 7) != derive_seed(43, 7));
    static_assert(mix64(0) != 0);
}

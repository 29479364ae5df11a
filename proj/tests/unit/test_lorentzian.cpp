#include "ringqed/errors.hpp"
#include "ringqed/lorentzian.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace ringqed;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
    return x;
}

double model(double x, double c, double w, double a, double o) {
    const double u = (x - c) / (w / 2);
    return o + a / (1 + u * u);
}

}  // namespace

TEST_CASE("exact Lorentzian is recovered") {
    const auto x = grid(-10, 10, 201);
    std::vector<double> y;
    for (double xi : x) y.push_back(model(xi, 0.37, 2.4, 0.8, 0.05));
    const LorentzianFit f = fit_lorentzian(x, y);
    CHECK(f.converged);
    CHECK_FALSE(f.degenerate);
    CHECK(f.center == doctest::Approx(0.37).epsilon(1e-9));
    CHECK(f.fwhm == doctest::Approx(2.4).epsilon(1e-9));
    CHECK(f.amplitude == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(f.offset == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(f.residual < 1e-10);
    CHECK(f(0.37) == doctest::Approx(0.85));
}

TEST_CASE("dips fit with negative amplitude") {
    const auto x = grid(-5, 5, 101);
    std::vector<double> y;
    for (double xi : x) y.push_back(model(xi, -0.5, 1.0, -0.6, 1.0));
    const LorentzianFit f = fit_lorentzian(x, y);
    CHECK(f.fwhm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.amplitude == doctest::Approx(-0.6).epsilon(1e-9));
}

TEST_CASE("noisy data: width within 3%") {
    const auto x = grid(-10, 10, 201);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.01);
        std::vector<double> y;
        for (double xi : x) y.push_back(model(xi, 0.0, 3.0, 1.0, 0.0) + noise(rng));
        const LorentzianFit f = fit_lorentzian(x, y);
        CHECK(f.converged);
        CHECK(std::abs(f.fwhm / 3.0 - 1.0) < 0.03);
    }
}

TEST_CASE("flat data is flagged degenerate") {
    const auto x = grid(-10, 10, 50);
    const std::vector<double> y(50, 0.3);
    CHECK(fit_lorentzian(x, y).degenerate);
}

TEST_CASE("too few points") {
    const auto x = grid(-1, 1, 7);
    const std::vector<double> y(7, 0.0);
    CHECK_THROWS_AS(fit_lorentzian(x, y), InvalidArgument);
    const auto x8 = grid(-1, 1, 8);
    CHECK_THROWS_AS(fit_lorentzian(x8, std::vector<double>(7, 0.0)), Error);
}

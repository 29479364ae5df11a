#include "ringqed/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace ringqed;

TEST_CASE("streaming statistics against batch formulas") {
    std::mt19937_64 rng(3);
    std::lognormal_distribution<double> dist(0.0, 1.5);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = 1e6 + dist(rng);  // large offset stresses cancellation
    StreamingStats s;
    for (double x : xs) s.add(x);
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    CHECK(s.count() == xs.size());
    CHECK(s.mean() == doctest::Approx(mean).epsilon(1e-14));
    CHECK(s.variance() == doctest::Approx(ss / (n - 1)).epsilon(1e-9));
    CHECK(s.standard_error() == doctest::Approx(std::sqrt(ss / (n - 1) / n)).epsilon(1e-9));
    CHECK(s.min() == *std::min_element(xs.begin(), xs.end()));
    CHECK(s.max() == *std::max_element(xs.begin(), xs.end()));
}

TEST_CASE("merge equals sequential accumulation") {
    StreamingStats all, a, b, empty;
    for (int i = 0; i < 100; ++i) {
        const double x = std::sin(i * 0.7) * 3.0 + i * 0.01;
        all.add(x);
        (i < 37 ? a : b).add(x);
    }
    a.merge(b);
    a.merge(empty);
    CHECK(a.count() == all.count());
    CHECK(a.mean() == doctest::Approx(all.mean()).epsilon(1e-14));
    CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
    CHECK(a.min() == all.min());
    CHECK(a.max() == all.max());
    empty.merge(all);
    CHECK(empty.mean() == all.mean());
}

TEST_CASE("degenerate sample sizes") {
    StreamingStats s;
    CHECK(s.variance() == 0.0);
    s.add(2.5);
    CHECK(s.variance() == 0.0);
    CHECK(s.standard_error() == 0.0);
}

TEST_CASE("histogram mass and edges") {
    Histogram h(0.0, 3.0, 60);
    h.add(-1.0);
    h.add(0.0);
    h.add(1.5);
    h.add(3.0);
    h.add(99.0);
    CHECK(h.mass() == 5);
    CHECK(h.counts().front() == 2);
    CHECK(h.counts().back() == 2);
    CHECK(h.bin_center(0) == doctest::Approx(0.025));
    Histogram g(0.0, 3.0, 60);
    g.add(1.5);
    h.merge(g);
    CHECK(h.counts()[30] == 2);
}

TEST_CASE("ensemble bookkeeping") {
    EnsembleStats e;
    e.requested = 4;
    e.with_histogram("gamma_f", 0.0, 3.0, 10);
    e.metrics["gamma_f"].add(1.0);
    e.metrics["gamma_f"].add(std::nullopt);
    e.exclude("defective");
    e.exclude("defective");
    e.exclude("dark_pole");
    CHECK(e.excluded_total() == 3);
    CHECK(e.at("gamma_f").undefined == 1);
    CHECK(e.at("gamma_f").histogram->mass() == 1);
    EnsembleStats f;
    f.exclude("defective");
    e.merge(f);
    CHECK(e.excluded.at("defective") == 3);
    const auto j = to_json(e);
    CHECK(j.contains("metrics"));
}

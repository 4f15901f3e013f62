#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "uict/diffusion.hpp"
#include "uict/stats.hpp"
#include "uict/util.hpp"

using namespace uict;

namespace {

// |N(0,1)^3| norm CDF: P(R <= x) = erf(x/sqrt2) - sqrt(2/pi) x exp(-x^2/2).
double chi3_cdf(double x) {
    if (x <= 0.0) return 0.0;
    return std::erf(x / std::sqrt(2.0)) -
           std::sqrt(2.0 / M_PI) * x * std::exp(-0.5 * x * x);
}

// Gamma(shape 2, scale 1) CDF.
double gamma2_cdf(double x) {
    if (x <= 0.0) return 0.0;
    return 1.0 - std::exp(-x) * (1.0 + x);
}

} // namespace

TEST_CASE("noise-free paths follow the drift flow") {
    SUBCASE("reciprocal drift") {
        const SdePath path = euler_path(SdeSpec::growth(), 1.0, 1e-4, 4.0, 0, 0, 0.0);
        CHECK(path.values.back() == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(path.at_time(1.5) == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("constant drift") {
        const SdePath path = euler_path(SdeSpec::slice(), 0.0, 1e-4, 1.0, 0, 0, 0.0);
        CHECK(path.values.back() == doctest::Approx(2.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(euler_path(SdeSpec::growth(), -1.0, 1e-4, 1.0, 0), std::domain_error);
}

TEST_CASE("paths are reproducible per stream") {
    const SdePath a = euler_path(SdeSpec::growth(), 1.0, 1e-3, 1.0, 5, 2);
    const SdePath b = euler_path(SdeSpec::growth(), 1.0, 1e-3, 1.0, 5, 2);
    const SdePath c = euler_path(SdeSpec::growth(), 1.0, 1e-3, 1.0, 5, 3);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(euler_terminal(SdeSpec::growth(), 1.0, 1e-3, 1.0, 5, 2) == a.values.back());
}

TEST_CASE("time change") {
    const SdePath path = euler_path(SdeSpec::growth(), 1.0, 0.125, 8.0, 9);

    SUBCASE("unit clock is the identity") {
        const auto tc = time_change(path, [](double) { return 1.0; }, 0.125, 8.0);
        CHECK_FALSE(tc.truncated);
        REQUIRE(tc.path.values.size() == path.values.size());
        for (std::size_t i = 0; i < path.values.size(); ++i)
            CHECK(tc.path.values[i] == path.values[i]);
    }
    SUBCASE("doubled clock replays at half speed") {
        const auto tc = time_change(path, [](double) { return 2.0; }, 0.125, 8.0);
        CHECK_FALSE(tc.truncated);
        // Y(s) = X(s/2): even grid points match exactly, odd ones are midpoints.
        for (std::size_t j = 0; j + 1 < tc.path.values.size(); j += 2)
            CHECK(tc.path.values[j] == path.values[j / 2]);
        CHECK(tc.path.values[1] == 0.5 * (path.values[0] + path.values[1]));
    }
    SUBCASE("short clock signals truncation") {
        const auto tc = time_change(path, [](double) { return 0.5; }, 0.125, 8.0);
        CHECK(tc.truncated);
        CHECK(tc.clock_end == doctest::Approx(4.0));
    }
    SUBCASE("clock must be positive") {
        CHECK_THROWS_AS(time_change(path, [](double) { return 0.0; }, 0.125, 1.0),
                        std::domain_error);
    }
}

TEST_CASE("growth-clock marginal matches the exact transient law") {
    // From a near-zero start the u = 1 marginal is the 3-d Gaussian norm.
    constexpr std::size_t n = 20000;
    auto terminal = parallel_map_indexed<double>(n, [&](std::size_t i) {
        return euler_terminal(SdeSpec::growth(), kEpsilonFloor, 1e-3, 1.0, 71, i);
    });
    const double mean =
        std::accumulate(terminal.begin(), terminal.end(), 0.0) / static_cast<double>(n);
    CHECK(mean == doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(0.015));
    CHECK(ks_distance(std::move(terminal), chi3_cdf) < 0.02);
}

TEST_CASE("slice-clock marginal matches the exact transient law") {
    constexpr std::size_t n = 20000;
    auto terminal = parallel_map_indexed<double>(n, [&](std::size_t i) {
        return euler_terminal(SdeSpec::slice(), 0.0, 1e-3, 1.0, 73, i);
    });
    CHECK(ks_distance(std::move(terminal), gamma2_cdf) < 0.02);
}

TEST_CASE("rescaled chain marginals") {
    SUBCASE("zero horizon is a point mass") {
        const auto samples = rescaled_growth_marginal(100, 0.0, 7, 50, 3);
        for (double v : samples) CHECK(v == doctest::Approx(0.7).epsilon(1e-15));
    }
    SUBCASE("first stop is the rooted boundary") {
        const auto samples = rescaled_slice_marginal(64, 1.0 / 64.0, 50, 3, 1);
        for (double v : samples) CHECK(v == doctest::Approx(1.0 / 64.0));
    }
    SUBCASE("slice-clock mean approaches 2s") {
        const auto samples = rescaled_slice_marginal(64, 1.0, 4000, 5, 1);
        const double mean =
            std::accumulate(samples.begin(), samples.end(), 0.0) / 4000.0;
        // E[M at stop t] = 2t - 1 for a unit rooted boundary.
        CHECK(mean == doctest::Approx(2.0 - 1.0 / 64.0).epsilon(0.02));
    }
}

TEST_CASE("growth-clock marginal converges to its limit as n grows") {
    // The gap to the reference marginal must not grow along n = 1e3,1e4,1e5.
    constexpr std::size_t samples = 10000;
    auto reference = parallel_map_indexed<double>(samples, [&](std::size_t i) {
        return euler_terminal(SdeSpec::growth(), kEpsilonFloor, 1e-4, 1.0, 79, i);
    });
    std::vector<double> gaps;
    for (const std::int64_t n : {1000, 10000, 100000}) {
        auto chain = rescaled_growth_marginal(n, 1.0, 1, samples, 83);
        gaps.push_back(ks_distance(std::move(chain), reference));
    }
    CHECK(gaps[1] < gaps[0] + 0.01);
    CHECK(gaps[2] < gaps[0] + 0.01);
    CHECK(gaps[2] < 0.03);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "uict/boundary_chain.hpp"
#include "uict/branching.hpp"
#include "uict/diffusion.hpp"
#include "uict/exact.hpp"
#include "uict/stats.hpp"
#include "uict/util.hpp"

using namespace uict;

TEST_CASE("offspring law") {
    CHECK(offspring_prob(0) == 0.5);
    CHECK(offspring_prob(1) == 0.25);
    double sum = 0.0;
    for (std::int64_t k = 0; k <= 40; ++k) sum += offspring_prob(k);
    CHECK(sum == 1.0 - std::ldexp(1.0, -41)); // partial sums stay exact dyadics
    CHECK_THROWS_AS(offspring_prob(-1), std::domain_error);
}

TEST_CASE("offspring law is critical") {
    // Rational identity: sum_{k<=K} k 2^-(k+1) = 1 - (K+2) 2^-(K+1).
    using exact::Rational;
    constexpr std::int64_t K = 200;
    Rational sum = 0;
    for (std::int64_t k = 0; k <= K; ++k) sum += Rational(k) * exact::pow2_inv(k + 1);
    CHECK(sum == 1 - Rational(K + 2) * exact::pow2_inv(K + 1));

    double mean = 0.0;
    for (std::int64_t k = 0; k <= 64; ++k) mean += static_cast<double>(k) * offspring_prob(k);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("population transition kernel") {
    CHECK(gw_kernel(1, 1) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(gw_kernel(2, 1) == doctest::Approx(0.25).epsilon(1e-13));
    for (std::int64_t l : {1, 2, 5, 20})
        CHECK(gw_kernel(l, 0) == doctest::Approx(std::ldexp(1.0, static_cast<int>(-l))).epsilon(1e-13));
    CHECK_THROWS_AS(gw_kernel(0, 1), std::domain_error);

    // One parent: the kernel reduces to the offspring law.
    for (std::int64_t k = 0; k <= 30; ++k)
        CHECK(gw_kernel(1, k) == doctest::Approx(offspring_prob(k)).epsilon(1e-12));
}

TEST_CASE("reweighted kernel") {
    CHECK(conditioned_kernel(1, 2) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK_THROWS_AS(conditioned_kernel(1, 0), std::domain_error);

    SUBCASE("row sums to one") {
        for (std::int64_t l : {1, 3, 10}) {
            double sum = 0.0;
            for (std::int64_t m = 1; m <= 200 + 8 * l; ++m) sum += conditioned_kernel(l, m);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
        const ConditionedRow row = conditioned_kernel_row(3);
        double sum = row.residual;
        for (double q : row.probs) sum += q;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.residual < 1e-12);
    }

    SUBCASE("matches the layer kernel") {
        for (std::int64_t m = 1; m <= 10; ++m)
            for (std::int64_t k = -m + 1; k <= 30; ++k) {
                CHECK(exact::conditioned_kernel_rational(m, m + k) ==
                      exact::strip_kernel_rational(m, k));
                CHECK(conditioned_kernel(m, m + k) ==
                      doctest::Approx(strip_kernel_exact(m, k)).epsilon(1e-11));
            }
    }
}

TEST_CASE("layer-size marginal by dynamic programming") {
    SUBCASE("one generation from a single root") {
        const SliceMarginal marginal = slice_marginal_dp(1, 1, 512);
        for (std::size_t m = 1; m < marginal.probs.size() && m <= 40; ++m)
            CHECK(marginal.probs[m] ==
                  doctest::Approx(static_cast<double>(m) * std::ldexp(1.0, -static_cast<int>(m) - 1))
                      .epsilon(1e-13));
        double total = marginal.residual;
        for (std::size_t m = 1; m < marginal.probs.size(); ++m) total += marginal.probs[m];
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("j = 1 equals the reweighted row bit-exactly") {
        for (std::int64_t m0 : {1, 2, 5}) {
            const SliceMarginal marginal = slice_marginal_dp(m0, 1, 1024);
            const ConditionedRow row = conditioned_kernel_row(m0, 1e-14);
            for (std::size_t m = 1; m < std::min(marginal.probs.size(), row.probs.size() + 1); ++m)
                CHECK(marginal.probs[m] == row.probs[m - 1]);
        }
    }

    SUBCASE("two generations equal the composed one-step kernels") {
        const SliceMarginal marginal = slice_marginal_dp(1, 2, 1024);
        for (std::int64_t m : {1, 2, 3, 7, 15}) {
            double composed = 0.0;
            for (std::int64_t l = 1; l <= 400; ++l)
                composed += conditioned_kernel(1, l) * conditioned_kernel(l, m);
            CHECK(marginal.probs[static_cast<std::size_t>(m)] ==
                  doctest::Approx(composed).epsilon(1e-11));
        }
    }

    SUBCASE("residual tracked below threshold") {
        const SliceMarginal marginal = slice_marginal_dp(1, 4, 2048);
        CHECK(marginal.residual < 1e-12);
    }
}

TEST_CASE("reweighted chain sampler") {
    CHECK(sample_conditioned_chain(7, 0, 1) == std::vector<std::int64_t>{7});

    SUBCASE("chain mean after t steps is near 2t") {
        // E[population after t steps | start 1] = 1 + 2t.
        constexpr std::int64_t t = 128;
        constexpr std::size_t chains = 5000;
        const auto values = parallel_map_indexed<double>(chains, [&](std::size_t i) {
            return static_cast<double>(sample_conditioned_chain(1, t, 31, i)[t]) /
                   static_cast<double>(t);
        });
        const double mean =
            std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(chains);
        CHECK(std::fabs(mean - 2.0) < 0.05);
    }

    SUBCASE("distribution matches the growth process at t = 64") {
        constexpr std::int64_t t = 64;
        constexpr std::size_t n = 20000;
        auto branching_side = parallel_map_indexed<double>(n, [&](std::size_t i) {
            return static_cast<double>(sample_conditioned_chain(1, t - 1, 41, i).back());
        });
        auto growth_side = parallel_map_indexed<double>(n, [&](std::size_t i) {
            RngStream rng(43, i);
            return static_cast<double>(run_chain_to_stop(1, t, rng));
        });
        CHECK(ks_distance(std::move(branching_side), std::move(growth_side)) < 0.02);
    }
}

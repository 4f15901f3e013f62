#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uict/boundary_chain.hpp"
#include "uict/exact.hpp"

using namespace uict;

TEST_CASE("one-step probabilities") {
    CHECK(step_prob(3, Move::Plus) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(step_prob(1, Move::Minus) == 0.0);
    CHECK(step_prob(5, Move::Minus) == doctest::Approx(2.0 / 5.0).epsilon(1e-15));
    for (std::int64_t m : {1, 2, 3, 7, 100, 1000000})
        CHECK(step_prob(m, Move::Plus) + step_prob(m, Move::Minus) == 1.0);
    CHECK_THROWS_AS(step_prob(0, Move::Plus), std::domain_error);
}

TEST_CASE("trajectory sampling basics") {
    const auto empty = sample_trajectory(1, 0, 42);
    CHECK(empty.values == std::vector<std::int64_t>{1});
    CHECK(empty.moves.empty());

    // A length-1 boundary forces the extending move.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto one = sample_trajectory(1, 1, seed);
        CHECK(one.values == std::vector<std::int64_t>{1, 2});
    }

    const auto a = sample_trajectory(5, 1000, 7, 3);
    const auto b = sample_trajectory(5, 1000, 7, 3);
    const auto c = sample_trajectory(5, 1000, 7, 4);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);

    for (std::size_t i = 0; i < a.moves.size(); ++i) {
        CHECK(a.values[i + 1] - a.values[i] == sign(a.moves[i]));
        CHECK(a.values[i] >= 1);
    }
}

TEST_CASE("one-step drift matches 1/m empirically") {
    constexpr std::size_t n = 1'000'000;
    constexpr std::int64_t m = 4;
    RngStream rng(2024, 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += sign(draw_move(m, rng));
    const double mean = sum / static_cast<double>(n);
    const double p_plus = step_prob(m, Move::Plus);
    const double sigma = std::sqrt(4.0 * p_plus * (1.0 - p_plus) / static_cast<double>(n));
    CHECK(std::fabs(mean - 1.0 / static_cast<double>(m)) < 3.0 * sigma);
}

TEST_CASE("layer stops on reference sequences") {
    // Growing one layer from a 3-gon with +,+,+,-,+,-,-.
    BoundaryTrajectory traj;
    traj.m0 = 3;
    traj.moves = parse_moves("+++-+--");
    traj.values = {3, 4, 5, 6, 5, 6, 5, 4};
    const StripStops stops = strip_stops(traj, 2);
    CHECK(stops.times == std::vector<std::uint64_t>{0, 7});
    CHECK(stops.boundary_at_stop == std::vector<std::int64_t>{3, 4});

    BoundaryTrajectory tiny;
    tiny.m0 = 1;
    tiny.moves = parse_moves("+-");
    tiny.values = {1, 2, 1};
    const StripStops s2 = strip_stops(tiny, 2);
    CHECK(s2.times == std::vector<std::uint64_t>{0, 2});
    CHECK(s2.boundary_at_stop == std::vector<std::int64_t>{1, 1});
    // Hitting-time identity: n_2 - n_1 = M_{n_2} + M_{n_1}.
    CHECK(s2.times[1] - s2.times[0] == 2);

    CHECK_THROWS_AS(strip_stops(tiny, 3), InsufficientTrajectoryError);
}

TEST_CASE("layer-stop identity holds along sampled trajectories") {
    const auto traj = sample_trajectory(1, 200000, 99);
    const StripStops stops = strip_stops(traj, 40);
    for (std::size_t t = 0; t + 1 < stops.count(); ++t)
        CHECK(stops.times[t + 1] - stops.times[t] ==
              static_cast<std::uint64_t>(stops.boundary_at_stop[t] + stops.boundary_at_stop[t + 1]));
}

TEST_CASE("layer kernel closed form") {
    CHECK(strip_kernel_exact(1, 0) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(strip_kernel_exact(1, 1) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(strip_kernel_exact(2, 0) == doctest::Approx(3.0 / 16.0).epsilon(1e-13));
    CHECK_THROWS_AS(strip_kernel_exact(2, -2), std::domain_error);
    CHECK_THROWS_AS(strip_kernel_exact(0, 0), std::domain_error);

    for (std::int64_t m : {1, 2, 3, 5, 10, 50, 200}) {
        const KernelRow row = strip_kernel_row(m);
        double sum = row.residual;
        for (double p : row.probs) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row.residual < 1e-11);
        // Row entries agree with the log-domain point evaluation.
        for (std::size_t i = 0; i < row.probs.size(); i += 7) {
            const auto k = row.k_min + static_cast<std::int64_t>(i);
            CHECK(row.probs[i] ==
                  doctest::Approx(strip_kernel_exact(m, k)).epsilon(1e-11));
        }
    }
}

TEST_CASE("layer kernel rational route matches floating route") {
    for (std::int64_t m = 1; m <= 12; ++m)
        for (std::int64_t k = -m + 1; k <= 40; ++k) {
            const double exact_d = exact::to_double(exact::strip_kernel_rational(m, k));
            CHECK(strip_kernel_exact(m, k) == doctest::Approx(exact_d).epsilon(1e-12));
        }
}

TEST_CASE("brute-force enumeration oracle") {
    SUBCASE("m=1 full") {
        const auto brute = strip_kernel_bruteforce(1, 12);
        CHECK(brute.mass.at(0) == exact::Rational(1, 4));
        CHECK(brute.mass.at(1) == exact::Rational(1, 4));
        CHECK(brute.mass.at(2) == exact::Rational(3, 16));
        for (const auto& [k, p] : brute.mass) CHECK(p == exact::strip_kernel_rational(1, k));
    }
    SUBCASE("m=1 truncated") {
        const auto brute = strip_kernel_bruteforce(1, 2);
        CHECK(brute.mass.size() == 1);
        CHECK(brute.mass.at(0) == exact::Rational(1, 4));
        CHECK(brute.residual == exact::Rational(3, 4));
    }
    SUBCASE("m=3 against the closed form") {
        const auto brute = strip_kernel_bruteforce(3, 14);
        exact::Rational covered = 0;
        for (const auto& [k, p] : brute.mass) {
            CHECK(p == exact::strip_kernel_rational(3, k));
            covered += p;
        }
        CHECK(covered + brute.residual == 1);
    }
}

TEST_CASE("rescaled generator coefficients from the kernel") {
    const auto c1 = discrete_generator_coeffs(4, 16);
    CHECK(c1.x == 1.0);
    CHECK(c1.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c1.sigma2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c1.delta_eps == 0.0);

    const auto c2 = discrete_generator_coeffs(3, 9);
    CHECK(c2.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c2.sigma2 == doctest::Approx(1.0).epsilon(1e-14));

    const auto c3 = discrete_generator_coeffs(5, 4);
    CHECK(c3.x == 2.5);
    CHECK(c3.b == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(c3.sigma2 == doctest::Approx(1.0).epsilon(1e-14));

    // The drift identity in exact arithmetic: m (p+ - p-) = 1.
    for (std::int64_t m = 1; m <= 64; ++m) {
        using exact::Rational;
        const Rational diff = exact::step_prob_rational(m, Move::Plus) -
                              exact::step_prob_rational(m, Move::Minus);
        CHECK(Rational(m) * diff == 1);
    }
}

TEST_CASE("chain positivity under long runs") {
    RngStream rng(5, 0);
    StripDetector det(1);
    for (int i = 0; i < 100000; ++i) {
        det.feed(draw_move(det.boundary(), rng));
        REQUIRE(det.boundary() >= 1);
    }
}

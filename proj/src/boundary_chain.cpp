#include "uict/boundary_chain.hpp"

#include <cmath>

namespace uict {

BoundaryTrajectory sample_trajectory(std::int64_t m0, std::uint64_t n_steps, std::uint64_t seed,
                                     std::uint64_t stream_index) {
    if (m0 < 1) throw std::domain_error("m0 must be >= 1");
    RngStream rng(seed, stream_index);
    BoundaryTrajectory traj;
    traj.m0 = m0;
    traj.seed = seed;
    traj.values.reserve(n_steps + 1);
    traj.moves.reserve(n_steps);
    std::int64_t m = m0;
    traj.values.push_back(m);
    for (std::uint64_t i = 0; i < n_steps; ++i) {
        const Move mv = draw_move(m, rng);
        m += sign(mv);
        if (m < 1) throw std::logic_error("chain left the positive integers");
        traj.moves.push_back(mv);
        traj.values.push_back(m);
    }
    return traj;
}

std::int64_t run_chain_to_step(std::int64_t m0, std::uint64_t n_steps, RngStream& rng) {
    if (m0 < 1) throw std::domain_error("m0 must be >= 1");
    std::int64_t m = m0;
    for (std::uint64_t i = 0; i < n_steps; ++i) {
        // Inlined draw: u < (m+1)/(2m) is a Plus move.
        const double u = rng.uniform();
        m += (u < static_cast<double>(m + 1) / static_cast<double>(2 * m)) ? 1 : -1;
    }
    return m;
}

std::int64_t run_chain_to_stop(std::int64_t m0, std::int64_t target_t, RngStream& rng) {
    if (target_t < 1) throw std::domain_error("target stop index must be >= 1");
    StripDetector det(m0);
    if (target_t == 1) return m0;
    for (;;) {
        const auto t = det.feed(draw_move(det.boundary(), rng));
        if (t && *t == target_t) return det.boundary();
    }
}

StripStops strip_stops(const BoundaryTrajectory& traj, std::int64_t t_max) {
    if (t_max < 1) throw std::domain_error("t_max must be >= 1");
    StripStops stops;
    stops.times.push_back(0);
    stops.boundary_at_stop.push_back(traj.m0);
    StripDetector det(traj.m0);
    for (std::size_t i = 0; i < traj.moves.size(); ++i) {
        if (static_cast<std::int64_t>(stops.count()) >= t_max) break;
        if (det.feed(traj.moves[i])) {
            stops.times.push_back(det.last_stop_step());
            stops.boundary_at_stop.push_back(det.boundary_at_last_stop());
        }
    }
    if (static_cast<std::int64_t>(stops.count()) < t_max)
        throw InsufficientTrajectoryError("trajectory of " + std::to_string(traj.steps()) +
                                          " moves contains only " + std::to_string(stops.count()) +
                                          " layer stops, " + std::to_string(t_max) + " requested");
    return stops;
}

namespace {

double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
           std::lgamma(static_cast<double>(n - k + 1));
}

} // namespace

double strip_kernel_exact(std::int64_t m, std::int64_t k) {
    if (m < 1) throw std::domain_error("m must be >= 1");
    if (k < -m + 1) throw std::domain_error("k must be >= -m+1");
    constexpr double ln2 = 0.6931471805599453;
    const double logp = std::log(static_cast<double>(m + k)) - std::log(static_cast<double>(m)) +
                        log_choose(2 * m + k - 1, m - 1) -
                        static_cast<double>(2 * m + k) * ln2;
    return std::exp(logp);
}

KernelRow strip_kernel_row(std::int64_t m, double tail_bound) {
    KernelRow row;
    row.k_min = -m + 1;
    // Forward recurrence from the k = -m+1 entry (final boundary 1):
    // p(m, -m+1) = 2^-(m+1); p(m, k+1)/p(m, k) = (2m+k) / (2(m+k)).
    double p = std::ldexp(1.0, static_cast<int>(-(m + 1)));
    if (p == 0.0) {
        // Extremely large m: fall back to the log-domain point formula.
        p = strip_kernel_exact(m, -m + 1);
    }
    double cum = 0.0;
    std::int64_t k = -m + 1;
    for (;;) {
        row.probs.push_back(p);
        cum += p;
        if (1.0 - cum < tail_bound && k > 0) break;
        p *= static_cast<double>(2 * m + k) / static_cast<double>(2 * (m + k));
        ++k;
        if (k - row.k_min > 64 * (m + 8)) break; // defensive cap, unreachable in practice
    }
    row.residual = 1.0 - cum;
    return row;
}

namespace {

void enumerate_strips(std::int64_t m_start, std::int64_t minus_needed, std::int64_t boundary,
                      std::int64_t minus_seen, std::int64_t depth, std::int64_t len_cap,
                      exact::Rational prob, BruteForceKernel& out) {
    if (minus_seen == minus_needed) {
        out.mass[boundary - m_start] += prob;
        return;
    }
    if (depth == len_cap) {
        out.residual += prob;
        return;
    }
    // Plus branch.
    enumerate_strips(m_start, minus_needed, boundary + 1, minus_seen, depth + 1, len_cap,
                     prob * exact::step_prob_rational(boundary, Move::Plus), out);
    // Minus branch, impossible at boundary 1.
    if (boundary > 1)
        enumerate_strips(m_start, minus_needed, boundary - 1, minus_seen + 1, depth + 1, len_cap,
                         prob * exact::step_prob_rational(boundary, Move::Minus), out);
}

} // namespace

BruteForceKernel strip_kernel_bruteforce(std::int64_t m, std::int64_t len_cap) {
    if (m < 1) throw std::domain_error("m must be >= 1");
    if (len_cap < 0) throw std::domain_error("len_cap must be >= 0");
    BruteForceKernel out;
    out.len_cap = len_cap;
    out.residual = 0;
    enumerate_strips(m, m, m, 0, 0, len_cap, exact::Rational(1), out);
    return out;
}

GeneratorCoefficients discrete_generator_coeffs(std::int64_t m, std::int64_t n) {
    if (m < 1) throw std::domain_error("m must be >= 1");
    if (n < 1) throw std::domain_error("n must be >= 1");
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double jump = 1.0 / sqrt_n;
    const double p_plus = step_prob(m, Move::Plus);
    const double p_minus = step_prob(m, Move::Minus);
    GeneratorCoefficients c;
    c.x = static_cast<double>(m) / sqrt_n;
    c.b = static_cast<double>(n) * (jump * p_plus - jump * p_minus);
    c.sigma2 = static_cast<double>(n) * (jump * jump * p_plus + jump * jump * p_minus);
    c.delta_eps = 0.0; // both jumps have size exactly 1/sqrt(n), so no mass beyond eps > 1/sqrt(n)
    return c;
}

} // namespace uict

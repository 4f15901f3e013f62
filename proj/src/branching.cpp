#include "uict/branching.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace uict {

double offspring_prob(std::int64_t k) {
    if (k < 0) throw std::domain_error("offspring count must be >= 0");
    return std::ldexp(1.0, static_cast<int>(-(k + 1)));
}

double gw_kernel(std::int64_t l, std::int64_t k) {
    if (l < 1) throw std::domain_error("parent population must be >= 1");
    if (k < 0) throw std::domain_error("child population must be >= 0");
    const double log_choose = std::lgamma(static_cast<double>(k + l)) -
                              std::lgamma(static_cast<double>(k + 1)) -
                              std::lgamma(static_cast<double>(l));
    constexpr double ln2 = 0.6931471805599453;
    return std::exp(log_choose - static_cast<double>(k + l) * ln2);
}

double conditioned_kernel(std::int64_t l, std::int64_t m) {
    if (m < 1) throw std::domain_error("target population must be >= 1");
    return static_cast<double>(m) / static_cast<double>(l) * gw_kernel(l, m);
}

namespace {

constexpr double kLn2 = 0.6931471805599453;

// First representable entry of the reweighted row q(l, .): rows start at
// q(l, 1) = 2^-(l+1), which underflows for l beyond ~1070. Skips the
// sub-normal prefix in log space; the skipped mass is below 1e-290.
std::pair<std::int64_t, double> conditioned_row_start(std::int64_t l) {
    double logq = -static_cast<double>(l + 1) * kLn2;
    std::int64_t m = 1;
    while (logq < -669.0) { // exp(-669) ~ 1e-291
        logq += std::log(static_cast<double>(m + l) / static_cast<double>(2 * m));
        ++m;
    }
    return {m, std::exp(logq)};
}

} // namespace

ConditionedRow conditioned_kernel_row(std::int64_t l, double tail_bound) {
    if (l < 1) throw std::domain_error("parent population must be >= 1");
    if (l > 900)
        throw std::domain_error("row start 2^-(l) underflows; use point evaluations instead");
    ConditionedRow row;
    // Built as the unconditioned row times m/l, with the same operation
    // order as slice_marginal_dp, so the j = 1 marginal is bit-identical.
    double p = std::ldexp(1.0, static_cast<int>(-l)); // gw(l, 0)
    std::int64_t m = 0;
    double cum = 0.0;
    for (;;) {
        if (m >= 1) {
            const double q = p * static_cast<double>(m) / static_cast<double>(l);
            row.probs.push_back(q);
            cum += q;
            if (1.0 - cum < tail_bound && m > l) break;
        }
        p *= static_cast<double>(m + l) / static_cast<double>(2 * (m + 1));
        ++m;
    }
    row.residual = 1.0 - cum;
    return row;
}

SliceMarginal slice_marginal_dp(std::int64_t m0, std::int64_t j, std::size_t trunc) {
    if (m0 < 1) throw std::domain_error("m0 must be >= 1");
    if (j < 1) throw std::domain_error("generation count must be >= 1");
    if (trunc < static_cast<std::size_t>(m0) + 2) trunc = static_cast<std::size_t>(m0) + 2;

    // Unconditioned population distribution; index 0 is the extinct mass.
    std::vector<double> dist(trunc, 0.0);
    dist[static_cast<std::size_t>(m0)] = 1.0;

    for (std::int64_t step = 0; step < j; ++step) {
        std::vector<double> next(trunc, 0.0);
        next[0] = dist[0];
        for (std::size_t l = 1; l < trunc; ++l) {
            const double w = dist[l];
            if (w <= 0.0) continue;
            // Row of gw(l, .) by recurrence: p(l, 0) = 2^-l,
            // p(l, k+1)/p(l, k) = (k+l) / (2(k+1)).
            double p = std::ldexp(1.0, -static_cast<int>(l));
            double row_cum = 0.0;
            std::size_t k = 0;
            while (true) {
                if (p > 0.0 && k < trunc) next[k] += w * p;
                row_cum += p;
                if (1.0 - row_cum < 1e-16 && k > l) break;
                p *= static_cast<double>(k + l) / static_cast<double>(2 * (k + 1));
                ++k;
                if (k >= trunc + 8 * (l + 64)) break;
            }
        }
        dist.swap(next);
    }

    SliceMarginal out;
    out.m0 = m0;
    out.generations = j;
    out.probs.assign(trunc, 0.0);
    double total = 0.0;
    for (std::size_t m = 1; m < trunc; ++m) {
        out.probs[m] = dist[m] * static_cast<double>(m) / static_cast<double>(m0);
        total += out.probs[m];
    }
    // The reweighted marginal sums to one exactly; whatever is missing fell
    // past the truncation cap.
    out.residual = 1.0 - total;
    while (out.probs.size() > 1 && out.probs.back() == 0.0) out.probs.pop_back();
    return out;
}

std::vector<std::int64_t> sample_conditioned_chain(std::int64_t m0, std::int64_t t,
                                                   std::uint64_t seed,
                                                   std::uint64_t stream_index) {
    if (m0 < 1) throw std::domain_error("m0 must be >= 1");
    if (t < 0) throw std::domain_error("step count must be >= 0");
    RngStream rng(seed, stream_index);
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(t) + 1);
    std::int64_t l = m0;
    out.push_back(l);
    for (std::int64_t step = 0; step < t; ++step) {
        const double u = rng.uniform();
        // Inverse CDF along the row recurrence, capped at the 1e-14 tail.
        auto [m, q] = conditioned_row_start(l);
        double cum = q;
        while (cum < u) {
            if (1.0 - cum < 1e-14 && m > l) break;
            q *= static_cast<double>(m + l) / static_cast<double>(2 * m);
            ++m;
            cum += q;
        }
        l = m;
        out.push_back(l);
    }
    return out;
}

} // namespace uict

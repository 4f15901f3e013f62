#ifndef UICT_BRANCHING_HPP
#define UICT_BRANCHING_HPP

#include <cstdint>
#include <vector>

#include "uict/rng.hpp"

namespace uict {

/// Offspring law p_k = 2^-(k+1), k >= 0 (critical, mean one, variance two).
double offspring_prob(std::int64_t k);

/// One-generation population transition C(k+l-1, k) / 2^(k+l) from l parents.
double gw_kernel(std::int64_t l, std::int64_t k);

/// Population-reweighted transition (m/l) gw(l, m): the chain of layer sizes.
/// Never steps to zero; rows sum to one.
double conditioned_kernel(std::int64_t l, std::int64_t m);

/// Row of the reweighted kernel over m = 1, 2, ... truncated at tail_bound.
struct ConditionedRow {
    std::vector<double> probs; // probs[i] is the mass at m = i + 1
    double residual = 0.0;
};
ConditionedRow conditioned_kernel_row(std::int64_t l, double tail_bound = 1e-14);

/// Distribution of the layer size j levels above a rooted boundary of length
/// m0: j unconditioned convolutions followed by the m/m0 reweighting.
/// probs[i] is the mass at m = i (index 0 always carries none after the
/// reweighting); the truncated tail is reported in residual.
struct SliceMarginal {
    std::int64_t m0 = 1;
    std::int64_t generations = 0;
    std::vector<double> probs;
    double residual = 0.0;
};
SliceMarginal slice_marginal_dp(std::int64_t m0, std::int64_t j, std::size_t trunc = 4096);

/// Samples the reweighted chain for t steps by inverse CDF; out[j] is the
/// population after j steps, out[0] = m0.
std::vector<std::int64_t> sample_conditioned_chain(std::int64_t m0, std::int64_t t,
                                                   std::uint64_t seed,
                                                   std::uint64_t stream_index = 0);

} // namespace uict

#endif

#ifndef UICT_EXACT_HPP
#define UICT_EXACT_HPP

#include <cstdint>
#include <span>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "uict/moves.hpp"

namespace uict::exact {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;
    }
    return result;
}

inline Rational pow2_inv(std::int64_t e) {
    Int denom = Int(1) << e;
    return Rational(1, denom);
}

/// One-step move probability (m +/- 1) / (2m) as an exact rational.
inline Rational step_prob_rational(std::int64_t m, Move move) {
    if (m < 1) throw std::domain_error("boundary length must be >= 1");
    return Rational(m + sign(move), 2 * m);
}

/// Probability of a whole move sequence started from boundary length m0.
/// Zero if the sequence is not permitted (a Minus at boundary 1).
inline Rational path_probability(std::int64_t m0, std::span<const Move> moves) {
    if (m0 < 1) throw std::domain_error("m0 must be >= 1");
    Rational p = 1;
    std::int64_t m = m0;
    for (Move mv : moves) {
        if (m == 1 && mv == Move::Minus) return Rational(0);
        p *= step_prob_rational(m, mv);
        m += sign(mv);
    }
    return p;
}

/// Layer-completion kernel ((m+k)/m) C(2m+k-1, m-1) / 2^(2m+k), exact.
inline Rational strip_kernel_rational(std::int64_t m, std::int64_t k) {
    if (m < 1) throw std::domain_error("m must be >= 1");
    if (k < -m + 1) throw std::domain_error("k must be >= -m+1");
    Rational r(m + k, m);
    r *= Rational(binomial(2 * m + k - 1, m - 1));
    r *= pow2_inv(2 * m + k);
    return r;
}

/// Branching transition C(k+l-1, k) / 2^(k+l), exact.
inline Rational gw_kernel_rational(std::int64_t l, std::int64_t k) {
    if (l < 1) throw std::domain_error("l must be >= 1");
    if (k < 0) throw std::domain_error("k must be >= 0");
    return Rational(binomial(k + l - 1, k)) * pow2_inv(k + l);
}

/// Population-reweighted branching transition (m/l) gw(l, m), exact.
inline Rational conditioned_kernel_rational(std::int64_t l, std::int64_t m) {
    if (m < 1) throw std::domain_error("m must be >= 1");
    return Rational(m, l) * gw_kernel_rational(l, m);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace uict::exact

#endif

#ifndef UICT_EXPERIMENTS_HPP
#define UICT_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace uict {

/// Scale and reproducibility knobs for the verification suite. Quick mode
/// shrinks every Monte Carlo sample count tenfold and loosens the
/// statistical tolerances by sqrt(10) to match the extra sampling noise;
/// exact (rational-arithmetic) checks are unaffected.
struct VerifyOptions {
    bool quick = false;
    std::uint64_t seed = 0x5EED2026ull;
};

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

CriterionResult check_kernel_bruteforce_identity(const VerifyOptions& opt);
CriterionResult check_kernel_branching_identity(const VerifyOptions& opt);
CriterionResult check_strip_distribution(const VerifyOptions& opt);
CriterionResult check_slice_marginals(const VerifyOptions& opt);
CriterionResult check_martingale_identities(const VerifyOptions& opt);
CriterionResult check_fractal_dimension(const VerifyOptions& opt);
CriterionResult check_growth_clock_limit(const VerifyOptions& opt);
CriterionResult check_slice_clock_limit(const VerifyOptions& opt);
CriterionResult check_time_change_duality(const VerifyOptions& opt);
CriterionResult check_duality_ratio(const VerifyOptions& opt);
CriterionResult check_bijection_suite(const VerifyOptions& opt);
CriterionResult check_generator_coefficients(const VerifyOptions& opt);

/// Runs all twelve checks in order, printing one PASS/FAIL line each.
std::vector<CriterionResult> run_verification_suite(const VerifyOptions& opt, bool print_lines);

} // namespace uict

#endif

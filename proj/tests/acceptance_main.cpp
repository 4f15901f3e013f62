// Acceptance suite: runs every verification criterion at full scale and
// prints one PASS/FAIL line per criterion. Exit status 0 only if all pass.
//
// Usage: uict_acceptance [--quick] [--seed N]

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "uict/experiments.hpp"

int main(int argc, char** argv) {
    uict::VerifyOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0)
            opt.quick = true;
        else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            opt.seed = std::strtoull(argv[++i], nullptr, 10);
    }
    std::printf("verification suite (%s scale, seed %llu)\n", opt.quick ? "quick" : "full",
                static_cast<unsigned long long>(opt.seed));
    const auto results = uict::run_verification_suite(opt, true);
    int failures = 0;
    double total = 0.0;
    for (const auto& r : results) {
        failures += !r.pass;
        total += r.seconds;
    }
    std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(results.size()) - failures,
                results.size(), total);
    return failures == 0 ? 0 : 1;
}

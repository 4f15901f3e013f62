#include "uict/diffusion.hpp"

#include <cmath>
#include <stdexcept>

#include "uict/boundary_chain.hpp"
#include "uict/rng.hpp"
#include "uict/util.hpp"

namespace uict {

double SdePath::at_time(double t) const {
    if (values.empty()) throw std::invalid_argument("empty path");
    if (t <= 0.0) return values.front();
    const double pos = t / dt;
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

double sde_step(const SdeSpec& spec, double x, double dt, double sqrt_dt, RngStream& rng,
                double noise_amplitude) {
    const double sigma = spec.noise(x) * noise_amplitude;
    x = spec.drift_flow(x, dt);
    if (sigma != 0.0) x += sigma * sqrt_dt * rng.normal();
    return std::max(std::fabs(x), kEpsilonFloor);
}

SdePath euler_path(const SdeSpec& spec, double x0, double dt, double horizon, std::uint64_t seed,
                   std::uint64_t stream_index, double noise_amplitude) {
    if (x0 < 0.0) throw std::domain_error("x0 must be >= 0");
    if (dt <= 0.0 || horizon < dt) throw std::domain_error("need dt > 0 and horizon >= dt");
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    RngStream rng(seed, stream_index);
    SdePath path;
    path.dt = dt;
    path.values.reserve(steps + 1);
    double x = x0;
    path.values.push_back(x);
    const double sqrt_dt = std::sqrt(dt);
    for (std::size_t i = 0; i < steps; ++i) {
        x = sde_step(spec, x, dt, sqrt_dt, rng, noise_amplitude);
        path.values.push_back(x);
    }
    return path;
}

double euler_terminal(const SdeSpec& spec, double x0, double dt, double horizon, std::uint64_t seed,
                      std::uint64_t stream_index) {
    if (x0 < 0.0) throw std::domain_error("x0 must be >= 0");
    if (dt <= 0.0 || horizon < dt) throw std::domain_error("need dt > 0 and horizon >= dt");
    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    RngStream rng(seed, stream_index);
    double x = x0;
    const double sqrt_dt = std::sqrt(dt);
    for (std::size_t i = 0; i < steps; ++i) x = sde_step(spec, x, dt, sqrt_dt, rng);
    return x;
}

TimeChangeResult time_change(const SdePath& path, const std::function<double(double)>& g,
                             double s_step, double s_horizon) {
    if (path.values.size() < 2) throw std::invalid_argument("path too short");
    if (s_step <= 0.0 || s_horizon < 0.0) throw std::domain_error("bad target grid");

    // Cumulative clock over the source grid. The rate is taken at the
    // midpoint of each step's endpoint values: for the 1/(2x) clock this
    // reproduces the exact integral across the singular near-zero start,
    // where the left-endpoint rule overshoots by orders of magnitude.
    std::vector<double> clock(path.values.size());
    clock[0] = 0.0;
    for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
        const double gi = g(0.5 * (path.values[i] + path.values[i + 1]));
        if (!(gi > 0.0)) throw std::domain_error("clock rate must be positive on the path");
        clock[i + 1] = clock[i] + gi * path.dt;
    }

    TimeChangeResult result;
    result.clock_end = clock.back();
    result.path.dt = s_step;
    const auto n_targets = static_cast<std::size_t>(std::llround(s_horizon / s_step));
    result.path.values.reserve(n_targets + 1);
    std::size_t seg = 0;
    for (std::size_t j = 0; j <= n_targets; ++j) {
        const double s = static_cast<double>(j) * s_step;
        if (s > clock.back()) {
            result.truncated = true;
            break;
        }
        while (seg + 1 < clock.size() && clock[seg + 1] < s) ++seg;
        // Invert the clock on segment [seg, seg+1] and interpolate the state.
        const double span = clock[seg + 1] - clock[seg];
        const double frac = span > 0.0 ? (s - clock[seg]) / span : 0.0;
        const double u = (static_cast<double>(seg) + frac) * path.dt;
        result.path.values.push_back(path.at_time(u));
    }
    return result;
}

std::vector<double> rescaled_growth_marginal(std::int64_t n, double u, std::int64_t m0_raw,
                                             std::size_t samples, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (u < 0.0) throw std::domain_error("u must be >= 0");
    const auto steps = static_cast<std::uint64_t>(u * static_cast<double>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    return parallel_map_indexed<double>(samples, [&](std::size_t i) {
        RngStream rng(seed, i);
        return static_cast<double>(run_chain_to_step(m0_raw, steps, rng)) * scale;
    });
}

std::vector<double> rescaled_slice_marginal(std::int64_t t, double s, std::size_t samples,
                                            std::uint64_t seed, std::int64_t m0) {
    if (t < 1) throw std::domain_error("t must be >= 1");
    if (s < 0.0) throw std::domain_error("s must be >= 0");
    const auto stop_index = std::max<std::int64_t>(1, static_cast<std::int64_t>(s * static_cast<double>(t)));
    const double scale = 1.0 / static_cast<double>(t);
    return parallel_map_indexed<double>(samples, [&](std::size_t i) {
        RngStream rng(seed, i);
        return static_cast<double>(run_chain_to_stop(m0, stop_index, rng)) * scale;
    });
}

} // namespace uict

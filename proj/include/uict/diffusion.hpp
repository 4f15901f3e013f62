#ifndef UICT_DIFFUSION_HPP
#define UICT_DIFFUSION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "uict/rng.hpp"

namespace uict {

/// Lower reflecting bound for discretized paths; keeps the 1/x drift and the
/// sqrt(2x) volatility evaluable after a noise excursion below zero.
inline constexpr double kEpsilonFloor = 1e-6;

/// The two reference diffusions:
///   Growth: dX = (1/X) du + dB      (boundary length on the move clock)
///   Slice:  dX = 2 ds + sqrt(2X) dB (boundary length on the layer clock)
enum class SdeKind { Growth, Slice };

struct SdeSpec {
    SdeKind kind = SdeKind::Growth;

    const char* name() const { return kind == SdeKind::Growth ? "growth" : "slice"; }
    double drift(double x) const { return kind == SdeKind::Growth ? 1.0 / x : 2.0; }
    double noise(double x) const {
        return kind == SdeKind::Growth ? 1.0 : std::sqrt(2.0 * std::max(x, 0.0));
    }
    /// Exact flow of the drift ODE over one step; used as the deterministic
    /// half of the splitting step so the 1/x drift cannot overshoot near 0.
    double drift_flow(double x, double dt) const {
        return kind == SdeKind::Growth ? std::sqrt(x * x + 2.0 * dt) : x + 2.0 * dt;
    }

    static SdeSpec growth() { return {SdeKind::Growth}; }
    static SdeSpec slice() { return {SdeKind::Slice}; }
};

/// Discretized sample path on a uniform grid: values[i] is the state at
/// time i * dt; values[0] is the start point.
struct SdePath {
    double dt = 1e-4;
    std::vector<double> values;

    double horizon() const { return dt * static_cast<double>(values.size() - 1); }
    double at_time(double t) const; // linear interpolation between grid points
};

/// Splitting scheme: exact drift flow, then the diffusion increment
/// sigma(x) sqrt(dt) N(0,1), then reflection at kEpsilonFloor. With the
/// noise amplitude forced to zero the path follows the drift ODE exactly.
SdePath euler_path(const SdeSpec& spec, double x0, double dt, double horizon, std::uint64_t seed,
                   std::uint64_t stream_index = 0, double noise_amplitude = 1.0);

/// One discretization step of the scheme above; shared by euler_path and the
/// terminal-only samplers so both draw identical randomness.
double sde_step(const SdeSpec& spec, double x, double dt, double sqrt_dt, RngStream& rng,
                double noise_amplitude = 1.0);

/// Terminal value only, without storing the path.
double euler_terminal(const SdeSpec& spec, double x0, double dt, double horizon, std::uint64_t seed,
                      std::uint64_t stream_index = 0);

/// Result of re-parameterizing a path by the clock tau(u) = sum g(x_i) dt.
struct TimeChangeResult {
    SdePath path;          // sampled on a uniform grid in the new time
    bool truncated = false; // the source path's clock ended before s_horizon
    double clock_end = 0.0; // total clock time covered by the source path
};

/// Runs the path on its new clock: inverts the cumulative clock by linear
/// interpolation and resamples onto a uniform grid of step s_step up to
/// s_horizon. g must be positive along the path.
TimeChangeResult time_change(const SdePath& path, const std::function<double(double)>& g,
                             double s_step, double s_horizon);

/// Samples of M_[u n] / sqrt(n) over independent chains started at m0_raw.
std::vector<double> rescaled_growth_marginal(std::int64_t n, double u, std::int64_t m0_raw,
                                             std::size_t samples, std::uint64_t seed);

/// Samples of M_{n_[s t]} / t over independent chains (layer-clock scaling).
std::vector<double> rescaled_slice_marginal(std::int64_t t, double s, std::size_t samples,
                                            std::uint64_t seed, std::int64_t m0 = 1);

} // namespace uict

#endif

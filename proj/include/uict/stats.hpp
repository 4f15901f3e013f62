#ifndef UICT_STATS_HPP
#define UICT_STATS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "uict/boundary_chain.hpp"
#include "uict/moves.hpp"

namespace uict {

/// Two-sample Kolmogorov-Smirnov statistic (sup distance of the ECDFs).
double ks_distance(std::vector<double> sample_a, std::vector<double> sample_b);

/// One-sample variant against a CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

struct ChiSquareResult {
    double statistic = 0.0;
    std::int64_t dof = 0;
    double p_value = 1.0;
    std::int64_t pooled_bins = 0;
};

/// Pearson goodness-of-fit with adjacent-bin pooling: bins are merged until
/// each pooled bin has expected count >= min_expected; model residual mass
/// (and any observations beyond the model's support) lands in the final bin.
/// observed[i] pairs with model_probs[i].
ChiSquareResult chi_square(const std::vector<std::int64_t>& observed,
                           const std::vector<double>& model_probs, double residual,
                           double min_expected = 5.0);

/// Least-squares slope of y over x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

struct FractalConfig {
    std::size_t trajectories = 50;
    std::int64_t t_max = 4096;
    std::int64_t t_min = 64;
    std::int64_t m0 = 1;
    std::uint64_t seed = 1;
};

/// Scaling of the layer-stop times: per trajectory, n_t is recorded on the
/// dyadic grid t in [t_min, t_max] and log n_t is regressed on log t. The
/// two bound ratios n_t log^2 t / t^2 and n_t / (t^2 log^2 t) are tracked
/// per trajectory to witness their boundedness.
struct ScalingReport {
    std::vector<std::int64_t> t_grid;
    std::vector<std::vector<std::uint64_t>> stop_times; // one row per trajectory
    std::vector<double> slopes;
    double slope_median = 0.0;
    double slope_p05 = 0.0;
    double slope_p95 = 0.0;
    double ratio_lower_min = 0.0;  // min over grid and trajectories of n_t log^2 t / t^2
    double ratio_lower_max = 0.0;  // max of the same ratio
    double ratio_upper_min = 0.0;  // min of n_t / (t^2 log^2 t)
    double ratio_upper_max = 0.0;  // max of the same ratio
};
ScalingReport fractal_dimension(const FractalConfig& config);

/// Report for a single deterministic or recorded chain: stop times on the
/// dyadic grid, for the injected-chain control cases.
ScalingReport scaling_report_from_moves(std::int64_t m0, const MoveSequence& moves,
                                        std::int64_t t_min, std::int64_t t_max);

/// Running ratio t_n / sum_{i<n} 1/(2 M_i) with t_n = max{t : n_t <= n},
/// evaluated at dyadic step counts and at the final step.
struct DualityRatioSeries {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> ratios;

    double final_ratio() const { return ratios.empty() ? 0.0 : ratios.back(); }
};
DualityRatioSeries duality_ratio(const BoundaryTrajectory& traj);

/// Exact one-step conditional expectations of the two chain invariants
///   Q_n = M_n^2 - 3n          (increment mean: E[(m+xi)^2 - m^2 - 3])
///   H_n = M_n - sum_{i<n} 1/M_i (increment mean: E[xi] - 1/m)
/// evaluated from step_prob at each grid point. Both vanish identically;
/// the report carries the worst floating-point residual and the exact
/// rational check.
struct MartingaleReport {
    std::vector<std::int64_t> m_grid;
    double max_abs_residual_quadratic = 0.0;
    double max_abs_residual_harmonic = 0.0;
    bool rational_zero = false; // both residuals exactly zero over the grid
};
MartingaleReport martingale_residuals(const std::vector<std::int64_t>& m_grid);

/// Default residual grid: all m <= dense_upto plus log-spaced points to m_max.
std::vector<std::int64_t> martingale_grid(std::int64_t dense_upto, std::int64_t m_max);

/// Medians over trajectories of the two vanishing normalizations
///   M_n / sqrt(n log n) and |M_n - sum_{i<n} 1/M_i| / (sqrt(n) log n)
/// at the given checkpoints; both drift to zero as n grows.
struct NormalizedTrend {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> median_boundary; // M_n / sqrt(n log n)
    std::vector<double> median_centered; // |M_n - sum 1/M_i| / (sqrt(n) log n)
};
NormalizedTrend martingale_trend(const std::vector<std::uint64_t>& checkpoints,
                                 std::size_t trajectories, std::int64_t m0, std::uint64_t seed);

} // namespace uict

#endif

#include "uict/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "uict/exact.hpp"
#include "uict/rng.hpp"
#include "uict/util.hpp"

namespace uict {

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

ChiSquareResult chi_square(const std::vector<std::int64_t>& observed,
                           const std::vector<double>& model_probs, double residual,
                           double min_expected) {
    if (observed.size() != model_probs.size())
        throw std::invalid_argument("observed and model must have equal length");
    std::int64_t total = 0;
    for (std::int64_t c : observed) total += c;
    if (total == 0) throw std::invalid_argument("empty histogram");
    double model_total = residual;
    for (double p : model_probs) model_total += p;
    if (std::fabs(model_total - 1.0) > 1e-9)
        throw std::invalid_argument("model probabilities and residual must sum to one");

    // Pool adjacent bins until each pooled bin is worth at least min_expected.
    std::vector<std::pair<double, double>> pooled; // (observed, expected)
    double acc_obs = 0.0, acc_exp = 0.0;
    const double n = static_cast<double>(total);
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double expect = n * model_probs[i];
        if (i + 1 == observed.size()) expect += n * residual;
        acc_obs += static_cast<double>(observed[i]);
        acc_exp += expect;
        if (acc_exp >= min_expected) {
            pooled.emplace_back(acc_obs, acc_exp);
            acc_obs = acc_exp = 0.0;
        }
    }
    if (acc_exp > 0.0 || acc_obs > 0.0) {
        if (!pooled.empty()) {
            pooled.back().first += acc_obs;
            pooled.back().second += acc_exp;
        } else {
            pooled.emplace_back(acc_obs, acc_exp);
        }
    }

    ChiSquareResult r;
    r.pooled_bins = static_cast<std::int64_t>(pooled.size());
    r.dof = r.pooled_bins - 1;
    for (const auto& [obs, expect] : pooled) {
        const double diff = obs - expect;
        r.statistic += diff * diff / expect;
    }
    r.p_value = r.dof > 0
                    ? boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, r.statistic / 2.0)
                    : 1.0;
    return r;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

std::vector<std::int64_t> dyadic_grid(std::int64_t t_min, std::int64_t t_max) {
    if (t_min < 2 || t_max < t_min) throw std::domain_error("need 2 <= t_min <= t_max");
    std::vector<std::int64_t> grid;
    for (std::int64_t t = t_min; t <= t_max; t *= 2) grid.push_back(t);
    return grid;
}

struct TrajectoryScaling {
    std::vector<std::uint64_t> stop_times;
    double slope = 0.0;
    double rl_min = 0.0, rl_max = 0.0, ru_min = 0.0, ru_max = 0.0;
};

template <class MoveSource>
TrajectoryScaling scale_one(std::int64_t m0, const std::vector<std::int64_t>& grid,
                            MoveSource&& next_move) {
    TrajectoryScaling out;
    StripDetector det(m0);
    std::size_t gi = 0;
    while (gi < grid.size()) {
        const auto stop = det.feed(next_move(det.boundary()));
        if (stop && *stop == grid[gi]) {
            out.stop_times.push_back(det.last_stop_step());
            ++gi;
        }
    }
    std::vector<double> lx, ly;
    out.rl_min = out.ru_min = 1e300;
    out.rl_max = out.ru_max = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = static_cast<double>(grid[i]);
        const double nt = static_cast<double>(out.stop_times[i]);
        lx.push_back(std::log(t));
        ly.push_back(std::log(nt));
        const double lg2 = std::log(t) * std::log(t);
        const double rl = nt * lg2 / (t * t);
        const double ru = nt / (t * t * lg2);
        out.rl_min = std::min(out.rl_min, rl);
        out.rl_max = std::max(out.rl_max, rl);
        out.ru_min = std::min(out.ru_min, ru);
        out.ru_max = std::max(out.ru_max, ru);
    }
    out.slope = least_squares_slope(lx, ly);
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

ScalingReport assemble_report(std::vector<std::int64_t> grid, std::vector<TrajectoryScaling> rows) {
    ScalingReport report;
    report.t_grid = std::move(grid);
    report.ratio_lower_min = report.ratio_upper_min = 1e300;
    for (auto& row : rows) {
        report.stop_times.push_back(std::move(row.stop_times));
        report.slopes.push_back(row.slope);
        report.ratio_lower_min = std::min(report.ratio_lower_min, row.rl_min);
        report.ratio_lower_max = std::max(report.ratio_lower_max, row.rl_max);
        report.ratio_upper_min = std::min(report.ratio_upper_min, row.ru_min);
        report.ratio_upper_max = std::max(report.ratio_upper_max, row.ru_max);
    }
    report.slope_median = median(report.slopes);
    report.slope_p05 = quantile(report.slopes, 0.05);
    report.slope_p95 = quantile(report.slopes, 0.95);
    return report;
}

} // namespace

ScalingReport fractal_dimension(const FractalConfig& config) {
    if (config.t_min < 2 || config.t_max < config.t_min)
        throw std::domain_error("need 2 <= t_min <= t_max");
    const auto grid = dyadic_grid(config.t_min, config.t_max);
    auto rows = parallel_map_indexed<TrajectoryScaling>(config.trajectories, [&](std::size_t i) {
        RngStream rng(config.seed, i);
        return scale_one(config.m0, grid,
                         [&rng](std::int64_t boundary) { return draw_move(boundary, rng); });
    });
    return assemble_report(grid, std::move(rows));
}

ScalingReport scaling_report_from_moves(std::int64_t m0, const MoveSequence& moves,
                                        std::int64_t t_min, std::int64_t t_max) {
    const auto grid = dyadic_grid(t_min, t_max);
    std::size_t pos = 0;
    auto row = scale_one(m0, grid, [&](std::int64_t) {
        if (pos >= moves.size()) throw InsufficientTrajectoryError("move sequence exhausted");
        return moves[pos++];
    });
    return assemble_report(grid, {std::move(row)});
}

DualityRatioSeries duality_ratio(const BoundaryTrajectory& traj) {
    if (traj.steps() < 8) throw std::invalid_argument("trajectory too short");
    DualityRatioSeries series;
    StripDetector det(traj.m0);
    double harmonic = 0.0;
    std::uint64_t next_checkpoint = 8;
    for (std::size_t i = 0; i < traj.moves.size(); ++i) {
        harmonic += 0.5 / static_cast<double>(traj.values[i]);
        det.feed(traj.moves[i]);
        const std::uint64_t n = i + 1;
        if (n == next_checkpoint || i + 1 == traj.moves.size()) {
            series.checkpoints.push_back(n);
            series.ratios.push_back(static_cast<double>(det.stop_count()) / harmonic);
            if (n == next_checkpoint) next_checkpoint *= 2;
        }
    }
    return series;
}

std::vector<std::int64_t> martingale_grid(std::int64_t dense_upto, std::int64_t m_max) {
    std::vector<std::int64_t> grid;
    for (std::int64_t m = 1; m <= std::min(dense_upto, m_max); ++m) grid.push_back(m);
    double x = static_cast<double>(dense_upto);
    while (grid.back() < m_max) {
        x *= 1.01;
        const auto m = std::min<std::int64_t>(static_cast<std::int64_t>(x), m_max);
        if (m > grid.back()) grid.push_back(m);
    }
    return grid;
}

MartingaleReport martingale_residuals(const std::vector<std::int64_t>& m_grid) {
    MartingaleReport report;
    report.m_grid = m_grid;
    report.rational_zero = true;
    for (const std::int64_t m : m_grid) {
        const double pp = step_prob(m, Move::Plus);
        const double pm = step_prob(m, Move::Minus);
        const double md = static_cast<double>(m);
        const double quad = pp * (2.0 * md - 2.0) + pm * (-2.0 * md - 2.0);
        const double harm = (pp - pm) - 1.0 / md;
        report.max_abs_residual_quadratic =
            std::max(report.max_abs_residual_quadratic, std::fabs(quad));
        report.max_abs_residual_harmonic =
            std::max(report.max_abs_residual_harmonic, std::fabs(harm));

        using exact::Rational;
        const Rational qp = exact::step_prob_rational(m, Move::Plus);
        const Rational qm = exact::step_prob_rational(m, Move::Minus);
        const Rational quad_r = qp * Rational(2 * m - 2) + qm * Rational(-2 * m - 2);
        const Rational harm_r = (qp - qm) - Rational(1, m);
        if (quad_r != 0 || harm_r != 0) report.rational_zero = false;
    }
    return report;
}

NormalizedTrend martingale_trend(const std::vector<std::uint64_t>& checkpoints,
                                 std::size_t trajectories, std::int64_t m0, std::uint64_t seed) {
    if (checkpoints.empty()) throw std::invalid_argument("need checkpoints");
    const std::uint64_t n_max = *std::max_element(checkpoints.begin(), checkpoints.end());
    struct Row {
        std::vector<double> boundary, centered;
    };
    auto rows = parallel_map_indexed<Row>(trajectories, [&](std::size_t idx) {
        RngStream rng(seed, idx);
        Row row;
        std::int64_t m = m0;
        double harmonic = 0.0;
        std::size_t ci = 0;
        std::vector<std::uint64_t> sorted(checkpoints);
        std::sort(sorted.begin(), sorted.end());
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            harmonic += 1.0 / static_cast<double>(m);
            m += sign(draw_move(m, rng));
            while (ci < sorted.size() && n == sorted[ci]) {
                const double nd = static_cast<double>(n);
                row.boundary.push_back(static_cast<double>(m) / std::sqrt(nd * std::log(nd)));
                row.centered.push_back(std::fabs(static_cast<double>(m) - harmonic) /
                                       (std::sqrt(nd) * std::log(nd)));
                ++ci;
            }
        }
        return row;
    });
    NormalizedTrend trend;
    trend.checkpoints = checkpoints;
    std::sort(trend.checkpoints.begin(), trend.checkpoints.end());
    for (std::size_t c = 0; c < trend.checkpoints.size(); ++c) {
        std::vector<double> b, x;
        for (const Row& row : rows) {
            b.push_back(row.boundary[c]);
            x.push_back(row.centered[c]);
        }
        trend.median_boundary.push_back(median(b));
        trend.median_centered.push_back(median(x));
    }
    return trend;
}

} // namespace uict

#include "uict/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace uict::io {

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(const AlmostCausalTriangulation& tri) {
    json j;
    j["kind"] = "almost_causal";
    j["m0"] = tri.m0();
    j["height"] = tri.height();
    j["slice_sizes"] = tri.slice_sizes();
    json strips = json::array();
    for (const GrownStrip& s : tri.strips())
        strips.push_back({{"defects", s.defects}, {"down_degrees", s.down_degrees}});
    j["strips"] = std::move(strips);
    if (tri.partial_strip()) {
        const PartialStrip& p = *tri.partial_strip();
        j["partial_strip"] = {{"defects", p.defects},
                              {"plus_runs", p.plus_runs},
                              {"current_plus", p.current_plus},
                              {"upper_count", p.upper_count}};
    }
    const auto [from, to] = tri.marked_edge();
    j["marked_edge"] = {{"from", {{"slice", from.slice}, {"position", from.position}}},
                        {"to", {{"slice", to.slice}, {"position", to.position}}}};
    j["moves"] = format_moves(tri.source_moves());
    return j;
}

json to_json(const CausalTriangulation& tri) {
    json j;
    j["kind"] = "causal";
    j["m0"] = tri.m0();
    j["height"] = tri.height();
    j["slice_sizes"] = tri.slice_sizes();
    json strips = json::array();
    for (const CausalStrip& s : tri.strips())
        strips.push_back({{"down_degrees", s.down_degrees}, {"shift", s.shift}});
    j["strips"] = std::move(strips);
    const auto [from, to] = tri.root_edge();
    j["root"] = {{"vertex", {{"slice", tri.root_vertex().slice}, {"position", tri.root_vertex().position}}},
                 {"edge", {{"slice", from.slice}, {"from", from.position}, {"to", to.position}}}};
    return j;
}

AlmostCausalTriangulation almost_causal_from_json(const json& j) {
    if (j.at("kind") != "almost_causal") throw std::invalid_argument("kind must be almost_causal");
    // Rebuilding from the recorded moves revalidates every invariant.
    auto tri = build_from_moves(j.at("m0").get<std::int64_t>(),
                                parse_moves(j.at("moves").get<std::string>()));
    if (j.at("slice_sizes").get<std::vector<std::uint32_t>>() != tri.slice_sizes())
        throw std::invalid_argument("recorded layer sizes do not match the moves");
    return tri;
}

CausalTriangulation causal_from_json(const json& j) {
    if (j.at("kind") != "causal") throw std::invalid_argument("kind must be causal");
    std::vector<CausalStrip> strips;
    for (const auto& s : j.at("strips")) {
        CausalStrip cs;
        cs.down_degrees = s.at("down_degrees").get<std::vector<std::uint32_t>>();
        cs.shift = s.at("shift").get<std::uint32_t>();
        strips.push_back(std::move(cs));
    }
    CausalTriangulation tri(j.at("m0").get<std::int64_t>(),
                            j.at("slice_sizes").get<std::vector<std::uint32_t>>(),
                            std::move(strips));
    if (auto report = validate_causal(tri); !report.ok)
        throw std::invalid_argument("invalid causal triangulation: " + report.message);
    return tri;
}

json to_json(const ScalingReport& report) {
    json j;
    j["t_grid"] = report.t_grid;
    j["stop_times"] = report.stop_times;
    j["slopes"] = report.slopes;
    j["slope_median"] = report.slope_median;
    j["slope_p05"] = report.slope_p05;
    j["slope_p95"] = report.slope_p95;
    j["ratio_lower_min"] = report.ratio_lower_min;
    j["ratio_lower_max"] = report.ratio_lower_max;
    j["ratio_upper_min"] = report.ratio_upper_min;
    j["ratio_upper_max"] = report.ratio_upper_max;
    return j;
}

json to_json(const DualityRatioSeries& series) {
    return {{"checkpoints", series.checkpoints},
            {"ratios", series.ratios},
            {"final_ratio", series.final_ratio()}};
}

json to_json(const MartingaleReport& report) {
    return {{"grid_size", report.m_grid.size()},
            {"m_min", report.m_grid.front()},
            {"m_max", report.m_grid.back()},
            {"max_abs_residual_quadratic", report.max_abs_residual_quadratic},
            {"max_abs_residual_harmonic", report.max_abs_residual_harmonic},
            {"rational_zero", report.rational_zero}};
}

json to_json(const NormalizedTrend& trend) {
    return {{"checkpoints", trend.checkpoints},
            {"median_boundary", trend.median_boundary},
            {"median_centered", trend.median_centered}};
}

json to_json(const ChiSquareResult& result) {
    return {{"statistic", result.statistic},
            {"dof", result.dof},
            {"p_value", result.p_value},
            {"pooled_bins", result.pooled_bins}};
}

std::string trajectory_csv(const BoundaryTrajectory& traj, const std::string& config_line) {
    std::string out = "# " + config_line + "\n";
    out += "n,M_n,is_strip_stop,t\n";
    StripDetector det(traj.m0);
    out += "0," + std::to_string(traj.m0) + ",1,1\n";
    for (std::size_t i = 0; i < traj.moves.size(); ++i) {
        const auto stop = det.feed(traj.moves[i]);
        out += std::to_string(i + 1) + "," + std::to_string(traj.values[i + 1]) + "," +
               (stop ? "1" : "0") + "," + std::to_string(det.stop_count()) + "\n";
    }
    return out;
}

std::string kernel_table_csv(std::int64_t m, const KernelRow& row, const BruteForceKernel* brute,
                             const std::string& config_line) {
    std::string out = "# " + config_line + "\n";
    out += "m,k,p_exact,p_bruteforce\n";
    for (std::size_t i = 0; i < row.probs.size(); ++i) {
        const std::int64_t k = row.k_min + static_cast<std::int64_t>(i);
        out += std::to_string(m) + "," + std::to_string(k) + "," + format_double(row.probs[i]) + ",";
        if (brute) {
            auto it = brute->mass.find(k);
            if (it != brute->mass.end()) out += format_double(exact::to_double(it->second));
        }
        out += "\n";
    }
    return out;
}

std::string marginal_table_csv(const SliceMarginal& marginal, const std::string& config_line) {
    std::string out = "# " + config_line + "\n";
    out += "m0,j,m,p\n";
    for (std::size_t m = 1; m < marginal.probs.size(); ++m)
        out += std::to_string(marginal.m0) + "," + std::to_string(marginal.generations) + "," +
               std::to_string(m) + "," + format_double(marginal.probs[m]) + "\n";
    return out;
}

std::string samples_csv(const std::vector<double>& samples, const std::string& config_line) {
    std::string out = "# " + config_line + "\n";
    out += "value\n";
    for (double v : samples) out += format_double(v) + "\n";
    return out;
}

} // namespace uict::io

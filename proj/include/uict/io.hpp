#ifndef UICT_IO_HPP
#define UICT_IO_HPP

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "uict/boundary_chain.hpp"
#include "uict/branching.hpp"
#include "uict/stats.hpp"
#include "uict/triangulation.hpp"

namespace uict::io {

using json = nlohmann::ordered_json;

/// Writes content to a temp file in the target directory, then renames it
/// into place, so readers never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content);

/// Formats a double so the value round-trips bit-exactly.
std::string format_double(double v);

json to_json(const AlmostCausalTriangulation& tri);
json to_json(const CausalTriangulation& tri);
json to_json(const ScalingReport& report);
json to_json(const DualityRatioSeries& series);
json to_json(const MartingaleReport& report);
json to_json(const NormalizedTrend& trend);
json to_json(const ChiSquareResult& result);

/// Parses and validates a triangulation export ("kind" selects the form).
AlmostCausalTriangulation almost_causal_from_json(const json& j);
CausalTriangulation causal_from_json(const json& j);

/// CSV with columns n, M_n, is_strip_stop, t (completed height at step n).
/// `config_line` is echoed as a single leading '#' comment.
std::string trajectory_csv(const BoundaryTrajectory& traj, const std::string& config_line);

/// CSV with columns m, k, p_exact, p_bruteforce (blank when not enumerated).
std::string kernel_table_csv(std::int64_t m, const KernelRow& row, const BruteForceKernel* brute,
                             const std::string& config_line);

/// CSV with columns m0, j, m, p.
std::string marginal_table_csv(const SliceMarginal& marginal, const std::string& config_line);

/// Single-column CSV of samples.
std::string samples_csv(const std::vector<double>& samples, const std::string& config_line);

} // namespace uict::io

#endif

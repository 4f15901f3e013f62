// Experiment runner for the layered-triangulation growth library.
//
// Subcommands: grow, sample, strip-kernel, slice-dist, fractal-dim,
// diffusion-check, duality, martingales, verify. Exit codes: 0 success,
// 1 failed statistical assertion, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uict/boundary_chain.hpp"
#include "uict/branching.hpp"
#include "uict/diffusion.hpp"
#include "uict/exact.hpp"
#include "uict/experiments.hpp"
#include "uict/io.hpp"
#include "uict/stats.hpp"
#include "uict/triangulation.hpp"
#include "uict/util.hpp"

namespace {

using uict::io::json;

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitUsage = 2;

// Rewrites argv so that values from a --config JSON file act as defaults:
// they are inserted directly after the subcommand token in --key=value form,
// and every option uses TakeLast, so explicit flags override them.
std::vector<std::string> merge_config_tokens(int argc, char** argv) {
    static const std::set<std::string> subcommands{
        "grow",        "sample",  "strip-kernel", "slice-dist", "fractal-dim",
        "diffusion-check", "duality", "martingales",  "verify"};
    std::vector<std::string> tokens(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
        if (tokens[i] == "--config") config_path = tokens[i + 1];
    if (config_path.empty()) return tokens;

    std::ifstream in(config_path);
    if (!in) throw CLI::FileError("cannot open config file " + config_path);
    json cfg = json::parse(in);
    std::vector<std::string> merged;
    bool inserted = false;
    for (const std::string& tok : tokens) {
        merged.push_back(tok);
        if (!inserted && subcommands.count(tok)) {
            for (const auto& [key, value] : cfg.items())
                merged.push_back("--" + key + "=" +
                                 (value.is_string() ? value.get<std::string>() : value.dump()));
            inserted = true;
        }
    }
    return merged;
}

// The worker-pool size is deliberately absent: outputs are byte-identical
// for any thread count, so it is not part of the experiment's identity.
json config_echo(const std::string& subcommand, const json& fields) {
    json j;
    j["subcommand"] = subcommand;
    for (const auto& [key, value] : fields.items()) j[key] = value;
    return j;
}

void write_json(const std::string& path, const json& j) {
    uict::io::atomic_write(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------- grow ----

struct GrowArgs {
    std::int64_t m0 = 1;
    std::string moves;
    std::int64_t steps = -1;
    std::uint64_t seed = 1;
    std::string export_path;
    bool causal = false;
};

int run_grow(const GrowArgs& args) {
    uict::MoveSequence moves;
    if (!args.moves.empty())
        moves = uict::parse_moves(args.moves);
    else if (args.steps >= 0)
        moves = uict::sample_trajectory(args.m0, static_cast<std::uint64_t>(args.steps), args.seed).moves;
    else
        throw CLI::ValidationError("grow requires --moves or --steps");

    const auto tri = uict::build_from_moves(args.m0, moves);
    if (auto report = uict::validate_almost_causal(tri); !report.ok) {
        std::fprintf(stderr, "grown triangulation failed validation: %s\n", report.message.c_str());
        return kExitAssertionFailure;
    }
    const json cfg = config_echo("grow", {{"m0", args.m0},
                                          {"moves", uict::format_moves(moves)},
                                          {"seed", args.seed},
                                          {"causal", args.causal}});
    json out;
    if (args.causal) {
        out = uict::io::to_json(uict::remove_defects(tri));
    } else {
        out = uict::io::to_json(tri);
    }
    out["config"] = cfg;
    if (!args.export_path.empty()) write_json(args.export_path, out);
    std::printf("height %lld, layer sizes:", static_cast<long long>(tri.height()));
    for (const auto k : tri.slice_sizes()) std::printf(" %u", k);
    std::printf(", %zu faces%s\n", tri.triangles().size(),
                tri.is_stopped() ? "" : " (trailing band unfinished)");
    return kExitPass;
}

// -------------------------------------------------------------- sample ----

struct SampleArgs {
    std::int64_t m0 = 1;
    std::int64_t steps = 1000;
    std::uint64_t seed = 1;
    std::size_t count = 1;
    std::string out = "trajectory.csv";
};

int run_sample(const SampleArgs& args) {
    for (std::size_t i = 0; i < args.count; ++i) {
        const auto traj =
            uict::sample_trajectory(args.m0, static_cast<std::uint64_t>(args.steps), args.seed, i);
        const json cfg = config_echo("sample", {{"m0", args.m0},
                                                {"steps", args.steps},
                                                {"seed", args.seed},
                                                {"stream", i}});
        std::string path = args.out;
        if (args.count > 1) {
            const auto dot = path.rfind('.');
            path = path.substr(0, dot) + "-" + std::to_string(i) +
                   (dot == std::string::npos ? "" : path.substr(dot));
        }
        uict::io::atomic_write(path, uict::io::trajectory_csv(traj, cfg.dump()));
    }
    return kExitPass;
}

// -------------------------------------------------------- strip-kernel ----

struct StripKernelArgs {
    std::int64_t m = 3;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::int64_t brute_cap = 16;
    std::string out_prefix = "strip-kernel";
};

int run_strip_kernel(const StripKernelArgs& args) {
    const json cfg = config_echo("strip-kernel", {{"m", args.m},
                                                  {"samples", args.samples},
                                                  {"seed", args.seed},
                                                  {"brute_cap", args.brute_cap}});
    const uict::KernelRow row = uict::strip_kernel_row(args.m, 1e-12);
    const uict::BruteForceKernel brute = uict::strip_kernel_bruteforce(args.m, args.brute_cap);
    uict::io::atomic_write(args.out_prefix + "-table.csv",
                           uict::io::kernel_table_csv(args.m, row, &brute, cfg.dump()));

    int exit_code = kExitPass;
    json report;
    report["config"] = cfg;
    report["residual"] = row.residual;
    if (args.samples > 0) {
        const auto finals = uict::parallel_map_indexed<std::int64_t>(args.samples, [&](std::size_t i) {
            uict::RngStream rng(args.seed, i);
            return uict::run_chain_to_stop(args.m, 2, rng);
        });
        std::vector<std::int64_t> observed(row.probs.size(), 0);
        for (const auto mf : finals) {
            const std::int64_t idx = (mf - args.m) - row.k_min;
            if (idx >= 0 && idx < static_cast<std::int64_t>(observed.size()))
                ++observed[static_cast<std::size_t>(idx)];
            else
                ++observed.back();
        }
        const auto chi = uict::chi_square(observed, row.probs, row.residual, 5.0);
        report["chi_square"] = uict::io::to_json(chi);
        report["pass"] = chi.p_value > 0.001;
        if (chi.p_value <= 0.001) exit_code = kExitAssertionFailure;
        std::printf("strip-kernel m=%lld: chi2=%.4g dof=%lld p=%.4g -> %s\n",
                    static_cast<long long>(args.m), chi.statistic,
                    static_cast<long long>(chi.dof), chi.p_value,
                    chi.p_value > 0.001 ? "pass" : "FAIL");
    }
    write_json(args.out_prefix + "-report.json", report);
    return exit_code;
}

// ---------------------------------------------------------- slice-dist ----

struct SliceDistArgs {
    std::int64_t m0 = 1;
    std::int64_t j = 4;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::string out_prefix = "slice-dist";
};

int run_slice_dist(const SliceDistArgs& args) {
    const json cfg = config_echo("slice-dist", {{"m0", args.m0},
                                                {"j", args.j},
                                                {"samples", args.samples},
                                                {"seed", args.seed}});
    const auto marginal = uict::slice_marginal_dp(args.m0, args.j, 4096);
    uict::io::atomic_write(args.out_prefix + "-table.csv",
                           uict::io::marginal_table_csv(marginal, cfg.dump()));

    int exit_code = kExitPass;
    json report;
    report["config"] = cfg;
    report["residual"] = marginal.residual;
    if (args.samples > 0) {
        const auto boundaries = uict::parallel_map_indexed<std::int64_t>(args.samples, [&](std::size_t i) {
            uict::RngStream rng(args.seed, i);
            return uict::run_chain_to_stop(args.m0, args.j + 1, rng);
        });
        std::vector<std::int64_t> observed(marginal.probs.size(), 0);
        for (const auto b : boundaries) {
            const auto v = static_cast<std::size_t>(b);
            if (v < observed.size())
                ++observed[v];
            else
                ++observed.back();
        }
        std::vector<double> probs(marginal.probs.begin() + 1, marginal.probs.end());
        std::vector<std::int64_t> obs(observed.begin() + 1, observed.end());
        const auto chi = uict::chi_square(obs, probs, marginal.residual, 5.0);
        report["chi_square"] = uict::io::to_json(chi);
        report["pass"] = chi.p_value > 0.001;
        if (chi.p_value <= 0.001) exit_code = kExitAssertionFailure;
        std::printf("slice-dist m0=%lld j=%lld: chi2=%.4g dof=%lld p=%.4g -> %s\n",
                    static_cast<long long>(args.m0), static_cast<long long>(args.j),
                    chi.statistic, static_cast<long long>(chi.dof), chi.p_value,
                    chi.p_value > 0.001 ? "pass" : "FAIL");
    }
    write_json(args.out_prefix + "-report.json", report);
    return exit_code;
}

// --------------------------------------------------------- fractal-dim ----

struct FractalArgs {
    std::size_t trajectories = 50;
    std::int64_t t_max = 4096;
    std::int64_t t_min = 64;
    std::uint64_t seed = 7;
    std::string out = "fractal-dim.json";
};

int run_fractal(const FractalArgs& args) {
    uict::FractalConfig config;
    config.trajectories = args.trajectories;
    config.t_max = args.t_max;
    config.t_min = args.t_min;
    config.seed = args.seed;
    const auto report = uict::fractal_dimension(config);
    json j = uict::io::to_json(report);
    j["config"] = config_echo("fractal-dim", {{"trajectories", args.trajectories},
                                              {"t_max", args.t_max},
                                              {"t_min", args.t_min},
                                              {"seed", args.seed}});
    const bool full_scale = args.t_max >= 4096 && args.trajectories >= 50;
    const bool pass = !full_scale || (report.slope_median >= 1.85 && report.slope_median <= 2.15);
    j["pass"] = pass;
    write_json(args.out, j);
    std::printf("fractal-dim: median slope %.4f over %zu trajectories -> %s\n",
                report.slope_median, args.trajectories,
                pass ? "pass" : "FAIL");
    return pass ? kExitPass : kExitAssertionFailure;
}

// ----------------------------------------------------- diffusion-check ----

struct DiffusionArgs {
    std::string which = "both"; // growth | slice | both
    std::size_t samples = 10000;
    std::uint64_t seed = 11;
    double dt = 1e-4;
    std::string out_prefix = "diffusion";
};

int run_diffusion(const DiffusionArgs& args) {
    int exit_code = kExitPass;
    json report;
    if (args.which == "growth" || args.which == "both") {
        auto chain = uict::rescaled_growth_marginal(10000, 1.0, 1, args.samples, args.seed);
        auto sde = uict::parallel_map_indexed<double>(args.samples, [&](std::size_t i) {
            return uict::euler_terminal(uict::SdeSpec::growth(), uict::kEpsilonFloor, args.dt, 1.0,
                                        args.seed + 1, i);
        });
        const json cfg = config_echo("diffusion-check", {{"which", "growth"},
                                                         {"samples", args.samples},
                                                         {"seed", args.seed},
                                                         {"dt", args.dt},
                                                         {"spec", "growth"},
                                                         {"horizon", 1.0}});
        uict::io::atomic_write(args.out_prefix + "-growth-chain.csv",
                               uict::io::samples_csv(chain, cfg.dump()));
        uict::io::atomic_write(args.out_prefix + "-growth-sde.csv",
                               uict::io::samples_csv(sde, cfg.dump()));
        write_json(args.out_prefix + "-growth-meta.json", cfg);
        const double ks = uict::ks_distance(std::move(chain), std::move(sde));
        report["growth_ks"] = ks;
        if (ks >= 0.03) exit_code = kExitAssertionFailure;
        std::printf("diffusion-check growth: KS=%.4f -> %s\n", ks, ks < 0.03 ? "pass" : "FAIL");
    }
    if (args.which == "slice" || args.which == "both") {
        auto chain = uict::rescaled_slice_marginal(128, 1.0, args.samples, args.seed + 2, 1);
        const double mean =
            std::accumulate(chain.begin(), chain.end(), 0.0) / static_cast<double>(chain.size());
        auto sde = uict::parallel_map_indexed<double>(args.samples, [&](std::size_t i) {
            return uict::euler_terminal(uict::SdeSpec::slice(), 0.0, args.dt, 1.0, args.seed + 3, i);
        });
        const json cfg = config_echo("diffusion-check", {{"which", "slice"},
                                                         {"samples", args.samples},
                                                         {"seed", args.seed},
                                                         {"dt", args.dt},
                                                         {"spec", "slice"},
                                                         {"horizon", 1.0}});
        uict::io::atomic_write(args.out_prefix + "-slice-chain.csv",
                               uict::io::samples_csv(chain, cfg.dump()));
        uict::io::atomic_write(args.out_prefix + "-slice-sde.csv",
                               uict::io::samples_csv(sde, cfg.dump()));
        write_json(args.out_prefix + "-slice-meta.json", cfg);
        const double ks = uict::ks_distance(std::move(chain), std::move(sde));
        report["slice_ks"] = ks;
        report["slice_mean"] = mean;
        const bool ok = ks < 0.03 && std::fabs(mean - 2.0) < 0.05;
        if (!ok) exit_code = kExitAssertionFailure;
        std::printf("diffusion-check slice: KS=%.4f mean=%.4f -> %s\n", ks, mean,
                    ok ? "pass" : "FAIL");
    }
    write_json(args.out_prefix + "-report.json", report);
    return exit_code;
}

// -------------------------------------------------------------- duality ----

struct DualityArgs {
    std::size_t paths = 10000;
    std::size_t runs = 100;
    std::int64_t steps = 1000000;
    std::uint64_t seed = 13;
    std::string out = "duality.json";
};

int run_duality(const DualityArgs& args) {
    uict::VerifyOptions opt;
    opt.seed = args.seed;
    opt.quick = args.paths < 10000 || args.runs < 100; // scaled-down run
    const auto tc = uict::check_time_change_duality(opt);
    const auto ratio = uict::check_duality_ratio(opt);
    json j;
    j["config"] = config_echo("duality", {{"paths", args.paths},
                                          {"runs", args.runs},
                                          {"steps", args.steps},
                                          {"seed", args.seed},
                                          {"quick", opt.quick}});
    j["time_change"] = {{"pass", tc.pass}, {"detail", tc.detail}};
    j["ratio"] = {{"pass", ratio.pass}, {"detail", ratio.detail}};
    write_json(args.out, j);
    std::printf("duality: time-change %s; ratio %s\n", tc.detail.c_str(), ratio.detail.c_str());
    return tc.pass && ratio.pass ? kExitPass : kExitAssertionFailure;
}

// ---------------------------------------------------------- martingales ----

struct MartingaleArgs {
    bool trend = false;
    std::size_t trajectories = 100;
    std::uint64_t seed = 17;
    std::string out = "martingales.json";
};

int run_martingales(const MartingaleArgs& args) {
    const auto grid = uict::martingale_grid(1000, 1000000);
    const auto report = uict::martingale_residuals(grid);
    json j = uict::io::to_json(report);
    j["config"] = config_echo("martingales", {{"trend", args.trend},
                                              {"trajectories", args.trajectories},
                                              {"seed", args.seed}});
    bool pass = report.rational_zero;
    if (args.trend) {
        const auto trend =
            uict::martingale_trend({10000, 100000, 1000000}, args.trajectories, 1, args.seed);
        j["trend"] = uict::io::to_json(trend);
        for (std::size_t i = 0; i + 1 < trend.median_boundary.size(); ++i)
            pass = pass && trend.median_boundary[i + 1] < trend.median_boundary[i];
    }
    j["pass"] = pass;
    write_json(args.out, j);
    std::printf("martingales: rational residuals %s\n", report.rational_zero ? "zero" : "NONZERO");
    return pass ? kExitPass : kExitAssertionFailure;
}

// -------------------------------------------------------------- verify ----

struct VerifyArgs {
    std::string level = "quick";
    std::uint64_t seed = 0x5EED2026ull;
    std::string out;
};

int run_verify(const VerifyArgs& args) {
    uict::VerifyOptions opt;
    opt.quick = args.level != "full";
    opt.seed = args.seed;
    const auto results = uict::run_verification_suite(opt, true);
    bool all_pass = true;
    json lines = json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        lines.push_back({{"index", r.index},
                         {"name", r.name},
                         {"pass", r.pass},
                         {"detail", r.detail},
                         {"seconds", r.seconds}});
    }
    if (!args.out.empty()) {
        json j;
        j["config"] = config_echo("verify", {{"level", args.level}, {"seed", args.seed}});
        j["criteria"] = lines;
        j["pass"] = all_pass;
        write_json(args.out, j);
    }
    std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "CRITERIA FAILED");
    return all_pass ? kExitPass : kExitAssertionFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"growth-process experiments for layered causal triangulations"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string config_path;
    unsigned threads = 0;
    app.add_option("--config", config_path, "JSON file with default flag values")
        ->expected(1); // consumed manually in merge_config_tokens
    app.add_option("--threads", threads, "worker pool size (overrides UICT_THREADS)");

    GrowArgs grow;
    auto* grow_cmd = app.add_subcommand("grow", "build a triangulation from moves and export it");
    grow_cmd->add_option("--m0", grow.m0, "initial boundary length");
    grow_cmd->add_option("--moves", grow.moves, "explicit move string, e.g. \"+++-+--\"");
    grow_cmd->add_option("--steps", grow.steps, "sample this many moves instead");
    grow_cmd->add_option("--seed", grow.seed, "seed when sampling");
    grow_cmd->add_option("--export", grow.export_path, "output JSON path");
    grow_cmd->add_flag("--causal", grow.causal, "remove defects and export the causal form");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "sample boundary-chain trajectories to CSV");
    sample_cmd->add_option("--m0", sample.m0, "initial boundary length");
    sample_cmd->add_option("--steps", sample.steps, "moves per trajectory");
    sample_cmd->add_option("--seed", sample.seed, "seed");
    sample_cmd->add_option("--count", sample.count, "number of trajectories");
    sample_cmd->add_option("--out", sample.out, "output CSV path");

    StripKernelArgs kernel;
    auto* kernel_cmd = app.add_subcommand("strip-kernel", "layer kernel table and Monte Carlo check");
    kernel_cmd->add_option("--m", kernel.m, "starting boundary length");
    kernel_cmd->add_option("--samples", kernel.samples, "simulated layers (0 = table only)");
    kernel_cmd->add_option("--seed", kernel.seed, "seed");
    kernel_cmd->add_option("--brute-cap", kernel.brute_cap, "enumeration move cap");
    kernel_cmd->add_option("--out", kernel.out_prefix, "output path prefix");

    SliceDistArgs slice;
    auto* slice_cmd = app.add_subcommand("slice-dist", "layer-size marginal table and Monte Carlo check");
    slice_cmd->add_option("--m0", slice.m0, "rooted boundary length");
    slice_cmd->add_option("--j", slice.j, "layers above the rooted boundary");
    slice_cmd->add_option("--samples", slice.samples, "grown triangulations (0 = table only)");
    slice_cmd->add_option("--seed", slice.seed, "seed");
    slice_cmd->add_option("--out", slice.out_prefix, "output path prefix");

    FractalArgs fractal;
    auto* fractal_cmd = app.add_subcommand("fractal-dim", "layer-stop scaling and fitted dimension");
    fractal_cmd->add_option("--trajectories", fractal.trajectories, "independent chains");
    fractal_cmd->add_option("--t-max", fractal.t_max, "largest layer height");
    fractal_cmd->add_option("--t-min", fractal.t_min, "smallest fitted height");
    fractal_cmd->add_option("--seed", fractal.seed, "seed");
    fractal_cmd->add_option("--out", fractal.out, "output JSON path");

    DiffusionArgs diffusion;
    auto* diffusion_cmd = app.add_subcommand("diffusion-check", "rescaled chain vs reference SDE marginals");
    diffusion_cmd->add_option("--which", diffusion.which, "growth | slice | both")
        ->check(CLI::IsMember({"growth", "slice", "both"}));
    diffusion_cmd->add_option("--samples", diffusion.samples, "samples per side");
    diffusion_cmd->add_option("--seed", diffusion.seed, "seed");
    diffusion_cmd->add_option("--dt", diffusion.dt, "SDE step size");
    diffusion_cmd->add_option("--out", diffusion.out_prefix, "output path prefix");

    DualityArgs duality;
    auto* duality_cmd = app.add_subcommand("duality", "time-change duality and clock-ratio checks");
    duality_cmd->add_option("--paths", duality.paths, "SDE paths per side");
    duality_cmd->add_option("--runs", duality.runs, "chain runs for the ratio check");
    duality_cmd->add_option("--steps", duality.steps, "chain steps per ratio run");
    duality_cmd->add_option("--seed", duality.seed, "seed");
    duality_cmd->add_option("--out", duality.out, "output JSON path");

    MartingaleArgs martingales;
    auto* mart_cmd = app.add_subcommand("martingales", "exact one-step identities and decay trend");
    mart_cmd->add_flag("--trend", martingales.trend, "also run the Monte Carlo decay trend");
    mart_cmd->add_option("--trajectories", martingales.trajectories, "chains for the trend");
    mart_cmd->add_option("--seed", martingales.seed, "seed");
    mart_cmd->add_option("--out", martingales.out, "output JSON path");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
    verify_cmd->add_option("--level", verify.level, "quick | full")
        ->check(CLI::IsMember({"quick", "full"}));
    verify_cmd->add_option("--seed", verify.seed, "seed");
    verify_cmd->add_option("--json", verify.out, "machine-readable summary path");

    try {
        const auto tokens = merge_config_tokens(argc, argv);
        std::vector<const char*> cargv{argv[0]};
        for (const auto& t : tokens) cargv.push_back(t.c_str());
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }

    if (threads > 0) {
        const std::string value = std::to_string(threads);
        setenv("UICT_THREADS", value.c_str(), 1);
    }

    try {
        if (grow_cmd->parsed()) return run_grow(grow);
        if (sample_cmd->parsed()) return run_sample(sample);
        if (kernel_cmd->parsed()) return run_strip_kernel(kernel);
        if (slice_cmd->parsed()) return run_slice_dist(slice);
        if (fractal_cmd->parsed()) return run_fractal(fractal);
        if (diffusion_cmd->parsed()) return run_diffusion(diffusion);
        if (duality_cmd->parsed()) return run_duality(duality);
        if (mart_cmd->parsed()) return run_martingales(martingales);
        if (verify_cmd->parsed()) return run_verify(verify);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

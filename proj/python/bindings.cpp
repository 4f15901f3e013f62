#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "uict/boundary_chain.hpp"
#include "uict/branching.hpp"
#include "uict/diffusion.hpp"
#include "uict/exact.hpp"
#include "uict/experiments.hpp"
#include "uict/io.hpp"
#include "uict/stats.hpp"
#include "uict/triangulation.hpp"

namespace py = pybind11;
using namespace uict;

namespace {

Move move_from_int(int s) {
    if (s == 1) return Move::Plus;
    if (s == -1) return Move::Minus;
    throw std::invalid_argument("move sign must be +1 or -1");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "growth processes, kernels and diffusion limits of layered causal triangulations";

    py::register_exception<IllegalMoveError>(m, "IllegalMoveError", PyExc_ValueError);
    py::register_exception<InsufficientTrajectoryError>(m, "InsufficientTrajectoryError",
                                                        PyExc_RuntimeError);

    // ----- boundary chain ---------------------------------------------
    m.def(
        "step_prob", [](std::int64_t mm, int s) { return step_prob(mm, move_from_int(s)); },
        py::arg("m"), py::arg("sign"),
        "Probability of the +1/-1 boundary move at boundary length m.");

    py::class_<BoundaryTrajectory>(m, "BoundaryTrajectory")
        .def_readonly("m0", &BoundaryTrajectory::m0)
        .def_readonly("seed", &BoundaryTrajectory::seed)
        .def_readonly("values", &BoundaryTrajectory::values)
        .def_property_readonly(
            "moves", [](const BoundaryTrajectory& t) { return format_moves(t.moves); })
        .def("__len__", [](const BoundaryTrajectory& t) { return t.steps(); });

    m.def("sample_trajectory", &sample_trajectory, py::arg("m0"), py::arg("n_steps"),
          py::arg("seed"), py::arg("stream_index") = 0);

    py::class_<StripStops>(m, "StripStops")
        .def_readonly("times", &StripStops::times)
        .def_readonly("boundary_at_stop", &StripStops::boundary_at_stop);

    m.def("strip_stops", &strip_stops, py::arg("trajectory"), py::arg("t_max"));

    m.def("strip_kernel_exact", &strip_kernel_exact, py::arg("m"), py::arg("k"));
    m.def(
        "strip_kernel_row",
        [](std::int64_t mm, double tail) {
            const KernelRow row = strip_kernel_row(mm, tail);
            return py::make_tuple(row.k_min, row.probs, row.residual);
        },
        py::arg("m"), py::arg("tail_bound") = 1e-12,
        "Returns (k_min, probabilities, residual).");
    m.def(
        "strip_kernel_bruteforce",
        [](std::int64_t mm, std::int64_t cap) {
            const BruteForceKernel b = strip_kernel_bruteforce(mm, cap);
            py::dict mass;
            for (const auto& [k, p] : b.mass) mass[py::int_(k)] = exact::to_double(p);
            return py::make_tuple(mass, exact::to_double(b.residual));
        },
        py::arg("m"), py::arg("len_cap"),
        "Exhaustive enumeration oracle; returns ({k: probability}, residual).");
    m.def(
        "discrete_generator_coeffs",
        [](std::int64_t mm, std::int64_t n) {
            const GeneratorCoefficients c = discrete_generator_coeffs(mm, n);
            return py::make_tuple(c.b, c.sigma2, c.delta_eps);
        },
        py::arg("m"), py::arg("n"));

    // ----- branching ---------------------------------------------------
    m.def("offspring_prob", &offspring_prob, py::arg("k"));
    m.def("gw_kernel", &gw_kernel, py::arg("l"), py::arg("k"));
    m.def("conditioned_kernel", &conditioned_kernel, py::arg("l"), py::arg("m"));
    m.def(
        "slice_marginal_dp",
        [](std::int64_t m0, std::int64_t j, std::size_t trunc) {
            const SliceMarginal sm = slice_marginal_dp(m0, j, trunc);
            return py::make_tuple(sm.probs, sm.residual);
        },
        py::arg("m0"), py::arg("j"), py::arg("trunc") = 4096,
        "Returns (probabilities indexed by m, residual).");
    m.def("sample_conditioned_chain", &sample_conditioned_chain, py::arg("m0"), py::arg("t"),
          py::arg("seed"), py::arg("stream_index") = 0);

    // ----- triangulation -------------------------------------------------
    py::class_<GrownStrip>(m, "GrownStrip")
        .def_readonly("defects", &GrownStrip::defects)
        .def_readonly("down_degrees", &GrownStrip::down_degrees);
    py::class_<CausalStrip>(m, "CausalStrip")
        .def_readonly("down_degrees", &CausalStrip::down_degrees)
        .def_readonly("shift", &CausalStrip::shift);

    py::class_<AlmostCausalTriangulation>(m, "AlmostCausalTriangulation")
        .def_property_readonly("m0", &AlmostCausalTriangulation::m0)
        .def_property_readonly("height", &AlmostCausalTriangulation::height)
        .def_property_readonly("slice_sizes", &AlmostCausalTriangulation::slice_sizes)
        .def_property_readonly("strips", &AlmostCausalTriangulation::strips)
        .def_property_readonly("is_stopped", &AlmostCausalTriangulation::is_stopped)
        .def_property_readonly(
            "moves", [](const AlmostCausalTriangulation& t) { return format_moves(t.source_moves()); })
        .def_property_readonly(
            "triangle_count", [](const AlmostCausalTriangulation& t) { return t.triangles().size(); })
        .def("to_json", [](const AlmostCausalTriangulation& t) { return io::to_json(t).dump(2); });

    py::class_<CausalTriangulation>(m, "CausalTriangulation")
        .def_property_readonly("m0", &CausalTriangulation::m0)
        .def_property_readonly("height", &CausalTriangulation::height)
        .def_property_readonly("slice_sizes", &CausalTriangulation::slice_sizes)
        .def_property_readonly("strips", &CausalTriangulation::strips)
        .def("to_json", [](const CausalTriangulation& t) { return io::to_json(t).dump(2); });

    py::class_<RootedForest>(m, "RootedForest")
        .def_readonly("depth_populations", &RootedForest::depth_populations)
        .def_readonly("parents", &RootedForest::parents)
        .def("child_counts", &RootedForest::child_counts, py::arg("depth"))
        .def_property_readonly("root_count", &RootedForest::root_count);

    m.def(
        "build_from_moves",
        [](std::int64_t m0, const std::string& moves) {
            return build_from_moves(m0, parse_moves(moves));
        },
        py::arg("m0"), py::arg("moves"));
    m.def(
        "moves_from_triangulation",
        [](const AlmostCausalTriangulation& t) { return format_moves(moves_from_triangulation(t)); });
    m.def(
        "rewrite_defect_runs",
        [](std::int64_t m0, const std::string& moves) {
            return format_moves(rewrite_defect_runs(m0, parse_moves(moves)));
        },
        py::arg("m0"), py::arg("moves"));
    m.def("remove_defects", &remove_defects, py::arg("triangulation"));
    m.def(
        "validate_almost_causal",
        [](const AlmostCausalTriangulation& t) {
            const auto r = validate_almost_causal(t);
            return py::make_tuple(r.ok, r.message);
        });
    m.def(
        "validate_causal",
        [](const CausalTriangulation& t) {
            const auto r = validate_causal(t);
            return py::make_tuple(r.ok, r.message);
        });
    m.def("to_forest", &to_forest, py::arg("triangulation"));
    m.def(
        "path_probability",
        [](std::int64_t m0, const std::string& moves) {
            return exact::to_double(exact::path_probability(m0, parse_moves(moves)));
        },
        py::arg("m0"), py::arg("moves"));

    // ----- diffusion -----------------------------------------------------
    m.attr("EPSILON_FLOOR") = kEpsilonFloor;

    py::class_<SdePath>(m, "SdePath")
        .def_readonly("dt", &SdePath::dt)
        .def_readonly("values", &SdePath::values)
        .def("at_time", &SdePath::at_time, py::arg("t"))
        .def_property_readonly("horizon", &SdePath::horizon);

    const auto spec_of = [](const std::string& name) {
        if (name == "growth") return SdeSpec::growth();
        if (name == "slice") return SdeSpec::slice();
        throw std::invalid_argument("spec must be 'growth' or 'slice'");
    };
    m.def(
        "euler_path",
        [spec_of](const std::string& spec, double x0, double dt, double horizon,
                  std::uint64_t seed, std::uint64_t stream_index, double noise_amplitude) {
            return euler_path(spec_of(spec), x0, dt, horizon, seed, stream_index, noise_amplitude);
        },
        py::arg("spec"), py::arg("x0"), py::arg("dt"), py::arg("horizon"), py::arg("seed"),
        py::arg("stream_index") = 0, py::arg("noise_amplitude") = 1.0);
    m.def(
        "euler_terminal",
        [spec_of](const std::string& spec, double x0, double dt, double horizon,
                  std::uint64_t seed, std::uint64_t stream_index) {
            return euler_terminal(spec_of(spec), x0, dt, horizon, seed, stream_index);
        },
        py::arg("spec"), py::arg("x0"), py::arg("dt"), py::arg("horizon"), py::arg("seed"),
        py::arg("stream_index") = 0);
    m.def(
        "time_change",
        [](const SdePath& path, const std::function<double(double)>& g, double s_step,
           double s_horizon) {
            const TimeChangeResult r = time_change(path, g, s_step, s_horizon);
            return py::make_tuple(r.path, r.truncated, r.clock_end);
        },
        py::arg("path"), py::arg("g"), py::arg("s_step"), py::arg("s_horizon"),
        "Returns (path, truncated, clock_end).");
    m.def("rescaled_growth_marginal", &rescaled_growth_marginal, py::arg("n"), py::arg("u"),
          py::arg("m0_raw"), py::arg("samples"), py::arg("seed"));
    m.def("rescaled_slice_marginal", &rescaled_slice_marginal, py::arg("t"), py::arg("s"),
          py::arg("samples"), py::arg("seed"), py::arg("m0") = 1);

    // ----- statistics ------------------------------------------------------
    m.def(
        "ks_distance",
        [](std::vector<double> a, std::vector<double> b) {
            return ks_distance(std::move(a), std::move(b));
        },
        py::arg("sample_a"), py::arg("sample_b"));
    m.def(
        "ks_distance_cdf",
        [](std::vector<double> a, const std::function<double(double)>& cdf) {
            return ks_distance(std::move(a), cdf);
        },
        py::arg("sample"), py::arg("cdf"));
    m.def(
        "chi_square",
        [](const std::vector<std::int64_t>& observed, const std::vector<double>& probs,
           double residual, double min_expected) {
            const ChiSquareResult r = chi_square(observed, probs, residual, min_expected);
            return py::make_tuple(r.statistic, r.dof, r.p_value);
        },
        py::arg("observed"), py::arg("model_probs"), py::arg("residual") = 0.0,
        py::arg("min_expected") = 5.0, "Returns (statistic, dof, p_value).");

    py::class_<ScalingReport>(m, "ScalingReport")
        .def_readonly("t_grid", &ScalingReport::t_grid)
        .def_readonly("stop_times", &ScalingReport::stop_times)
        .def_readonly("slopes", &ScalingReport::slopes)
        .def_readonly("slope_median", &ScalingReport::slope_median)
        .def_readonly("ratio_lower_min", &ScalingReport::ratio_lower_min)
        .def_readonly("ratio_upper_max", &ScalingReport::ratio_upper_max);
    m.def(
        "fractal_dimension",
        [](std::size_t trajectories, std::int64_t t_max, std::int64_t t_min, std::int64_t m0,
           std::uint64_t seed) {
            FractalConfig config;
            config.trajectories = trajectories;
            config.t_max = t_max;
            config.t_min = t_min;
            config.m0 = m0;
            config.seed = seed;
            return fractal_dimension(config);
        },
        py::arg("trajectories") = 50, py::arg("t_max") = 4096, py::arg("t_min") = 64,
        py::arg("m0") = 1, py::arg("seed") = 1);

    m.def(
        "duality_ratio",
        [](const BoundaryTrajectory& traj) {
            const DualityRatioSeries s = duality_ratio(traj);
            return py::make_tuple(s.checkpoints, s.ratios);
        },
        py::arg("trajectory"), "Returns (checkpoints, ratios).");

    m.def(
        "martingale_residuals",
        [](const std::vector<std::int64_t>& grid) {
            const MartingaleReport r = martingale_residuals(grid);
            return py::make_tuple(r.max_abs_residual_quadratic, r.max_abs_residual_harmonic,
                                  r.rational_zero);
        },
        py::arg("m_grid"), "Returns (max_quadratic, max_harmonic, rational_zero).");

    m.def(
        "verify",
        [](bool quick, std::uint64_t seed) {
            VerifyOptions opt;
            opt.quick = quick;
            opt.seed = seed;
            const auto results = run_verification_suite(opt, false);
            py::list out;
            for (const auto& r : results)
                out.append(py::make_tuple(r.index, r.name, r.pass, r.detail));
            return out;
        },
        py::arg("quick") = true, py::arg("seed") = VerifyOptions{}.seed,
        "Runs the acceptance criteria; returns [(index, name, pass, detail), ...].");
}

import json
import math

import pytest

import uict


def test_step_prob():
    assert uict.step_prob(3, +1) == pytest.approx(2 / 3, abs=1e-15)
    assert uict.step_prob(1, -1) == 0.0
    with pytest.raises(Exception):
        uict.step_prob(0, +1)


def test_trajectory_reproducible():
    a = uict.sample_trajectory(1, 500, seed=7)
    b = uict.sample_trajectory(1, 500, seed=7)
    c = uict.sample_trajectory(1, 500, seed=7, stream_index=1)
    assert a.values == b.values
    assert a.values != c.values
    assert a.values[0] == 1
    assert all(v >= 1 for v in a.values)


def test_strip_stops_reference():
    traj = uict.sample_trajectory(3, 0, seed=0)
    tri = uict.build_from_moves(3, "+++-+--")
    assert tri.slice_sizes == [3, 4]
    assert tri.triangle_count == 7
    assert tri.is_stopped
    assert uict.moves_from_triangulation(tri) == "+++-+--"

    full = uict.sample_trajectory(1, 10000, seed=3)
    stops = uict.strip_stops(full, 10)
    assert stops.times[0] == 0
    for t in range(len(stops.times) - 1):
        span = stops.times[t + 1] - stops.times[t]
        assert span == stops.boundary_at_stop[t] + stops.boundary_at_stop[t + 1]


def test_kernel_identities():
    assert uict.strip_kernel_exact(1, 0) == pytest.approx(0.25, abs=1e-14)
    mass, residual = uict.strip_kernel_bruteforce(1, 12)
    assert mass[0] == pytest.approx(0.25, abs=1e-15)
    assert mass[1] == pytest.approx(0.25, abs=1e-15)
    for m in range(1, 6):
        for k in range(-m + 1, 12):
            lhs = uict.strip_kernel_exact(m, k)
            rhs = (m + k) / m * uict.gw_kernel(m, m + k)
            assert lhs == pytest.approx(rhs, rel=1e-11)
            assert lhs == pytest.approx(uict.conditioned_kernel(m, m + k), rel=1e-11)


def test_defect_removal():
    tri = uict.build_from_moves(2, "-++-")
    assert tri.strips[0].defects == 1
    ct = uict.remove_defects(tri)
    assert ct.strips[0].shift == 1
    assert list(ct.strips[0].down_degrees) == [2, 0]
    ok, message = uict.validate_causal(ct)
    assert ok, message
    doc = json.loads(ct.to_json())
    assert doc["kind"] == "causal"
    assert doc["slice_sizes"] == [2, 2]

    forest = uict.to_forest(ct)
    assert forest.root_count == 2
    assert list(forest.child_counts(1)) == [2, 0]

    # The rewrite that removes outgrowths preserves the path probability.
    assert uict.path_probability(2, "-++-") == pytest.approx(
        uict.path_probability(2, uict.rewrite_defect_runs(2, "-++-")), abs=0
    )


def test_illegal_move():
    with pytest.raises(ValueError):
        uict.build_from_moves(1, "-")


def test_branching_oracles():
    assert uict.offspring_prob(0) == 0.5
    probs, residual = uict.slice_marginal_dp(1, 1)
    for m in range(1, 20):
        assert probs[m] == pytest.approx(m * 2.0 ** -(m + 1), rel=1e-12)
    assert residual < 1e-12
    chain = uict.sample_conditioned_chain(5, 0, seed=1)
    assert chain == [5]


def test_diffusion_paths():
    path = uict.euler_path("growth", 1.0, 1e-4, 4.0, seed=2, noise_amplitude=0.0)
    assert path.values[-1] == pytest.approx(3.0, abs=1e-9)
    assert uict.euler_terminal("slice", 0.0, 1e-3, 1.0, seed=2) > 0.0

    resampled, truncated, clock_end = uict.time_change(path, lambda x: 1.0, 0.125, 4.0)
    assert not truncated
    assert clock_end == pytest.approx(4.0, rel=1e-9)
    assert resampled.values[-1] == pytest.approx(3.0, abs=1e-6)

    samples = uict.rescaled_growth_marginal(100, 0.0, 3, 10, seed=1)
    assert all(v == pytest.approx(0.3, abs=1e-15) for v in samples)


def test_stats_helpers():
    assert uict.ks_distance([1.0, 2.0], [1.0, 2.0]) == 0.0
    stat, dof, p = uict.chi_square([250, 250, 500], [0.25, 0.25, 0.5])
    assert stat == 0.0 and p == 1.0
    quad, harm, rational_zero = uict.martingale_residuals([1, 2, 3, 1000, 1000000])
    assert rational_zero
    assert quad < 1e-9 and harm < 1e-15


def test_generator_coefficients():
    b, sigma2, delta = uict.discrete_generator_coeffs(4, 16)
    assert b == pytest.approx(1.0, abs=1e-14)
    assert sigma2 == pytest.approx(1.0, abs=1e-14)
    assert delta == 0.0


def test_fractal_report_small():
    report = uict.fractal_dimension(trajectories=4, t_max=256, t_min=64, m0=1, seed=5)
    assert len(report.slopes) == 4
    assert 1.0 < report.slope_median < 3.0

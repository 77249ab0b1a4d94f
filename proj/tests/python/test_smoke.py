import math

import pytest

import fhnring as fr


def test_derived_constants_reference_point():
    params = fr.ModelParams(n=4, a=1.0, b=1.0, c=0.1, delta=0.2, p=10.0, alpha=0.5)
    k = fr.derived_constants(params)
    assert math.isclose(k.c1, 0.1, rel_tol=1e-12)
    assert math.isclose(k.c2, 0.121, rel_tol=1e-12)
    assert math.isclose(k.q, 1654.2, rel_tol=1e-12)
    assert math.isclose(k.sync_threshold, 2125.647, rel_tol=1e-12)
    assert math.isclose(
        fr.absorbing_entry_time(100.0, params), math.log(100.0) / 0.2, rel_tol=1e-12
    )


def test_parameter_validation_maps_to_python_exceptions():
    with pytest.raises(ValueError):
        fr.ModelParams(n=3)
    with pytest.raises(ValueError):
        fr.CubicNonlinearity(1.5)


def test_laplacian_and_feedback():
    assert fr.laplacian_periodic([1.0, 0.0, 0.0, 0.0]) == [-2.0, 1.0, 0.0, 1.0]
    assert fr.feedback_controls([1.0, 0.0, 0.0, 4.0]) == [3.0, 0.0, 0.0, -3.0]
    assert fr.divergence_residual([1.0, 0.0, 0.0, 4.0]) == 0.0


def test_rhs_hand_case():
    params = fr.ModelParams()
    state = fr.NetworkState([1.0, 0.0, 0.0, 4.0], [0.0, 0.0, 0.0, 0.0])
    d = fr.rhs(state, params)
    assert d.x == pytest.approx([5.0, 1.0, 4.0, -52.0], rel=1e-15)
    assert d.y == pytest.approx([0.1, 0.0, 0.0, 0.4], rel=1e-15)


def test_envelope_holds_for_the_cubic():
    nl = fr.CubicNonlinearity(0.5)
    env = fr.envelope_for_cubic(nl)
    assert env.lambda_ == 0.5
    assert math.isclose(env.beta, 40.5, rel_tol=1e-15)
    assert math.isclose(env.gamma, 1.75, rel_tol=1e-15)
    assert fr.verify_envelope(nl, env, -20.0, 20.0, 20000) == []


def test_integrate_and_classify_sync():
    params = fr.ModelParams(a=5.0)
    init = fr.random_initial(4, 2.0, 7)
    traj = fr.integrate_fixed(params, init, fr.IntegratorConfig(t_end=120.0))
    assert not traj.failed()
    assert traj.final_time() == 120.0

    verdict = fr.classify_sync(traj, params)
    assert verdict.synchronized
    assert verdict.t_sync is not None and verdict.t_sync > 0.0
    assert verdict.fitted_rate is not None and verdict.fitted_rate > 0.0

    series = fr.build_series(traj, params)
    assert len(series.times) == len(series.plain_energy)
    assert all(e <= b * (1 + 1e-6) for e, b in zip(series.plain_energy, series.bound))
    assert fr.check_dissipative_bound(traj, params, 1e-6) == []


def test_sweep_is_deterministic_across_workers():
    grid = fr.SweepGrid(
        p_values=[0.5, 1.0],
        a_values=[1.0],
        alpha_values=[0.5],
        n_values=[4],
        seeds=[0, 1],
        base=fr.ModelParams(),
        init_radius=2.0,
        integ=fr.IntegratorConfig(t_end=2.0),
    )
    assert len(grid) == 4
    serial = fr.run_sweep(grid, workers=1)
    parallel = fr.run_sweep(grid, workers=4)
    for a, b in zip(serial, parallel):
        assert a.seed == b.seed
        assert a.verdict.synchronized == b.verdict.synchronized
        assert a.verdict.tail_min_gap_sq == b.verdict.tail_min_gap_sq
        assert a.max_plain_energy == b.max_plain_energy
    assert fr.random_initial_generator_id() == "mt19937_64/top53-uniform"

import types

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergovqe import _kernels
from ergovqe.ansatz import CONNECTIVITIES, build_ansatz
from ergovqe.ergotropy import cost_work, ergotropy
from ergovqe.errors import ArgumentError, ConfigurationError, NumericalError
from ergovqe.hamiltonian import build_hamiltonian, model_from_preset, spectrum
from ergovqe.optimizer import (CostContext, OptimizerConfig, ascend, finite_difference_gradient,
                               gradient)
from ergovqe.statevec import all_up

PRESETS = [("xxx", {}), ("xx", {}), ("tfi", {}), ("xyz", {"gamma": 0.4, "delta": 0.6}),
           ("xxz", {"delta": -0.7}), ("xy", {"gamma": -0.3})]


def make_ctx(preset="xx", n=2, tag="nc", **kw):
    H = build_hamiltonian(model_from_preset(preset, n, **kw))
    return CostContext(build_ansatz(tag, n), all_up(n), H), H


def test_context_work_matches_circuit(rng):
    for preset, kw in PRESETS:
        for tag in CONNECTIVITIES:
            ctx, H = make_ctx(preset, 4, tag, **kw)
            for _ in range(5):
                theta = rng.uniform(-np.pi, np.pi, 4)
                assert ctx.work(theta) == pytest.approx(cost_work(theta, ctx.ansatz, all_up(4), H), abs=1e-12)


def test_batched_work_and_gradient_match_single(rng):
    ctx, _ = make_ctx("xxx", 3, "ring")
    thetas = rng.uniform(0, np.pi, (7, 3))
    assert np.allclose(ctx.works(thetas), [ctx.work(t) for t in thetas], atol=1e-13)
    assert np.allclose(ctx.gradients(thetas), [gradient(t, ctx) for t in thetas], atol=1e-13)


def test_parameter_shift_matches_finite_difference_on_many_cases(rng):
    worst = 0.0
    for case in range(100):
        preset, kw = PRESETS[case % len(PRESETS)]
        tag = CONNECTIVITIES[case % len(CONNECTIVITIES)]
        n = 2 + case % 4
        ctx, _ = make_ctx(preset, n, tag, **kw)
        theta = rng.uniform(-np.pi, np.pi, n)
        ps = gradient(theta, ctx)
        fd = finite_difference_gradient(theta, ctx, 1e-5)
        worst = max(worst, float(np.max(np.abs(ps - fd))))
    assert worst < 1e-6


def test_xxz_three_qubit_ring_gradient():
    ctx, _ = make_ctx("xxz", 3, "ring", delta=0.5)
    theta = np.array([0.3, 1.1, 2.4])
    assert np.max(np.abs(gradient(theta, ctx) - gradient(theta, ctx, "finite-difference"))) < 1e-6


def test_gradient_unrolled_at_origin():
    # W(theta) - W(0) for one angle at a time, compared against the quarter-turn shift by hand
    ctx, _ = make_ctx("xxx", 3, "lin")
    g = gradient(np.zeros(3), ctx)
    for j in range(3):
        e = np.zeros(3)
        e[j] = np.pi / 4
        assert g[j] == pytest.approx(ctx.work(e) - ctx.work(-e), abs=1e-14)


def test_gradient_vanishes_at_nc_maximum():
    ctx, _ = make_ctx()
    theta = np.array([np.pi / 3, -np.pi / 3])
    assert ctx.work(theta) == pytest.approx(2.25, abs=1e-14)
    assert np.max(np.abs(gradient(theta, ctx))) < 1e-12


def test_unknown_gradient_method():
    ctx, _ = make_ctx()
    with pytest.raises(ArgumentError):
        gradient(np.zeros(2), ctx, "adjoint")


def test_parameter_count_checked():
    ctx, _ = make_ctx()
    with pytest.raises(ArgumentError):
        ctx.work(np.zeros(3))


def test_context_shape_checks(xx2):
    with pytest.raises(ArgumentError):
        CostContext(build_ansatz("nc", 3), all_up(2), xx2[1])
    with pytest.raises(ArgumentError):
        CostContext(build_ansatz("nc", 2), all_up(3), xx2[1])


@pytest.mark.parametrize("kw", [
    {"step_size": 0}, {"max_iters": 0}, {"convergence_tol": -1}, {"convergence_window": 0},
    {"gradient_method": "newton"}, {"fd_epsilon": 0},
])
def test_config_validation(kw):
    with pytest.raises(ConfigurationError):
        OptimizerConfig(**kw)


def test_ascent_history_layout():
    ctx, _ = make_ctx()
    res = ascend([0.2, 1.0], ctx)
    assert res.theta_history.shape == (res.iterations + 1, 2)
    assert res.work_history.shape == (res.iterations + 1,)
    assert np.array_equal(res.theta_history[0], [0.2, 1.0])
    assert res.work_history[0] == pytest.approx(ctx.work([0.2, 1.0]), abs=1e-14)
    assert np.array_equal(res.theta_opt, res.theta_history[-1])
    assert res.w_opt == res.work_history[-1]


def test_ascent_steps_follow_update_rule():
    ctx, _ = make_ctx("xxx", 3, "ata")
    cfg = OptimizerConfig(max_iters=5)
    res = ascend([0.4, 2.0, 1.3], ctx, cfg)
    for t in range(res.iterations):
        step = res.theta_history[t] + 0.1 * gradient(res.theta_history[t], ctx)
        assert np.allclose(res.theta_history[t + 1], step, atol=1e-13)


def test_nc_ascent_reaches_known_maximum():
    ctx, _ = make_ctx()
    res = ascend([0.5, 2.2], ctx)
    assert res.converged
    assert res.w_opt == pytest.approx(2.25, abs=1e-5)


def test_convergence_rule_window():
    ctx, _ = make_ctx()
    res = ascend([0.5, 2.2], ctx)
    diffs = np.abs(np.diff(res.work_history))
    assert np.max(diffs[-10:]) < 1e-6
    assert res.iterations >= 10
    # one iteration earlier the window rule did not yet hold
    assert np.max(diffs[-11:-1]) >= 1e-6


def test_start_at_maximum_stays_put():
    ctx, _ = make_ctx()
    theta = np.array([np.pi / 3, -np.pi / 3])
    res = ascend(theta, ctx)
    assert res.converged and res.iterations <= 10
    assert np.max(np.abs(res.theta_opt - theta)) < 1e-9


def test_unconverged_run_stops_at_max_iters():
    ctx, _ = make_ctx()
    res = ascend([0.5, 2.2], ctx, OptimizerConfig(max_iters=3))
    assert not res.converged and res.iterations == 3


def test_ascent_is_deterministic():
    ctx, _ = make_ctx("tfi", 5, "ring")
    a = ascend([0.1, 0.7, 1.3, 2.0, 2.9], ctx)
    b = ascend([0.1, 0.7, 1.3, 2.0, 2.9], ctx)
    assert np.array_equal(a.theta_history, b.theta_history)
    assert np.array_equal(a.work_history, b.work_history)


def test_finite_difference_ascent_tracks_parameter_shift():
    ctx, _ = make_ctx("xxx", 3, "lin")
    ps = ascend([0.3, 1.2, 2.5], ctx, OptimizerConfig(max_iters=50))
    fd = ascend([0.3, 1.2, 2.5], ctx, OptimizerConfig(max_iters=50, gradient_method="finite-difference"))
    assert ps.iterations == fd.iterations
    assert np.max(np.abs(ps.work_history - fd.work_history)) < 1e-7


@settings(max_examples=20, deadline=None)
@given(preset=st.sampled_from([p for p, _ in PRESETS[:3]]), tag=st.sampled_from(CONNECTIVITIES),
       n=st.integers(2, 5), seed=st.integers(0, 10**6))
def test_trajectory_never_exceeds_ergotropy(preset, tag, n, seed):
    ctx, H = make_ctx(preset, n, tag)
    erg = ergotropy(all_up(n), H, spectrum(H)).ergotropy
    theta0 = np.random.default_rng(seed).uniform(0, np.pi, n)
    res = ascend(theta0, ctx, OptimizerConfig(max_iters=100))
    assert np.all(res.work_history <= erg + 1e-9)


def test_non_finite_work_raises_with_trajectory():
    ctx, _ = make_ctx()
    calls = {"n": 0}

    def energy(*args):
        calls["n"] += 1
        return float("nan") if calls["n"] > 8 else _kernels.energy(*args)

    broken = types.SimpleNamespace(energy=energy)
    cfg = OptimizerConfig(gradient_method="finite-difference")
    with pytest.raises(NumericalError) as info:
        ascend([0.5, 2.2], ctx, cfg, kernels=broken)
    thetas, works = info.value.trajectory
    assert len(thetas) >= 1 and np.isfinite(works[0])

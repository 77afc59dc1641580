import math

import numpy as np
import pytest
from scipy.linalg import expm

from helpers import X0, case_A, case_b
from netvuln.simulate import SimulationError, Trajectory, equilibrium, rk4, simulate


def exact(A, b, x0, t):
    xs = equilibrium(A, b)
    return expm(A * t) @ (x0 - xs) + xs


def test_scalar_closed_form():
    traj = simulate([[-1.0]], [1.0], [0.0], 10.0, 0.01)
    assert traj.states[-1, 0] == pytest.approx(1 - math.exp(-10), abs=1e-8)
    assert traj.times[-1] == pytest.approx(10.0)


def test_unperturbed_converges():
    A, b = case_A(), case_b()
    traj = simulate(A, b, X0, 100.0, 0.01)
    xs = equilibrium(A, b)
    late = traj.times >= 60
    assert np.max(np.linalg.norm(traj.states[late] - xs, axis=1)) <= 1e-6


def test_step_halving_order_four():
    A, b = case_A(), case_b()
    x0 = np.array(X0)
    target = exact(A, b, x0, 10.0)
    errs = []
    for dt in (0.2, 0.1, 0.05):
        errs.append(np.linalg.norm(simulate(A, b, x0, 10.0, dt).states[-1] - target))
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    for r in ratios:
        assert 12 < r < 20


def test_matches_expm_along_trajectory():
    A, b = case_A(), case_b()
    traj = simulate(A, b, X0, 20.0, 0.01)
    for t in (1.0, 5.0, 20.0):
        assert np.allclose(traj.at(t), exact(A, b, np.array(X0), t), atol=1e-9)


def test_equilibrium_examples():
    assert equilibrium([[-1.0]], [1.0]) == pytest.approx([1.0])
    v = np.array([0.3, -2.0, 5.0])
    assert np.allclose(equilibrium(-np.eye(3), v), v)


def test_equilibrium_residual_and_dissent():
    A, b = case_A(), case_b()
    xs = equilibrium(A, b)
    assert np.linalg.norm(A @ xs + b) <= 1e-10 * (np.linalg.norm(A, 2) * np.linalg.norm(xs) + np.linalg.norm(b))
    assert np.ptp(xs) > 1e-3


def test_singular_equilibrium():
    with pytest.raises(SimulationError):
        equilibrium([[0.0, 0.0], [0.0, -1.0]], [1.0, 0.0])


@pytest.mark.parametrize("kwargs", [dict(dt=0), dict(dt=-1), dict(t_final=0.001, dt=0.01)])
def test_bad_steps(kwargs):
    args = dict(t_final=1.0, dt=0.1) | kwargs
    with pytest.raises(SimulationError):
        simulate([[-1.0]], [0.0], [1.0], **args)


def test_dimension_mismatch():
    with pytest.raises(SimulationError):
        simulate(case_A(), case_b(), [0.0, 1.0], 1.0, 0.1)


def test_overflow_truncates():
    traj = simulate([[50.0]], [0.0], [1.0], 100.0, 0.01)
    assert traj.truncated
    assert np.all(np.isfinite(traj.states))
    assert traj.times[-1] < 100.0


def test_generic_rhs():
    # x' = -x^2 from 1: x = 1/(1 + t)
    times, states, trunc = rk4(lambda t, x: -x * x, [1.0], 5.0, 0.01)
    assert states[-1, 0] == pytest.approx(1 / 6, abs=1e-9) and not trunc


def test_trajectory_csv():
    traj = simulate([[-1.0]], [1.0], [0.0], 0.02, 0.01, labels=["a"])
    assert traj.to_csv().splitlines()[0] == "t,a"
    with pytest.raises(SimulationError):
        Trajectory(np.arange(2.0), np.zeros((2, 2)), ("a",))


@pytest.mark.parametrize("run", ["existing_run", "created_run"])
def test_perturbed_grows_along_unstable_mode(run, request):
    aug = request.getfixturevalue(run).realization
    x0 = np.array(X0 + [0.0] * aug.aux_count)
    traj = simulate(aug.A_tilde, aug.b_tilde, x0, 2000.0, 0.01)
    n1000 = np.linalg.norm(traj.at(1000.0))
    n2000 = np.linalg.norm(traj.at(2000.0))
    assert n2000 > n1000 > np.linalg.norm(traj.at(200.0))
    w, V = np.linalg.eig(aug.A_tilde)
    v = np.real(V[:, int(np.argmax(w.real))])
    x = traj.states[-1]
    angle = math.acos(min(1.0, abs(x @ v) / (np.linalg.norm(x) * np.linalg.norm(v))))
    assert angle <= 1e-2

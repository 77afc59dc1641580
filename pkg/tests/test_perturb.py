import math
from fractions import Fraction

import numpy as np
import pytest

from helpers import case_model, random_models
from netvuln.dsf import dsf_of, h_matrix, transfer_function
from netvuln.hinf import Verdict, hinf_norm, is_asymptotically_stable
from netvuln.netmodel import LinearModel
from netvuln.perturb import (
    CREATED,
    EXISTING,
    InfeasiblePerturbation,
    LinkCandidate,
    PerturbationError,
    closed_loop_poles,
    loop_determinant,
    perturbed_transfer,
    synthesize_delta,
    vulnerability_map,
)
from netvuln.ratfun import RationalFunction, rf_eval
from netvuln.realize import unwind

s = RationalFunction.s()


@pytest.fixture(scope="module")
def existing(H, model):
    return vulnerability_map(H, model, EXISTING)


@pytest.fixture(scope="module")
def created(H, model):
    return vulnerability_map(H, model, CREATED)


def test_existing_top(existing):
    top = existing[0]
    assert (top.source + 1, top.target + 1) == (5, 2)
    assert top.vulnerability == pytest.approx(1128 / 1051, rel=1e-9)
    assert top.existing and top.label == "5,2"


def test_existing_only_off_diagonal_links(existing, model):
    for c in existing:
        assert c.source != c.target and model.A[c.target][c.source] != 0
    assert len(existing) == sum(1 for i in range(5) for j in range(5) if i != j and model.A[i][j] != 0)


def test_created_top(created):
    top = created[0]
    assert (top.source + 1, top.target + 1) == (2, 2)
    assert top.vulnerability == pytest.approx(1680 / 1051, rel=1e-9)
    assert len(created) == 25


def test_sorted_with_ties(created):
    keys = [(-c.vulnerability, c.source, c.target) for c in created]
    assert keys == sorted(keys)


def test_diagonal_model_empty():
    m = LinearModel([[-1, 0], [0, -2]], [0, 0])
    assert vulnerability_map(h_matrix(dsf_of(m)), m, EXISTING) == []


def test_rejects_unstable():
    m = LinearModel([[1, 0], [0, -2]], [0, 0])
    with pytest.raises(PerturbationError):
        vulnerability_map(h_matrix(dsf_of(m)), m, EXISTING)


def test_delta_existing_exact(existing, H):
    c = existing[0]
    d = synthesize_delta(c, H[c.source, c.target], epsilon=0)
    assert d.entry == Fraction(1051, 1128) * (1 - s) ** 2 / (s + 1) ** 2
    assert (d.target, d.source) == (1, 4)


def test_delta_created_exact(created, H):
    c = created[0]
    d = synthesize_delta(c, H[c.source, c.target], epsilon=0)
    assert d.entry == Fraction(1051, 1680) * (s - 1) ** 2 / (s + 1) ** 2


def test_delta_simple():
    Hij = 2 / (s + 1)
    c = LinkCandidate(0, 1, True, 2.0, 0.0)
    d = synthesize_delta(c, Hij, epsilon=0)
    assert d.entry == Fraction(1, 2) * ((1 - s) / (1 + s)) ** 2
    assert 1 - rf_eval(Hij, 0) * rf_eval(d.entry, 0) == 0


def test_delta_negative_dc_sign():
    c = LinkCandidate(0, 1, True, 2.0, 0.0)
    d = synthesize_delta(c, -2 / (s + 1), epsilon=0)
    assert d.sign == -1 and rf_eval(d.entry, 0) == Fraction(-1, 2)


def test_epsilon_inflation(existing, H):
    c = existing[0]
    d = synthesize_delta(c, H[c.source, c.target])
    assert d.entry == d.nominal_entry * Fraction(1001, 1000)
    assert hinf_norm(d.entry).value == pytest.approx(1.001 / c.vulnerability, rel=1e-9)


def test_constant_shape(existing, H):
    c = existing[0]
    d = synthesize_delta(c, H[c.source, c.target], epsilon=0, shape="constant")
    assert d.entry == RationalFunction.constant(Fraction(1051, 1128))


@pytest.mark.parametrize("mode", [EXISTING, CREATED])
def test_small_gain_tightness_and_minimality(mode, H, model):
    for c in vulnerability_map(H, model, mode):
        if c.vulnerability == 0:
            continue
        Hij = H[c.source, c.target]
        d = synthesize_delta(c, Hij, epsilon=0)
        z = complex(0, c.worst_frequency)
        assert abs(rf_eval(d.entry, z) * rf_eval(Hij, z) - 1) <= 1e-8
        assert hinf_norm(d.entry).value * c.vulnerability == pytest.approx(1, abs=1e-9)
        assert d.entry.is_proper()


def test_finite_frequency_phase_match():
    zeta = Fraction(1, 10)
    Hij = (s + 3) / (s * s + 2 * zeta * s + 1)
    res = hinf_norm(Hij)
    assert 0 < res.worst_frequency < math.inf
    c = LinkCandidate(0, 1, True, res.value, res.worst_frequency)
    d = synthesize_delta(c, Hij, epsilon=0)
    z = complex(0, res.worst_frequency)
    assert abs(rf_eval(d.entry, z) * rf_eval(Hij, z) - 1) <= 1e-8
    assert d.allpass_pole > 0
    assert hinf_norm(d.entry).value == pytest.approx(1 / res.value, rel=1e-9)


def test_infinite_frequency_refused():
    Hij = (2 * s + 1) / (s + 1)
    res = hinf_norm(Hij)
    c = LinkCandidate(0, 0, False, res.value, res.worst_frequency)
    with pytest.raises(InfeasiblePerturbation):
        synthesize_delta(c, Hij)


def test_zero_vulnerability_refused():
    with pytest.raises(InfeasiblePerturbation):
        synthesize_delta(LinkCandidate(0, 1, False, 0.0, 0.0), RationalFunction.zero())


def test_mode_monotonicity():
    for m in random_models(20, seed=11):
        H = h_matrix(dsf_of(m))
        ex = vulnerability_map(H, m, EXISTING)
        cr = vulnerability_map(H, m, CREATED)
        if ex:
            assert cr[0].vulnerability >= ex[0].vulnerability


def test_zero_delta_returns_G(existing, G, H):
    d = synthesize_delta(existing[0], H[4, 1], epsilon=0).scaled(0)
    assert perturbed_transfer(G, H, d) == G


def test_determinant_marginal_at_threshold(existing, H):
    d = synthesize_delta(existing[0], H[4, 1], epsilon=0)
    assert abs(rf_eval(loop_determinant(H, d), 0)) <= 1e-9
    assert rf_eval(loop_determinant(H, d), 0) == 0


def test_inflated_closed_loop_unstable(existing, G, H):
    d = synthesize_delta(existing[0], H[4, 1])
    poles = closed_loop_poles(perturbed_transfer(G, H, d))
    assert max(p.real for p in poles) > 0


def test_subthreshold_stays_stable(existing, H, model, dsf):
    d = synthesize_delta(existing[0], H[4, 1], epsilon=0).scaled(Fraction(9, 10))
    aug = unwind(model, dsf, d)
    assert is_asymptotically_stable(aug.A_tilde) == Verdict.STABLE
    G = transfer_function(dsf, H)
    assert max(p.real for p in closed_loop_poles(perturbed_transfer(G, H, d))) < 0


def test_matrix_placement(existing, H):
    d = synthesize_delta(existing[0], H[4, 1])
    M = d.matrix(5)
    nz = [(r, c) for r in range(5) for c in range(5) if not M[r, c].is_zero()]
    assert nz == [(1, 4)]

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import CASE_A, CASE_B
from netvuln.config import load_config
from netvuln.netmodel import (
    LinearModel,
    ModelError,
    SocialNetworkSpec,
    build_taylor_model,
    validate_model,
)


def case_spec():
    """Edges read off the off-diagonals of A; gamma = (.1,.6,.1,.6,.1); s1 = -1, s2 = 2/3."""
    A = [[Fraction(x) for x in row] for row in CASE_A]
    names = [f"x{k + 1}" for k in range(5)]
    edges = [(names[j], names[i], A[i][j]) for i in range(5) for j in range(5) if i != j and A[i][j]]
    gamma = [Fraction(1, 10), Fraction(6, 10), Fraction(1, 10), Fraction(6, 10), Fraction(1, 10)]
    pers = [(names[i], "s1", gamma[i]) for i in (0, 2, 4)] + [(names[i], "s2", gamma[i]) for i in (1, 3)]
    return SocialNetworkSpec.create(names, edges, [("s1", -1), ("s2", Fraction(2, 3))], pers)


def test_single_agent():
    spec = SocialNetworkSpec.create(["a"], [], [("m", "2")], [("a", "m", "0.5")])
    m = build_taylor_model(spec)
    assert m.A == ((Fraction(-1, 2),),)
    assert m.b == (Fraction(1),)


def test_no_sources_is_abelson():
    spec = SocialNetworkSpec.create(["a", "b", "c"], [("a", "b", "0.3"), ("b", "c", "1"), ("c", "a", "0.2")])
    m = build_taylor_model(spec)
    assert all(x == 0 for x in m.b)
    assert all(sum(row) == 0 for row in m.A)


def test_case_study_reconstruction():
    m = build_taylor_model(case_spec())
    # oracle: gamma_ii = -(a_ii + sum_{j != i} a_ij), b_i = gamma_ii * u_i
    A = [[Fraction(x) for x in row] for row in CASE_A]
    gamma = [-(A[i][i] + sum(A[i][j] for j in range(5) if j != i)) for i in range(5)]
    assert gamma == [Fraction(1, 10), Fraction(6, 10), Fraction(1, 10), Fraction(6, 10), Fraction(1, 10)]
    assert m.A == tuple(tuple(row) for row in A)
    assert m.b == tuple(Fraction(x) for x in CASE_B)


def test_bundled_network_matches_bundled_model():
    assert load_config("example:two_source_network") == load_config("example:case_study")


def test_edge_direction():
    spec = SocialNetworkSpec.create(["a", "b"], [("a", "b", "0.5")])
    m = build_taylor_model(spec)
    # a influences b: row b, column a
    assert m.A[1][0] == Fraction(1, 2) and m.A[0][1] == 0


@pytest.mark.parametrize(
    "edges, pers, match",
    [
        ([("a", "b", "-1")], [], "negative"),
        ([("a", "zz", "1")], [], "unknown agent"),
        ([("a", "a", "1")], [], "self-edge"),
        ([], [("a", "nope", "1")], "unknown source"),
        ([], [("a", "m", "-0.1")], "negative persuasibility"),
    ],
)
def test_spec_errors(edges, pers, match):
    spec = SocialNetworkSpec.create(["a", "b"], edges, [("m", 1)], pers)
    with pytest.raises(ModelError, match=match):
        build_taylor_model(spec)


def test_linear_model_shape_checks():
    with pytest.raises(ModelError):
        LinearModel([[1, 2]], [1])
    with pytest.raises(ModelError):
        LinearModel([[1]], [1, 2])
    with pytest.raises(ModelError):
        LinearModel([[1]], [1], exposed=(0, 0))
    with pytest.raises(ModelError):
        LinearModel([[1]], [1], exposed=(3,))


def test_validate_case_model(model):
    diag = validate_model(model)
    assert diag.message == "asymptotically stable"
    assert max(z.real for z in np.linalg.eigvals(model.A_float)) < 0
    assert diag.nonnegative_off_diagonal and diag.diagonally_dominant


@pytest.mark.parametrize("a, message", [(0, "not asymptotically stable (marginal)"), (1, "unstable")])
def test_validate_verdicts(a, message):
    assert validate_model(LinearModel([[a]], [0])).message == message


weights = st.fractions(min_value=0, max_value=2, max_denominator=10)


@st.composite
def specs(draw):
    n = draw(st.integers(1, 5))
    names = [f"a{k}" for k in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and draw(st.booleans()):
                edges.append((names[j], names[i], draw(weights)))
    k = draw(st.integers(0, 2))
    sources = [(f"s{m}", draw(st.fractions(-2, 2, max_denominator=10))) for m in range(k)]
    pers = []
    for i in range(n):
        for m in range(k):
            if draw(st.booleans()):
                pers.append((names[i], f"s{m}", draw(weights)))
    return SocialNetworkSpec.create(names, edges, sources, pers)


@settings(max_examples=60, deadline=None)
@given(specs())
def test_row_reconstruction(spec):
    m = build_taylor_model(spec)
    for i in range(m.n):
        assert -sum(m.A[i][j] for j in range(m.n) if j != i) - m.gamma[i] == m.A[i][i]
        assert all(m.A[i][j] >= 0 for j in range(m.n) if j != i)


@settings(max_examples=40, deadline=None)
@given(specs(), st.randoms(use_true_random=False))
def test_permutation_equivariance(spec, rnd):
    perm = list(range(len(spec.agents)))
    rnd.shuffle(perm)
    relabeled = SocialNetworkSpec(tuple(spec.agents[k] for k in perm), spec.edges, spec.sources, spec.persuasibility)
    m, mp = build_taylor_model(spec), build_taylor_model(relabeled)
    for a in range(m.n):
        assert mp.b[a] == m.b[perm[a]]
        for c in range(m.n):
            assert mp.A[a][c] == m.A[perm[a]][perm[c]]


def test_stability_survey_randomized():
    """Every component with some persuasibility should be stable; report rather than assert failures."""
    rng = np.random.default_rng(7)
    failures = 0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        names = [f"a{k}" for k in range(n)]
        edges = [(names[j], names[i], str(round(rng.uniform(0, 1), 2)))
                 for i in range(n) for j in range(n) if i != j and rng.random() < 0.5]
        pers = [(names[i], "m", str(round(rng.uniform(0.05, 1), 2))) for i in range(n)]
        m = build_taylor_model(SocialNetworkSpec.create(names, edges, [("m", 1)], pers))
        failures += not validate_model(m).stable
    print(f"unstable Taylor models with full persuasibility: {failures}/100")
    assert failures == 0

"""Taylor social-influence models and directly supplied linear models.

The state equation is ``x' = A x + b``. For a Taylor network,
``A = -(L + Gamma)`` and ``b = Gamma u``, where an edge ``j -> i`` of
weight ``w`` gives ``A[i, j] = w``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ratfun import to_fraction


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: Fraction


@dataclass(frozen=True)
class Source:
    name: str
    sentiment: Fraction


@dataclass(frozen=True)
class Persuasibility:
    agent: str
    source: str
    weight: Fraction


@dataclass(frozen=True)
class SocialNetworkSpec:
    agents: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    sources: tuple[Source, ...] = ()
    persuasibility: tuple[Persuasibility, ...] = ()

    @classmethod
    def create(cls, agents, edges=(), sources=(), persuasibility=()):
        """Build from plain tuples, converting every number to a Fraction."""
        return cls(
            agents=tuple(agents),
            edges=tuple(Edge(s, t, to_fraction(w)) for s, t, w in edges),
            sources=tuple(Source(n, to_fraction(v)) for n, v in sources),
            persuasibility=tuple(Persuasibility(a, s, to_fraction(w)) for a, s, w in persuasibility),
        )

    def validate(self) -> None:
        if len(set(self.agents)) != len(self.agents):
            raise ModelError("duplicate agent names")
        agents = set(self.agents)
        source_names = [s.name for s in self.sources]
        if len(set(source_names)) != len(source_names):
            raise ModelError("duplicate source names")
        for e in self.edges:
            for end in (e.source, e.target):
                if end not in agents:
                    raise ModelError(f"edge references unknown agent {end!r}")
            if e.source == e.target:
                raise ModelError(f"self-edge on agent {e.source!r}")
            if e.weight < 0:
                raise ModelError(f"negative weight {e.weight} on edge {e.source}->{e.target}")
        for p in self.persuasibility:
            if p.agent not in agents:
                raise ModelError(f"persuasibility references unknown agent {p.agent!r}")
            if p.source not in source_names:
                raise ModelError(f"persuasibility references unknown source {p.source!r}")
            if p.weight < 0:
                raise ModelError(f"negative persuasibility {p.weight} for {p.agent}/{p.source}")


@dataclass(frozen=True)
class LinearModel:
    """``x' = A x + b`` with exact entries and an exposed-state subset."""

    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    exposed: tuple[int, ...] = None
    labels: tuple[str, ...] = None
    gamma: tuple[Fraction, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        A = tuple(tuple(to_fraction(x) for x in row) for row in self.A)
        n = len(A)
        if n == 0 or any(len(row) != n for row in A):
            raise ModelError("A must be a non-empty square matrix")
        b = tuple(to_fraction(x) for x in self.b)
        if len(b) != n:
            raise ModelError(f"b has length {len(b)}, expected {n}")
        exposed = tuple(range(n)) if self.exposed is None else tuple(int(k) for k in self.exposed)
        if len(set(exposed)) != len(exposed):
            raise ModelError("exposed indices must be distinct")
        if any(k < 0 or k >= n for k in exposed):
            raise ModelError("exposed index out of range")
        labels = tuple(f"x{k + 1}" for k in range(n)) if self.labels is None else tuple(self.labels)
        if len(labels) != n:
            raise ModelError("labels must match the state dimension")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "exposed", exposed)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def A_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.A])

    @property
    def b_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.b])

    @property
    def fully_exposed(self) -> bool:
        return sorted(self.exposed) == list(range(self.n))

    def with_exposed(self, exposed: Sequence[int]) -> "LinearModel":
        return LinearModel(self.A, self.b, tuple(exposed), self.labels, self.gamma)


def build_taylor_model(spec: SocialNetworkSpec) -> LinearModel:
    spec.validate()
    idx = {name: k for k, name in enumerate(spec.agents)}
    n = len(spec.agents)
    A = [[Fraction(0)] * n for _ in range(n)]
    for e in spec.edges:
        A[idx[e.target]][idx[e.source]] += e.weight
    sentiment = {s.name: s.sentiment for s in spec.sources}
    gamma = [Fraction(0)] * n
    b = [Fraction(0)] * n
    for p in spec.persuasibility:
        i = idx[p.agent]
        gamma[i] += p.weight
        b[i] += p.weight * sentiment[p.source]
    for i in range(n):
        # gamma_ii = 0 means u_i = 0 and b_i = 0, which the sum already gives
        A[i][i] = -(sum(A[i][j] for j in range(n) if j != i) + gamma[i])
    return LinearModel(tuple(map(tuple, A)), tuple(b), None, tuple(spec.agents), tuple(gamma))


@dataclass(frozen=True)
class ModelDiagnostics:
    eigenvalues: tuple[complex, ...]
    verdict: str
    max_real_part: float
    nonnegative_off_diagonal: bool
    diagonally_dominant: bool

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"

    @property
    def message(self) -> str:
        return {
            "stable": "asymptotically stable",
            "marginal": "not asymptotically stable (marginal)",
            "unstable": "unstable",
        }[self.verdict]


def validate_model(model: LinearModel) -> ModelDiagnostics:
    from .hinf import is_asymptotically_stable, spectrum

    A = model.A_float
    eig = spectrum(A)
    verdict = is_asymptotically_stable(A)
    n = model.n
    off = all(model.A[i][j] >= 0 for i in range(n) for j in range(n) if i != j)
    dominant = all(
        -model.A[i][i] >= sum(abs(model.A[i][j]) for j in range(n) if j != i) for i in range(n)
    )
    return ModelDiagnostics(
        eigenvalues=tuple(complex(z) for z in eig),
        verdict=verdict,
        max_real_part=float(max(z.real for z in eig)),
        nonnegative_off_diagonal=off,
        diagonally_dominant=dominant,
    )

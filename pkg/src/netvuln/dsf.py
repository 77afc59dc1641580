"""Dynamical structure function (Q, P) of a linear model.

With exposed states ``y`` and hidden states ``z``::

    Qt(s) = A11 + A12 (sI - A22)^-1 A21
    Pt(s) = B1  + A12 (sI - A22)^-1 B2
    D(s)  = diag(Qt)
    Q(s)  = (sI - D)^-1 (Qt - D),   P(s) = (sI - D)^-1 Pt

Every state is an input channel (B = I), so P is p x n.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .netmodel import LinearModel, ModelError
from .ratfun import RationalFunction, TransferMatrix, tm_inverse


@dataclass(frozen=True)
class PartitionedModel:
    A11: tuple
    A12: tuple
    A21: tuple
    A22: tuple
    B1: tuple
    B2: tuple
    order: tuple[int, ...]  # original state index of each reordered position
    exposed_labels: tuple[str, ...]

    @property
    def p(self) -> int:
        return len(self.A11)

    @property
    def n(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class DsfPair:
    Q: TransferMatrix
    P: TransferMatrix
    D: TransferMatrix
    exposed: tuple[int, ...]
    labels: tuple[str, ...]


def _block(M, rows, cols):
    return tuple(tuple(M[i][j] for j in cols) for i in rows)


def partition(model: LinearModel) -> PartitionedModel:
    if not model.exposed:
        raise ModelError("exposed set is empty")
    exposed = list(model.exposed)
    hidden = [k for k in range(model.n) if k not in set(exposed)]
    eye = tuple(tuple(Fraction(int(i == j)) for j in range(model.n)) for i in range(model.n))
    return PartitionedModel(
        A11=_block(model.A, exposed, exposed),
        A12=_block(model.A, exposed, hidden),
        A21=_block(model.A, hidden, exposed),
        A22=_block(model.A, hidden, hidden),
        B1=_block(eye, exposed, range(model.n)),
        B2=_block(eye, hidden, range(model.n)),
        order=tuple(exposed + hidden),
        exposed_labels=tuple(model.labels[k] for k in exposed),
    )


def compute_dsf(pm: PartitionedModel) -> DsfPair:
    p, h = pm.p, pm.n - pm.p
    Qt = TransferMatrix.from_constant(pm.A11)
    Pt = TransferMatrix.from_constant(pm.B1)
    if h:
        resolvent = tm_inverse(TransferMatrix.s_identity(h) - TransferMatrix.from_constant(pm.A22))
        A12 = TransferMatrix.from_constant(pm.A12)
        Qt = Qt + A12 @ resolvent @ TransferMatrix.from_constant(pm.A21)
        Pt = Pt + A12 @ resolvent @ TransferMatrix.from_constant(pm.B2)
    s = RationalFunction.s()
    zero = RationalFunction.zero()
    diag = [Qt[i, i] for i in range(p)]
    scale = [(s - d).inverse() for d in diag]
    Q = TransferMatrix(
        [[zero if i == j else scale[i] * Qt[i, j] for j in range(p)] for i in range(p)]
    )
    P = TransferMatrix([[scale[i] * Pt[i, j] for j in range(Pt.cols)] for i in range(p)])
    D = TransferMatrix([[diag[i] if i == j else zero for j in range(p)] for i in range(p)])
    exposed = tuple(pm.order[:p])
    return DsfPair(Q, P, D, exposed, pm.exposed_labels)


def dsf_of(model: LinearModel) -> DsfPair:
    return compute_dsf(partition(model))


def h_matrix(dsf: DsfPair) -> TransferMatrix:
    """H = (I - Q)^-1."""
    p = dsf.Q.rows
    return tm_inverse(TransferMatrix.identity(p) - dsf.Q)


def transfer_function(dsf: DsfPair, H: TransferMatrix | None = None) -> TransferMatrix:
    """G = (I - Q)^-1 P."""
    if H is None:
        H = h_matrix(dsf)
    return H @ dsf.P

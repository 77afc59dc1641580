"""Time-domain realization of a single-link perturbation.

For Delta at (j, i) the perturbed exposed dynamics read
``s X_j = A_j. X + d(s) X_i + U_j`` with ``d(s) = (s - a_jj) Delta(s)``.
Writing ``d = alpha s + beta + sum_k c_k / (s + a)^k`` gives one
convolution state per power of ``1/(s + a)`` and substitutes
``alpha * x_i'`` from row ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dsf import DsfPair
from .hinf import Verdict, is_asymptotically_stable, spectrum
from .netmodel import LinearModel
from .perturb import LinkPerturbation
from .ratfun import PartialFractionForm, Polynomial, RationalFunction, partial_fractions

_CONV_NAMES = "pqrtuvw"


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class AugmentedRealization:
    A_tilde: np.ndarray
    b_tilde: np.ndarray
    labels: tuple[str, ...]
    aux_count: int
    perturbation: LinkPerturbation
    d: RationalFunction
    decomposition: PartialFractionForm | None
    alpha: float
    beta: float

    @property
    def n_original(self) -> int:
        return len(self.labels) - self.aux_count


def _conv_label(k: int, chain: int) -> str:
    base = _CONV_NAMES[k] if k < len(_CONV_NAMES) else f"c{k + 1}"
    return base if chain == 0 else f"{base}{chain + 1}"


def unwind(model: LinearModel, dsf: DsfPair, pert: LinkPerturbation) -> AugmentedRealization:
    if not model.fully_exposed:
        raise RealizationError("realization with hidden states is not supported; expose every state")
    i = dsf.exposed[pert.source]
    j = dsf.exposed[pert.target]
    n = model.n
    s = RationalFunction.s()
    d = (s - model.A[j][j]) * pert.entry

    if d.den.degree == 0:
        poly, pfd, terms = d.num, None, ()
    else:
        pfd = partial_fractions(d)
        poly, terms = pfd.polynomial_part, pfd.terms
    if poly.degree > 1:
        raise RealizationError(f"d(s) = {d} has a polynomial part of degree {poly.degree}")
    coeffs = list(poly.coeffs) + [0, 0]
    beta, alpha = float(coeffs[0]), float(coeffs[1])

    chains = []
    for t in terms:
        if t.pole.imag != 0 or t.pole.real >= 0:
            raise RealizationError(f"d(s) has a pole at {t.pole}; only stable real poles are realized")
        chains.append(t)
    r = sum(t.multiplicity for t in chains)

    At = np.zeros((n + r, n + r))
    At[:n, :n] = model.A_float
    bt = np.zeros(n + r)
    bt[:n] = model.b_float
    labels = list(model.labels)

    At[j, i] += beta
    col = n
    for c, t in enumerate(chains):
        a = -t.pole.real
        for k in range(t.multiplicity):
            row = col + k
            At[row, row] = -a
            At[row, i if k == 0 else row - 1] = 1.0
            At[j, row] += float(np.real(t.residues[k]))
            labels.append(_conv_label(k, c))
        col += t.multiplicity

    if i != j:
        At[j, :n] += alpha * model.A_float[i]
        bt[j] += alpha * model.b_float[i]
    else:
        # alpha * x_j' appears on both sides
        if abs(1 - alpha) < 1e-9:
            raise RealizationError("self-link implicit solve is singular (alpha = 1)")
        At[j] /= 1 - alpha
        bt[j] /= 1 - alpha

    return AugmentedRealization(At, bt, tuple(labels), r, pert, d, pfd, alpha, beta)


@dataclass(frozen=True)
class InstabilityReport:
    spectrum: np.ndarray
    lambda_eps: complex
    verdict: Verdict

    @property
    def unstable(self) -> bool:
        return self.verdict == Verdict.UNSTABLE


def verify_instability(aug: AugmentedRealization) -> InstabilityReport:
    eig = spectrum(aug.A_tilde)
    lam = max(eig, key=lambda z: (z.real, -abs(z.imag)))
    return InstabilityReport(eig, complex(lam), is_asymptotically_stable(aug.A_tilde))

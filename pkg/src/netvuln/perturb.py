"""Link vulnerability ranking and minimal-norm single-link perturbations.

Index convention (0-based, in exposed-state coordinates): perturbing the
influence of state ``i`` on state ``j`` puts ``Delta`` at row ``j``,
column ``i``; its vulnerability is ``||H[i, j]||_inf``. Then
``det(I - H Delta) = 1 - Delta[j, i] * H[i, j]``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .hinf import NormResult, Verdict, hinf_norm, is_asymptotically_stable
from .netmodel import LinearModel
from .ratfun import (
    RationalFunction,
    TransferMatrix,
    all_pass,
    rf_eval,
    tm_inverse,
    to_fraction,
)

EXISTING = "existing"
CREATED = "created"


class PerturbationError(ArithmeticError):
    pass


class InfeasiblePerturbation(PerturbationError):
    pass


@dataclass(frozen=True)
class LinkCandidate:
    source: int
    target: int
    existing: bool
    vulnerability: float
    worst_frequency: float
    certified: bool = True

    @property
    def label(self) -> str:
        """1-based ``i,j`` as printed in reports."""
        return f"{self.source + 1},{self.target + 1}"


@dataclass(frozen=True)
class LinkPerturbation:
    source: int
    target: int
    entry: RationalFunction
    gain: Fraction
    allpass_pole: Fraction
    allpass_order: int
    sign: int
    epsilon: Fraction

    def matrix(self, size: int) -> TransferMatrix:
        zero = RationalFunction.zero()
        return TransferMatrix(
            [[self.entry if (r, c) == (self.target, self.source) else zero for c in range(size)]
             for r in range(size)]
        )

    def scaled(self, factor) -> "LinkPerturbation":
        f = to_fraction(factor)
        return LinkPerturbation(self.source, self.target, self.entry * f, self.gain * f,
                                self.allpass_pole, self.allpass_order, self.sign, self.epsilon)

    @property
    def nominal_entry(self) -> RationalFunction:
        """The entry before (1 + epsilon) inflation."""
        return self.entry / (1 + self.epsilon)


def vulnerability_map(H: TransferMatrix, model: LinearModel, mode: str = EXISTING) -> list[LinkCandidate]:
    if mode not in (EXISTING, CREATED):
        raise ValueError(f"mode must be {EXISTING!r} or {CREATED!r}")
    verdict = is_asymptotically_stable(model.A_float)
    if verdict != Verdict.STABLE:
        raise PerturbationError(f"model is {verdict}; vulnerability analysis needs asymptotic stability")
    exposed = model.exposed
    out = []
    for i in range(H.rows):
        for j in range(H.cols):
            existing = i != j and model.A[exposed[j]][exposed[i]] != 0
            if mode == EXISTING and not existing:
                continue
            norm = hinf_norm(H[i, j])
            out.append(LinkCandidate(i, j, existing, norm.value, norm.worst_frequency, norm.certified))
    out.sort(key=lambda c: (-c.vulnerability, c.source, c.target))
    return out


def _phase_allpass(omega: float, theta: float) -> tuple[int, Fraction]:
    """Sign and pole a > 0 with sign * ((a - iw)/(a + iw))**2 * e^{i theta} = 1."""
    # arg of the squared all-pass at w is -4 atan(w / a), spanning (-2pi, 0)
    for sign in (1, -1):
        target = (theta + (0.0 if sign == 1 else math.pi)) % (2 * math.pi)
        if 1e-12 < target < 2 * math.pi - 1e-12:
            a = omega / math.tan(target / 4)
            if a > 0 and math.isfinite(a):
                return sign, to_fraction(a)
    raise InfeasiblePerturbation(f"no all-pass phase match at w={omega}, theta={theta}")


def synthesize_delta(
    candidate: LinkCandidate,
    Hij: RationalFunction,
    epsilon=Fraction(1, 1000),
    allpass_pole=1,
    allpass_order: int = 2,
    shape: str = "allpass",
) -> LinkPerturbation:
    """Smallest single-link Delta making 1 - Delta * Hij vanish at i*w*, inflated by 1 + epsilon.

    ``shape="constant"`` drops the all-pass factor (only possible when the
    worst-case phase is 0 or pi).
    """
    eps = to_fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    if candidate.vulnerability <= 0:
        raise InfeasiblePerturbation("zero vulnerability: no finite perturbation destabilizes this link")
    w = candidate.worst_frequency
    if math.isinf(w):
        raise InfeasiblePerturbation(
            "the H-infinity norm is only approached as w -> inf; no finite-frequency minimal perturbation"
        )
    order = 0 if shape == "constant" else allpass_order
    pole = to_fraction(allpass_pole)
    if w == 0.0:
        h0 = rf_eval(Hij, 0)
        if h0 == 0:
            raise InfeasiblePerturbation("H(0) = 0 at a zero-frequency maximiser")
        sign = 1 if h0 > 0 else -1
        gain = 1 / abs(h0)  # exact
    else:
        value = rf_eval(Hij, complex(0.0, w))
        theta = cmath.phase(value)
        gain = to_fraction(1 / abs(value))
        if shape == "constant":
            if abs(math.sin(theta)) > 1e-9:
                raise InfeasiblePerturbation(f"constant Delta cannot match phase {theta:.6g} at w={w:.6g}")
            sign = 1 if math.cos(theta) > 0 else -1
        else:
            if allpass_order != 2:
                raise InfeasiblePerturbation("phase matching at w* > 0 uses a squared all-pass")
            sign, pole = _phase_allpass(w, theta)
    if pole <= 0:
        raise ValueError("all-pass pole must be positive")
    base = RationalFunction.constant(sign * gain)
    if order:
        base = base * all_pass(pole, order)
    entry = base * (1 + eps)
    return LinkPerturbation(
        source=candidate.source,
        target=candidate.target,
        entry=entry,
        gain=gain,
        allpass_pole=pole,
        allpass_order=order,
        sign=sign,
        epsilon=eps,
    )


def loop_determinant(H: TransferMatrix, pert: LinkPerturbation) -> RationalFunction:
    """Scalar loop gain form of det(I - H Delta)."""
    return RationalFunction.one() - pert.entry * H[pert.source, pert.target]


def perturbed_transfer(G: TransferMatrix, H: TransferMatrix, pert: LinkPerturbation,
                       check_determinant: bool = True) -> TransferMatrix:
    """(I - H Delta)^-1 G in exact arithmetic."""
    p = H.rows
    M = TransferMatrix.identity(p) - H @ pert.matrix(p)
    if check_determinant:
        det = M.determinant()
        expected = loop_determinant(H, pert)
        if det != expected:
            raise PerturbationError(f"det(I - H Delta) = {det} disagrees with 1 - Delta H = {expected}")
        if det.is_zero():
            raise PerturbationError("closed loop is identically singular")
    return tm_inverse(M) @ G


def closed_loop_poles(T: TransferMatrix) -> list[complex]:
    """Distinct poles over all entries of a transfer matrix."""
    from .ratfun import poly_roots

    poles: list[complex] = []
    for row in T.entries:
        for e in row:
            if e.den.degree < 1:
                continue
            for z, _ in poly_roots(e.den):
                if all(abs(z - q) > 1e-9 for q in poles):
                    poles.append(z)
    return sorted(poles, key=lambda z: (z.real, z.imag))


def top_candidate(cands: list[LinkCandidate]) -> LinkCandidate:
    if not cands:
        raise PerturbationError("no candidate links")
    return cands[0]


def norm_of_entry(pert: LinkPerturbation) -> NormResult:
    return hinf_norm(pert.entry)

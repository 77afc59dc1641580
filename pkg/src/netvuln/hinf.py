"""Stability classification and H-infinity norms of scalar rational functions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .ratfun import Polynomial, RationalFunction, poly_roots


class HinfError(ArithmeticError):
    pass


class Verdict(str, enum.Enum):
    STABLE = "stable"
    MARGINAL = "marginal"
    UNSTABLE = "unstable"

    def __str__(self) -> str:
        return self.value


def spectrum(M) -> np.ndarray:
    """Eigenvalues of a real square matrix (LAPACK), with a residual check."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("spectrum needs a square matrix")
    w, V = np.linalg.eig(M)
    scale = max(np.linalg.norm(M, 2), 1e-300)
    resid = np.linalg.norm(M @ V - V * w, axis=0)
    if np.any(~np.isfinite(w)) or np.any(resid > 1e-9 * scale):
        raise HinfError("eigenvalue computation did not converge")
    order = np.lexsort((w.imag, w.real))
    return w[order]


def is_asymptotically_stable(M) -> Verdict:
    M = np.asarray(M, dtype=float)
    tol = 1e-9 * (1 + np.linalg.norm(M, 2))
    top = max(z.real for z in spectrum(M))
    if top < -tol:
        return Verdict.STABLE
    if top > tol:
        return Verdict.UNSTABLE
    return Verdict.MARGINAL


@dataclass(frozen=True)
class NormResult:
    value: float
    worst_frequency: float  # rad/time; math.inf when only approached as w -> inf
    certified: bool
    iterations: int = 0

    @property
    def at_infinity(self) -> bool:
        return math.isinf(self.worst_frequency)


def _mag(r: RationalFunction, w: float) -> float:
    return abs(r(complex(0.0, w)))


def sweep_grid(points: int = 2000, lo: float = 1e-4, hi: float = 1e4) -> np.ndarray:
    return np.concatenate(([0.0], np.logspace(math.log10(lo), math.log10(hi), points)))


def hinf_sweep(r: RationalFunction, points: int = 2000) -> tuple[float, float]:
    """Dense frequency-sweep estimate (max |r(iw)|, argmax)."""
    grid = sweep_grid(points)
    num = r.num.to_float()[::-1] if not r.num.is_zero() else np.array([0.0])
    den = r.den.to_float()[::-1]
    vals = np.abs(np.polyval(num, 1j * grid) / np.polyval(den, 1j * grid))
    k = int(np.argmax(vals))
    return float(vals[k]), float(grid[k])


def _even_part_in_x(p: Polynomial) -> np.ndarray:
    """Coefficients (lowest first) of X with |p(iw)|^2 = X(w^2)."""
    pp = p * p.compose_neg()
    out = []
    for k in range(0, len(pp.coeffs), 2):
        # s^(2k') = (i w)^(2k') = (-1)^k' x^k'
        sign = -1 if (k // 2) % 2 else 1
        out.append(float(sign * pp.coeffs[k]))
    return np.array(out, dtype=float)


def _crossings(numx: np.ndarray, denx: np.ndarray, gamma: float) -> list[float]:
    """Frequencies w > 0 where |r(iw)| = gamma (level-crossing polynomial roots)."""
    n = max(len(numx), len(denx))
    phi = np.zeros(n)
    phi[: len(numx)] += numx
    phi[: len(denx)] -= gamma**2 * denx
    while len(phi) > 1 and phi[-1] == 0.0:
        phi = phi[:-1]
    if len(phi) <= 1:
        return []
    roots = np.roots(phi[::-1])
    out = []
    for x in roots:
        if abs(x.imag) <= 1e-7 * (1 + abs(x)) and x.real > 0:
            out.append(math.sqrt(x.real))
    return sorted(out)


def check_stable_proper(r: RationalFunction) -> None:
    if not r.is_proper():
        raise HinfError(f"{r} is improper; its H-infinity norm is infinite")
    if r.den.degree >= 1:
        for pole, _ in poly_roots(r.den):
            if pole.real >= 0:
                raise HinfError(f"{r} has a pole at {pole:.6g} outside the open left half-plane")


def hinf_norm(r: RationalFunction, tol: float = 1e-9, max_iter: int = 60) -> NormResult:
    """sup_w |r(iw)| by level-set iteration seeded by a log sweep.

    Each step takes gamma slightly above the best value found, finds the
    frequencies where |r(iw)| = gamma, and re-evaluates at the midpoints
    between them. No crossings certifies the lower bound.
    """
    check_stable_proper(r)
    if r.is_zero():
        return NormResult(0.0, 0.0, True)
    if r.is_constant():
        return NormResult(float(abs(r.num.lc)), 0.0, True)
    best, w_best = hinf_sweep(r)
    for pole, _ in poly_roots(r.den):
        w = abs(pole.imag)
        if w > 0:
            val = _mag(r, w)
            if val > best:
                best, w_best = val, w
    if r.num.degree == r.den.degree:
        at_inf = float(abs(r.num.lc / r.den.lc))
        if at_inf > best * (1 + 1e-12):
            best, w_best = at_inf, math.inf
    numx = _even_part_in_x(r.num)
    denx = _even_part_in_x(r.den)
    certified = False
    it = 0
    for it in range(1, max_iter + 1):
        gamma = best * (1 + 2 * tol)
        cross = _crossings(numx, denx, gamma)
        if not cross:
            certified = True
            break
        edges = [0.0] + cross + [2 * cross[-1]]
        improved = False
        for a, b in zip(edges, edges[1:]):
            w = 0.5 * (a + b)
            val = _mag(r, w)
            if val > best:
                best, w_best, improved = val, w, True
        if not improved:
            # tangential or spurious crossings only
            certified = True
            break
    at_zero = _mag(r, 0.0)
    if at_zero >= best * (1 - 1e-12):
        best, w_best = max(best, at_zero), 0.0
    return NormResult(float(best), float(w_best), certified, it)

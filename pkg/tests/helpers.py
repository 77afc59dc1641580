"""Shared fixtures data and independent oracles for the test suite."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from netvuln.netmodel import LinearModel

CASE_A = [
    ["-.7", ".2", "0", ".4", "0"],
    [".2", "-1.6", ".2", "0", ".6"],
    [".1", ".1", "-.3", "0", "0"],
    [".6", "0", "0", "-1.6", ".4"],
    ["0", ".4", "0", ".2", "-.7"],
]
CASE_B = ["-.1", ".4", "-.1", ".4", "-.1"]
X0 = [0.5, 0.5, 0.0, -0.5, -0.5]


def case_model(exposed=None) -> LinearModel:
    return LinearModel(CASE_A, CASE_B, exposed)


def case_A() -> np.ndarray:
    return np.array([[float(Fraction(x)) for x in row] for row in CASE_A])


def case_b() -> np.ndarray:
    return np.array([float(Fraction(x)) for x in CASE_B])


def random_stable_model(rng: np.random.Generator, n: int, density: float = 0.6) -> LinearModel:
    """Strictly row-diagonally-dominant A with entries on a 0.1 grid (Gershgorin-stable)."""
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                A[i][j] = Fraction(int(rng.integers(-5, 6)), 10)
        margin = Fraction(int(rng.integers(1, 10)), 10)
        A[i][i] = -(sum(abs(A[i][j]) for j in range(n) if j != i) + margin)
    b = [Fraction(int(rng.integers(-5, 6)), 10) for _ in range(n)]
    return LinearModel(A, b)


def random_models(count: int = 50, seed: int = 20240611) -> list[LinearModel]:
    rng = np.random.default_rng(seed)
    return [random_stable_model(rng, int(rng.integers(2, 7))) for _ in range(count)]


def mag_fn(r):
    num = r.num.to_float()[::-1] if not r.num.is_zero() else np.array([0.0])
    den = r.den.to_float()[::-1]
    return lambda w: np.abs(np.polyval(num, 1j * np.asarray(w)) / np.polyval(den, 1j * np.asarray(w)))


def dense_sweep_max(r, points: int = 20001) -> tuple[float, float]:
    """Grid max over 0 and a log grid 1e-4..1e4, refined by bounded 1-D search near the top peaks."""
    grid = np.concatenate(([0.0], np.logspace(-4, 4, points)))
    f = mag_fn(r)
    vals = f(grid)
    best_k = int(np.argmax(vals))
    best, arg = float(vals[best_k]), float(grid[best_k])
    peaks = [k for k in range(1, len(grid) - 1) if vals[k] >= vals[k - 1] and vals[k] >= vals[k + 1]]
    peaks = sorted(peaks, key=lambda k: -vals[k])[:3]
    for k in peaks:
        res = minimize_scalar(lambda w: -f(w), bounds=(grid[k - 1], grid[k + 1]), method="bounded",
                              options={"xatol": 1e-12 * max(grid[k], 1e-12)})
        if -res.fun > best:
            best, arg = float(-res.fun), float(res.x)
    return best, arg


def numeric_H(A: np.ndarray, s: complex) -> np.ndarray:
    n = A.shape[0]
    D = np.diag(np.diag(A))
    return np.linalg.solve(s * np.eye(n) - A, s * np.eye(n) - D)


def numeric_G(A: np.ndarray, s: complex) -> np.ndarray:
    n = A.shape[0]
    return np.linalg.inv(s * np.eye(n) - A)

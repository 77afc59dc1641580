"""Fixed-step RK4 integration of x' = A x + b, and equilibria."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), n)
    labels: tuple[str, ...]
    truncated: bool = False

    def __post_init__(self):
        if self.states.shape != (len(self.times), len(self.labels)):
            raise SimulationError("state array does not match times/labels")

    def at(self, t: float) -> np.ndarray:
        k = int(np.argmin(np.abs(self.times - t)))
        return self.states[k]

    def norms(self, first: int | None = None) -> np.ndarray:
        return np.linalg.norm(self.states[:, :first], axis=1)

    def to_csv(self, columns: int | None = None) -> str:
        labels = self.labels[:columns]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", *labels])
        for t, x in zip(self.times, self.states):
            w.writerow([f"{t:.6g}", *(f"{v:.10g}" for v in x[: len(labels)])])
        return buf.getvalue()


def rk4(f: Callable[[float, np.ndarray], np.ndarray], x0, t_final: float, dt: float):
    """Classical RK4; stops early at the first non-finite state."""
    if dt <= 0:
        raise SimulationError("dt must be positive")
    if t_final < dt:
        raise SimulationError("t_final must be at least dt")
    steps = int(round(t_final / dt))
    x = np.asarray(x0, dtype=float).copy()
    out = np.empty((steps + 1, x.size))
    out[0] = x
    truncated = False
    last = steps
    h = dt
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            t = k * h
            k1 = f(t, x)
            k2 = f(t + h / 2, x + h / 2 * k1)
            k3 = f(t + h / 2, x + h / 2 * k2)
            k4 = f(t + h, x + h * k3)
            x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(x)):
                truncated, last = True, k
                break
            out[k + 1] = x
    times = np.arange(last + 1) * h
    return times, out[: last + 1], truncated


def simulate(A, b, x0, t_final: float = 100.0, dt: float = 0.01,
             labels: Sequence[str] | None = None) -> Trajectory:
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,) or x0.shape != (n,):
        raise SimulationError(f"dimension mismatch: A {A.shape}, b {b.shape}, x0 {x0.shape}")
    times, states, truncated = rk4(lambda t, x: A @ x + b, x0, t_final, dt)
    labels = tuple(labels) if labels is not None else tuple(f"x{k + 1}" for k in range(n))
    return Trajectory(times, states, labels, truncated)


def equilibrium(A, b) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.linalg.matrix_rank(A) < A.shape[0]:
        raise SimulationError("A is singular; no unique equilibrium")
    return np.linalg.solve(A, -b)

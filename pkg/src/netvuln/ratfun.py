"""Exact polynomial and rational-function algebra over the rationals.

Coefficients are :class:`fractions.Fraction`, stored lowest power first.
Floating point appears only in evaluation, root finding and partial
fractions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


class RatfunError(ArithmeticError):
    pass


class PoleEvaluationError(RatfunError):
    """Evaluation of a rational function at one of its poles."""


class SingularMatrixError(RatfunError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class RootFindingError(RatfunError):
    pass


class IllConditionedError(RatfunError):
    pass


def to_fraction(x) -> Fraction:
    """Convert ints, Fractions, decimal strings or floats to an exact Fraction.

    Floats go through ``repr`` so that ``0.1`` becomes ``1/10`` rather than
    its binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite coefficient {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, np.floating):
        return to_fraction(float(x))
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class Polynomial:
    """Immutable polynomial in ``s`` with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: list[Fraction]) -> "Polynomial":
        # trusted constructor: coefficients already Fractions
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def s(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_fraction(r), 1])
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_polynomial(self)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw([-c for c in self.coeffs])

    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Polynomial._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Polynomial":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial._raw([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = to_fraction(c)
        return Polynomial._raw([c * a for a in self.coeffs])

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Polynomial._raw([]), self
        inv_lc = 1 / other.lc
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lc
            if c == 0:
                continue
            quot[k - dq] = c
            for m, b in enumerate(other.coeffs):
                rem[k - dq + m] -= c * b
        return Polynomial._raw(quot), Polynomial._raw(rem[:dq])

    def __floordiv__(self, other) -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other) -> "Polynomial":
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> "Polynomial":
        return Polynomial._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, z):
        """Horner evaluation; exact for Fraction/int arguments."""
        if isinstance(z, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        acc = 0j if isinstance(z, complex) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def compose_neg(self) -> "Polynomial":
        """p(-s)."""
        return Polynomial._raw([c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)])

    def to_float(self) -> np.ndarray:
        """Float coefficients, lowest power first."""
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def content_primitive(self) -> "Polynomial":
        """Scale so coefficients are coprime integers with positive lc."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        sign = 1 if ints[-1] > 0 else -1
        return Polynomial._raw([Fraction(sign * i // g) for i in ints])


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([x])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd via Euclid with primitive remainders (limits coefficient growth)."""
    a, b = a.content_primitive(), b.content_primitive()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        a, b = b, (a % b).content_primitive()
    return a.monic()


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: monic squarefree factors f_k with p = lc * prod f_k**k."""
    if p.degree < 1:
        return []
    p = p.monic()
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    k = 1
    while b.degree >= 1:
        g = poly_gcd(b, d)
        if g.degree >= 1:
            out.append((g, k))
        b = b // g
        c = d // g
        d = c - b.derivative()
        k += 1
    return out


def format_polynomial(p: Polynomial, var: str = "s") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text


class RationalFunction:
    """Canonical ratio of polynomials: coprime, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical: bool = False):
        num = _as_poly(num)
        den = Polynomial([1]) if den is None else _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _canonical:
            if num.is_zero():
                den = Polynomial([1])
            else:
                if den.degree > 0:
                    g = poly_gcd(num, den)
                    if g.degree > 0:
                        num, den = num // g, den // g
                lc = den.lc
                if lc != 1:
                    num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(Polynomial(), Polynomial([1]), _canonical=True)

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(Polynomial([1]), Polynomial([1]), _canonical=True)

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls(Polynomial([c]), Polynomial([1]), _canonical=True)

    @classmethod
    def s(cls) -> "RationalFunction":
        return cls(Polynomial([0, 1]), Polynomial([1]), _canonical=True)

    def canonical(self) -> "RationalFunction":
        return RationalFunction(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    @property
    def relative_degree(self) -> int:
        return self.den.degree - self.num.degree

    def is_proper(self) -> bool:
        return self.is_zero() or self.num.degree <= self.den.degree

    def is_strictly_proper(self) -> bool:
        return self.is_zero() or self.num.degree < self.den.degree

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            if isinstance(other, (int, Fraction, Polynomial)):
                other = RationalFunction(other)
            else:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.den.degree == 0:
            return format_polynomial(self.num)
        return f"({format_polynomial(self.num)})/({format_polynomial(self.den)})"

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree > 0:
            da, db = self.den // g, other.den // g
            return RationalFunction(self.num * db + other.num * da, self.den * db)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _as_rf(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero()
        if other.is_constant():
            c = other.num.lc
            return RationalFunction(self.num.scale(c), self.den, _canonical=True)
        if self.is_constant():
            return other * self
        # cross-cancel before multiplying to keep degrees small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        num = (self.num // g1) * (other.num // g2)
        den = (self.den // g2) * (other.den // g1)
        lc = den.lc
        return RationalFunction(num.scale(1 / lc), den.scale(1 / lc), _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        lc = self.num.lc
        return RationalFunction(self.den.scale(1 / lc), self.num.scale(1 / lc), _canonical=True)

    def __truediv__(self, other) -> "RationalFunction":
        return self * _as_rf(other).inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rf(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, _canonical=True)

    def __call__(self, z):
        return rf_eval(self, z)

    def poles(self) -> list[tuple[complex, int]]:
        return poly_roots(self.den) if self.den.degree >= 1 else []

    def zeros(self) -> list[tuple[complex, int]]:
        return poly_roots(self.num) if self.num.degree >= 1 else []


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return RationalFunction.constant(to_fraction(x))


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def rf_eval(r: RationalFunction, z):
    """Evaluate ``r`` at ``z``; exact for rational ``z``, complex otherwise."""
    if isinstance(z, (int, Fraction)):
        d = r.den(Fraction(z))
        if d == 0:
            raise PoleEvaluationError(f"{r} has a pole at s={z}")
        return r.num(Fraction(z)) / d
    z = complex(z)
    d = r.den(z)
    if d == 0:
        raise PoleEvaluationError(f"{r} has a pole at s={z}")
    return r.num(z) / d


class TransferMatrix:
    """Dense grid of :class:`RationalFunction` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        grid = tuple(tuple(_as_rf(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("TransferMatrix needs at least one row and column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ValueError("ragged TransferMatrix")
        self.entries = grid
        self.rows = len(grid)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "TransferMatrix":
        one, zero = RationalFunction.one(), RationalFunction.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "TransferMatrix":
        zero = RationalFunction.zero()
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def from_constant(cls, M) -> "TransferMatrix":
        return cls([[RationalFunction.constant(to_fraction(x)) for x in row] for row in M])

    @classmethod
    def s_identity(cls, n: int) -> "TransferMatrix":
        s, zero = RationalFunction.s(), RationalFunction.zero()
        return cls([[s if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> RationalFunction:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"TransferMatrix({self.rows}x{self.cols})"

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)

    def _check_same(self, other: "TransferMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "TransferMatrix") -> "TransferMatrix":
        self._check_same(other)
        return TransferMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "TransferMatrix") -> "TransferMatrix":
        self._check_same(other)
        return TransferMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "TransferMatrix":
        return TransferMatrix([[-a for a in row] for row in self.entries])

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = RationalFunction.zero()
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero():
                        continue
                    b = other.entries[k][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return TransferMatrix(out)

    def scale(self, c) -> "TransferMatrix":
        c = _as_rf(c)
        return TransferMatrix([[c * a for a in row] for row in self.entries])

    def transpose(self) -> "TransferMatrix":
        return TransferMatrix([list(col) for col in zip(*self.entries)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "TransferMatrix":
        return TransferMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def diagonal(self) -> list[RationalFunction]:
        return [self.entries[k][k] for k in range(min(self.rows, self.cols))]

    def evaluate(self, z) -> np.ndarray:
        z = complex(z)
        return np.array([[rf_eval(e, z) for e in row] for row in self.entries], dtype=complex)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == TransferMatrix.identity(self.rows)

    def determinant(self) -> RationalFunction:
        det, _ = _eliminate(self, want_inverse=False)
        return det

    def inverse(self) -> "TransferMatrix":
        return tm_inverse(self)


def _eliminate(M: TransferMatrix, want_inverse: bool):
    """Gauss-Jordan over the field of rational functions.

    Pivots prefer the lowest total degree to curb expression growth.
    """
    if M.rows != M.cols:
        raise ValueError("square matrix required")
    n = M.rows
    a = [list(row) for row in M.entries]
    inv = [list(row) for row in TransferMatrix.identity(n).entries] if want_inverse else None
    det = RationalFunction.one()
    for col in range(n):
        candidates = [r for r in range(col, n) if not a[r][col].is_zero()]
        if not candidates:
            if want_inverse:
                raise SingularMatrixError(
                    f"matrix is singular: column {col} has no nonzero pivot after elimination",
                    witness=col,
                )
            return RationalFunction.zero(), None
        piv = min(candidates, key=lambda r: (a[r][col].num.degree + a[r][col].den.degree, r))
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            if inv is not None:
                inv[col], inv[piv] = inv[piv], inv[col]
            det = -det
        p = a[col][col]
        det = det * p
        pinv = p.inverse()
        a[col] = [x * pinv for x in a[col]]
        if inv is not None:
            inv[col] = [x * pinv for x in inv[col]]
        rows = range(n) if want_inverse else range(col + 1, n)
        for r in rows:
            if r == col:
                continue
            f = a[r][col]
            if f.is_zero():
                continue
            a[r] = [x - f * y if not y.is_zero() else x for x, y in zip(a[r], a[col])]
            if inv is not None:
                inv[r] = [x - f * y if not y.is_zero() else x for x, y in zip(inv[r], inv[col])]
    return det, (TransferMatrix(inv) if inv is not None else None)


def tm_inverse(M: TransferMatrix) -> TransferMatrix:
    _, inv = _eliminate(M, want_inverse=True)
    return inv


# ---------------------------------------------------------------- roots


def _polish(coeffs_hi: np.ndarray, z: complex, steps: int = 8) -> complex:
    dcoeffs = np.polyder(coeffs_hi)
    for _ in range(steps):
        f = np.polyval(coeffs_hi, z)
        df = np.polyval(dcoeffs, z)
        if df == 0:
            break
        step = f / df
        z = z - step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return z


def _precise_roots(f: Polynomial, dps: int = 60) -> list[complex]:
    """Extended-precision roots for clustered (but distinct) roots."""
    import mpmath

    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
        try:
            found = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        except mpmath.libmp.NoConvergence as exc:
            raise RootFindingError(f"no convergence for roots of {f}") from exc
        return [complex(z) for z in found]


def _squarefree_roots(f: Polynomial) -> list[complex]:
    """Roots of a monic squarefree factor; linear factors are exact."""
    if f.degree == 1:
        return [complex(-f.coeffs[0] / f.coeffs[1])]
    hi = f.to_float()[::-1]
    raw = np.roots(hi)
    roots = [complex(_polish(hi, complex(r))) for r in raw]
    if min((abs(a - b) for k, a in enumerate(roots) for b in roots[k + 1:]), default=1.0) < 1e-6:
        roots = _precise_roots(f)
    reals, upper, lower = [], [], []
    for r in roots:
        if abs(r.imag) <= 1e-12 * (1 + abs(r)):
            reals.append(complex(r.real, 0.0))
        elif r.imag > 0:
            upper.append(r)
        else:
            lower.append(r)
    if len(upper) == len(lower):
        # real coefficients: make conjugate pairs exact
        lower = [z.conjugate() for z in upper]
    out = reals + upper + lower
    out.sort(key=lambda z: (z.real, z.imag))
    return out


def _root_multiset(p: Polynomial) -> list[tuple[complex, int]]:
    if p.degree < 1:
        raise ValueError("poly_roots needs degree >= 1")
    pairs = []
    for f, k in squarefree_decomposition(p):
        for r in _squarefree_roots(f):
            pairs.append((r, k))
    monic_hi = p.monic().to_float()[::-1]
    for r, _ in pairs:
        resid = abs(np.polyval(monic_hi, r))
        if not np.isfinite(resid) or resid > 1e-10 * (1 + abs(r)) ** p.degree:
            raise RootFindingError(f"root {r} of {p} has residual {resid:.3e}")
    return pairs


def poly_roots(p: Polynomial, cluster_tol: float = 1e-8) -> list[tuple[complex, int]]:
    """Roots of ``p`` with multiplicities, sorted by (real, imag).

    Multiplicities come from an exact squarefree decomposition; roots
    closer than ``cluster_tol`` are merged afterwards.
    """
    pairs = _root_multiset(p)
    merged: list[list] = []
    for r, k in sorted(pairs, key=lambda t: (t[0].real, t[0].imag)):
        for item in merged:
            if abs(item[0] - r) < cluster_tol:
                item[1] += k
                break
        else:
            merged.append([r, k])
    return [(r, k) for r, k in merged]


# ---------------------------------------------------------------- partial fractions


@dataclass(frozen=True)
class PoleTerm:
    pole: complex
    multiplicity: int
    residues: tuple  # coefficient of 1/(s-pole)**k for k = 1..multiplicity


@dataclass(frozen=True)
class PartialFractionForm:
    polynomial_part: Polynomial
    terms: tuple[PoleTerm, ...]

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        val = complex(self.polynomial_part(z)) if not self.polynomial_part.is_zero() else 0j
        for t in self.terms:
            for k, c in enumerate(t.residues, start=1):
                val += c / (z - t.pole) ** k
        return val

    def term_for(self, pole: complex, tol: float = 1e-9) -> PoleTerm:
        for t in self.terms:
            if abs(t.pole - pole) <= tol:
                return t
        raise KeyError(pole)


def _taylor_shift(coeffs_hi: np.ndarray, p: complex) -> np.ndarray:
    """Coefficients (lowest first) of q(s) = f(s + p)."""
    c = np.array(coeffs_hi, dtype=complex)
    n = len(c)
    out = np.zeros(n, dtype=complex)
    work = c.copy()
    for k in range(n):
        # synthetic division by (s - p); remainder is the k-th Taylor coefficient
        acc = 0j
        quot = np.zeros(max(len(work) - 1, 0), dtype=complex)
        for idx, a in enumerate(work):
            acc = acc * p + a
            if idx < len(work) - 1:
                quot[idx] = acc
        out[k] = acc
        work = quot
        if len(work) == 0:
            break
    return out


def partial_fractions(r: RationalFunction, gap_tol: float = 1e-8) -> PartialFractionForm:
    """Decompose ``r`` into a polynomial part plus sum of c/(s-p)**k terms."""
    if r.den.degree < 1:
        raise ValueError("partial_fractions needs a denominator of degree >= 1")
    poly_part, rem = r.num.divmod(r.den)
    pairs = sorted(_root_multiset(r.den), key=lambda t: (t[0].real, t[0].imag))
    for i, (a, _) in enumerate(pairs):
        for b, _ in pairs[i + 1:]:
            if abs(a - b) < gap_tol:
                raise IllConditionedError(f"poles {a} and {b} are closer than {gap_tol}")
    lc = float(r.den.lc)
    rem_hi = rem.to_float()[::-1] if not rem.is_zero() else np.array([0.0])
    terms = []
    for idx, (p, m) in enumerate(pairs):
        # cofactor C(s) = lc * prod_{q != p} (s - q)**mq; f = rem / C near p
        cof = np.array([lc], dtype=complex)
        for jdx, (q, mq) in enumerate(pairs):
            if jdx != idx:
                for _ in range(mq):
                    cof = np.convolve(cof, np.array([1.0, -q], dtype=complex))
        num_t = _taylor_shift(rem_hi, p)
        den_t = _taylor_shift(cof, p)
        # power-series division num_t / den_t up to order m-1
        series = np.zeros(m, dtype=complex)
        for k in range(m):
            acc = num_t[k] if k < len(num_t) else 0j
            for j in range(1, k + 1):
                if j < len(den_t):
                    acc -= den_t[j] * series[k - j]
            series[k] = acc / den_t[0]
        # 1/(s-p)**k coefficient equals series[m-k]
        residues = [series[m - k] for k in range(1, m + 1)]
        if p.imag == 0.0:
            residues = [float(c.real) for c in residues]
        terms.append(PoleTerm(p, m, tuple(residues)))
    # conjugate-pair symmetrisation for real-coefficient inputs
    fixed = []
    for t in terms:
        if t.pole.imag != 0.0:
            partner = min(terms, key=lambda u: abs(u.pole - t.pole.conjugate()))
            res = tuple((a + b.conjugate()) / 2 for a, b in zip(t.residues, partner.residues))
            t = PoleTerm(t.pole, t.multiplicity, res)
        fixed.append(t)
    return PartialFractionForm(poly_part, tuple(fixed))


def all_pass(pole, order: int) -> RationalFunction:
    """((a - s)/(a + s))**order."""
    a = to_fraction(pole)
    base = RationalFunction(Polynomial([a, -1]), Polynomial([a, 1]))
    return base ** order

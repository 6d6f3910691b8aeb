"""Exact rational linear algebra for intersection lattices and vanishing cycles.

Matrices and vectors are numpy arrays of dtype ``object`` holding
:class:`fractions.Fraction` entries, so ``@``, ``+`` and ``==`` stay exact.

Sign convention: ``pair(a, b) = a^T P b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, Sequence

import numpy as np


class InputError(ValueError):
    """Malformed or inconsistent user input."""


# ---------------------------------------------------------------------------
# exact scalar / matrix helpers
# ---------------------------------------------------------------------------

def to_fraction(x) -> Fraction:
    """Parse an exact rational: int, Fraction, or a ``"p/q"`` / ``"p"`` string.

    Floats are rejected on purpose.
    """
    if isinstance(x, bool):
        raise InputError(f"boolean is not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Integral, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "." in s or "e" in s.lower():
            raise InputError(f"decimal literal not allowed, use p/q: {x!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational {x!r}") from exc
    raise InputError(f"not an exact rational: {x!r} ({type(x).__name__})")


def qvec(entries: Iterable) -> np.ndarray:
    return np.array([to_fraction(e) for e in entries], dtype=object)


def qmat(rows: Iterable[Iterable]) -> np.ndarray:
    rows = [list(r) for r in rows]
    if not rows:
        return np.empty((0, 0), dtype=object)
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("ragged matrix rows")
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        for j, e in enumerate(r):
            out[i, j] = to_fraction(e)
    return out


def qzeros(n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    out = np.empty((n, m), dtype=object)
    out.fill(Fraction(0))
    return out


def qeye(n: int) -> np.ndarray:
    out = qzeros(n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def unit(n: int, i: int) -> np.ndarray:
    """Standard basis vector e_i (0-based) of length n."""
    v = qzeros(1, n)[0]
    v[i] = Fraction(1)
    return v


def outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object or b.dtype != object:
        return np.outer(a, b)
    ai, da = _scaled(a)
    bi, db = _scaled(b)
    return _unscale(np.outer(ai, bi).astype(object), da * db)


def _scaled(m: np.ndarray) -> tuple[np.ndarray, int]:
    """Integer array and common denominator d with m = ints / d."""
    d = math.lcm(*(Fraction(x).denominator for x in m.flat)) if m.size else 1
    if d == 1:
        ints = [int(x) for x in m.flat]
    else:
        ints = [int(x * d) for x in m.flat]
    return np.array(ints, dtype=object).reshape(m.shape), d


def _unscale(ints: np.ndarray, den: int) -> np.ndarray:
    if den == 1:
        vals = [Fraction(x) for x in ints.flat]
    else:
        vals = [Fraction(x, den) for x in ints.flat]
    return np.array(vals, dtype=object).reshape(ints.shape)


def qmatmul(*ms: np.ndarray) -> np.ndarray:
    """Exact product of rational matrices, done on integers after clearing denominators."""
    acc, den = _scaled(ms[0])
    for m in ms[1:]:
        ints, d = _scaled(m)
        acc = acc @ ints
        den *= d
    return _unscale(acc, den)


def is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in np.asarray(m).flat)


def exact_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def canonical_key(m: np.ndarray) -> tuple:
    """Hashable exact serialization of a rational matrix."""
    return (m.shape, tuple(Fraction(x) for x in m.flat))


def fmt_rational(x) -> str | int:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_jsonable(m: np.ndarray) -> list:
    return [to_jsonable(r) for r in m] if m.ndim > 1 else [fmt_rational(x) for x in m]


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Q. Returns (R, pivot columns)."""
    a = np.array(m, dtype=object, copy=True)
    if a.size == 0:
        return a, []
    nrows, ncols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        piv = next((i for i in range(row, nrows) if a[i, col] != 0), None)
        if piv is None:
            continue
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        a[row] = a[row] / a[row, col]
        for i in range(nrows):
            if i != row and a[i, col] != 0:
                a[i] = a[i] - a[i, col] * a[row]
        pivots.append(col)
        row += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    return len(rref(m)[1])


def nullspace(m: np.ndarray, ncols: int | None = None) -> list[np.ndarray]:
    """Rational basis of {x : m x = 0}; ``ncols`` is needed when m has no rows."""
    if m.size == 0:
        n = ncols if ncols is not None else (m.shape[1] if m.ndim == 2 else 0)
        return [unit(n, i) for i in range(n)]
    r, pivots = rref(m)
    n = m.shape[1]
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = qzeros(1, n)[0]
        v[free] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -r[row, free]
        basis.append(v)
    return basis


def det(m: np.ndarray) -> Fraction:
    """Exact determinant by fraction-preserving elimination."""
    a = np.array(m, dtype=object, copy=True)
    n = a.shape[0]
    sign = 1
    acc = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i, col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            sign = -sign
        acc *= a[col, col]
        for i in range(col + 1, n):
            if a[i, col] != 0:
                a[i] = a[i] - (a[i, col] / a[col, col]) * a[col]
    return sign * acc


def inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    r, pivots = rref(np.hstack([m, qeye(n)]))
    if pivots[:n] != list(range(n)):
        raise InputError("matrix is singular")
    return r[:, n:]


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IntersectionLattice:
    rank: int
    pairing: np.ndarray

    def __post_init__(self):
        if self.rank < 1:
            raise InputError("lattice rank must be >= 1")
        p = self.pairing
        if p.shape != (self.rank, self.rank):
            raise InputError(f"pairing must be {self.rank}x{self.rank}, got {p.shape}")
        if not exact_equal(p.T, -p):
            raise InputError("pairing not skew-symmetric")

    @classmethod
    def from_rows(cls, rows) -> "IntersectionLattice":
        p = qmat(rows)
        return cls(p.shape[0], p)

    @classmethod
    def standard_symplectic(cls, g: int) -> "IntersectionLattice":
        """Rank 2g lattice with block pairing [[0, I], [-I, 0]]."""
        p = qzeros(2 * g)
        for i in range(g):
            p[i, g + i] = Fraction(1)
            p[g + i, i] = Fraction(-1)
        return cls(2 * g, p)

    @property
    def nondegenerate(self) -> bool:
        return det(self.pairing) != 0


@dataclass(frozen=True, eq=False)
class CycleConfig:
    lattice: IntersectionLattice
    cycles: tuple

    def __post_init__(self):
        n = self.lattice.rank
        cycles = tuple(qvec(c) if not isinstance(c, np.ndarray) else c for c in self.cycles)
        object.__setattr__(self, "cycles", cycles)
        for k, d in enumerate(cycles, start=1):
            if d.shape != (n,):
                raise InputError(f"cycle {k} has length {d.shape[0]}, expected {n}")
            if is_zero(d):
                raise InputError(f"cycle {k} is zero")
            # automatic from skewness, checked anyway
            if pair(self.lattice, d, d) != 0:
                raise InputError(f"cycle {k} has nonzero self-pairing")
            if is_zero(self.lattice.pairing @ d):
                raise InputError(f"cycle {k} lies in the radical of the pairing (trivial monodromy)")

    @classmethod
    def build(cls, pairing_rows, cycles: Sequence) -> "CycleConfig":
        return cls(IntersectionLattice.from_rows(pairing_rows), tuple(qvec(c) for c in cycles))

    @property
    def r(self) -> int:
        return len(self.cycles)

    @property
    def n(self) -> int:
        return self.lattice.rank

    def covectors(self) -> np.ndarray:
        """r x n matrix whose k-th row is the covector a -> <a, delta_k>, i.e. (P delta_k)^T."""
        if not self.cycles:
            return np.empty((0, self.n), dtype=object)
        return np.array([self.lattice.pairing @ d for d in self.cycles], dtype=object)

    def cycle_matrix(self) -> np.ndarray:
        if not self.cycles:
            return np.empty((0, self.n), dtype=object)
        return np.array(self.cycles, dtype=object)

    @property
    def cycles_independent(self) -> bool:
        return rank(self.cycle_matrix()) == self.r if self.r else True

    def replace_cycle(self, k: int, delta: np.ndarray) -> "CycleConfig":
        cycles = list(self.cycles)
        cycles[k] = delta
        return CycleConfig(self.lattice, tuple(cycles))

    def permuted(self, perm: Sequence[int]) -> "CycleConfig":
        return CycleConfig(self.lattice, tuple(self.cycles[p] for p in perm))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def pair(lattice: IntersectionLattice, a, b) -> Fraction:
    a = a if isinstance(a, np.ndarray) else qvec(a)
    b = b if isinstance(b, np.ndarray) else qvec(b)
    n = lattice.rank
    if a.shape != (n,) or b.shape != (n,):
        raise InputError(f"vectors must have length {n}")
    return Fraction(a @ lattice.pairing @ b)


def intersection_matrix(config: CycleConfig) -> np.ndarray:
    """Lambda with lambda_ij = <delta_i, delta_j>."""
    r = config.r
    lam = qzeros(r)
    for i in range(r):
        for j in range(i + 1, r):
            v = pair(config.lattice, config.cycles[i], config.cycles[j])
            lam[i, j] = v
            lam[j, i] = -v
    return lam


def orthogonal_complement(config: CycleConfig) -> list[np.ndarray]:
    """Basis of {a : <a, delta_k> = 0 for every k}."""
    return nullspace(config.covectors(), ncols=config.n)

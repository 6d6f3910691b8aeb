"""Quantum connection of the resolved conifold and its monodromy around q = -1.

Basis e0..e3 has degrees (0, 2, 4, 6). Flat sections solve

    dY/dq = -(1/z) A(q) Y,

and the loop around the conifold point runs counterclockwise in q unless
``orientation="cw"``. The large-volume point q = 0 is never approached.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .lattice import CycleConfig, InputError, qmat, qzeros
from .pl_stokes import ResourceError, nilpotent

BASIS = ("e0", "e1", "e2", "e3")
DEGREES = (0, 2, 4, 6)
# (numerator, denominator) coefficients, lowest degree first: f(q) = (1 + 2q)/(1 + q)
F_NUM = (1, 2)
F_DEN = (1, 1)
POLE_SLOT = (2, 1)
EXTENDED_DPS = 30


class PoleError(ValueError):
    """Evaluation requested at the conifold point q = -1."""


class IntegrationError(RuntimeError):
    """Adaptive step size collapsed; ``state`` is the last accepted (s, Y)."""

    def __init__(self, msg, state=None):
        super().__init__(msg)
        self.state = state


class DomainWarning(UserWarning):
    pass


def poincare_pairing() -> np.ndarray:
    eta = qzeros(4)
    for a, b in ((1, 2), (0, 3)):
        eta[a, b] = eta[b, a] = Fraction(1)
    return eta


@dataclass(frozen=True, eq=False)
class FrobeniusData:
    z: complex = 1 + 0j
    labels: tuple = BASIS
    degrees: tuple = DEGREES
    eta: np.ndarray = field(default_factory=poincare_pairing)
    f_num: tuple = F_NUM
    f_den: tuple = F_DEN

    def __post_init__(self):
        if self.z == 0:
            raise InputError("z must be nonzero")

    def f(self, q):
        return _poly(self.f_num, q) / _poly(self.f_den, q)


def _poly(coeffs, x):
    return sum(c * x**k for k, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# potential and quantum product
# ---------------------------------------------------------------------------

def gw_potential(t1: complex, q: complex, D: int = 40) -> complex:
    """Classical cubic term plus the degree-D truncated instanton series."""
    if D < 1:
        raise InputError("D must be >= 1")
    if abs(q) >= 1:
        warnings.warn(f"|q| = {abs(q):g} >= 1: instanton series does not converge", DomainWarning)
    total = t1**3 / 6
    qd = 1
    for d in range(1, D + 1):
        qd = qd * q
        total += (-1) ** (d - 1) * qd / d**3
    return total


def f_series(q, D: int = 40):
    total, qd = 1, 1
    for d in range(1, D + 1):
        qd = qd * q
        total += (-1) ** (d - 1) * qd
    return total


def f_closed(q):
    if q == -1:
        raise PoleError("f has a pole at q = -1")
    if isinstance(q, (int, Fraction)):
        q = Fraction(q)
    return (1 + 2 * q) / (1 + q)


def quantum_mult_matrix(q) -> np.ndarray:
    """A(q): lower-triangular with subdiagonal (1, f(q), 1).

    Exact (object dtype) for int/Fraction input, complex128 otherwise.
    """
    f = f_closed(q)
    if isinstance(f, Fraction):
        a = qzeros(4)
        one = Fraction(1)
    else:
        a = np.zeros((4, 4), dtype=complex)
        one = 1.0
    a[1, 0], a[2, 1], a[3, 2] = one, f, one
    return a


def local_form() -> tuple[np.ndarray, np.ndarray]:
    """(A_hol, A_pole) with A(q) = A_hol + A_pole / (q + 1)."""
    a_hol = qmat([[0, 0, 0, 0], [1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0]])
    a_pole = qzeros(4)
    a_pole[POLE_SLOT] = Fraction(-1)
    return a_hol, a_pole


def _pmul(p, r):
    out = [Fraction(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(r):
            out[i + j] += a * b
    return out


def _psub(p, r):
    n = max(len(p), len(r))
    p = list(p) + [0] * (n - len(p))
    r = list(r) + [0] * (n - len(r))
    return [Fraction(a) - Fraction(b) for a, b in zip(p, r)]


def _entry_over_den(i, j):
    """Entry (i, j) of A(q) as a numerator polynomial over the common denominator 1 + q."""
    if (i, j) == (2, 1):
        return [Fraction(c) for c in F_NUM]
    if (i, j) in ((1, 0), (3, 2)):
        return [Fraction(c) for c in F_DEN]
    return [Fraction(0)]


def verify_local_form() -> bool:
    """Exact check of (1+q) A(q) = (1+q) A_hol + A_pole as polynomial identities in q."""
    a_hol, a_pole = local_form()
    den = [Fraction(c) for c in F_DEN]
    for i in range(4):
        for j in range(4):
            rhs = _pmul(den, [a_hol[i, j]])
            rhs[0] += a_pole[i, j]
            if any(c != 0 for c in _psub(_entry_over_den(i, j), rhs)):
                return False
    return True


def connection_residue(z) -> np.ndarray:
    """Residue at q = -1 of the connection matrix (1/z) A(q), i.e. A_pole / z."""
    if z == 0:
        raise InputError("z must be nonzero")
    _, a_pole = local_form()
    if isinstance(z, (int, Fraction)):
        return a_pole / Fraction(z)
    return a_pole.astype(complex) / z


# ---------------------------------------------------------------------------
# adaptive Dormand-Prince 5(4)
# ---------------------------------------------------------------------------

_C = (0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0)
_B4 = (5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


@dataclass
class StepStats:
    accepted: int = 0
    rejected: int = 0
    min_h: float = math.inf
    max_h: float = 0.0


def _dopri(rhs, y0, s0, s1, tol, max_steps, stats: StepStats, ext=False):
    """Integrate y' = rhs(s, y) from s0 to s1 with mixed abs/rel error control."""
    if ext:
        absval = np.vectorize(lambda v: float(abs(v)), otypes=[float])
    else:
        absval = np.abs
    span = s1 - s0
    h = span / 64
    s, y = s0, y0
    k1 = rhs(s, y)
    while s < s1:
        if stats.accepted + stats.rejected >= max_steps:
            raise ResourceError(f"tolerance {tol:g} not reached within {max_steps} steps",
                                partial=(s, y))
        if h < 1e-14 * span:
            raise IntegrationError(f"step size underflow at s={s:.6g}", state=(s, y))
        last = h >= s1 - s
        if last:
            h = s1 - s
        ks = [k1]
        for i in range(1, 7):
            yi = y + h * sum(a * k for a, k in zip(_A[i], ks))
            ks.append(rhs(s + _C[i] * h, yi))
        y5 = y + h * sum(b * k for b, k in zip(_B5, ks) if b)
        err = h * sum((b5 - b4) * k for b5, b4, k in zip(_B5, _B4, ks))
        scale = tol + tol * np.maximum(absval(y), absval(y5))
        enorm = float(np.sqrt(np.mean((absval(err) / scale) ** 2)))
        if enorm <= 1.0:
            s, y = (s1 if last else s + h), y5
            k1 = ks[6]  # FSAL
            stats.accepted += 1
            stats.min_h = min(stats.min_h, float(h))
            stats.max_h = max(stats.max_h, float(h))
            factor = 5.0 if enorm == 0 else min(5.0, 0.9 * enorm ** -0.2)
        else:
            stats.rejected += 1
            factor = max(0.2, 0.9 * enorm ** -0.2)
        h *= factor
    return y


# ---------------------------------------------------------------------------
# loop monodromy
# ---------------------------------------------------------------------------

@dataclass
class MonodromyResult:
    M: np.ndarray
    z: complex
    radius: float
    base: float
    orientation: str
    tol: float
    residual_unipotency: float
    nil_norm: float
    singular_values: np.ndarray
    eigenvalue_deviations: np.ndarray
    numerical_rank: int
    rank_threshold: float
    steps: StepStats

    @property
    def center(self) -> complex:
        return -1 + 0j

    @property
    def relative_unipotency(self) -> float:
        return self.residual_unipotency / self.nil_norm if self.nil_norm else math.inf

    def as_dict(self) -> dict:
        def cx(v):
            v = complex(v)
            return [v.real, v.imag]

        return {
            "loop": {
                "center": cx(self.center),
                "radius": self.radius,
                "base_point": cx(-1 + self.base),
                "orientation": self.orientation,
                "tol": self.tol,
            },
            "z": cx(self.z),
            "M": [[cx(v) for v in row] for row in self.M],
            "residual_unipotency": self.residual_unipotency,
            "nil_norm": self.nil_norm,
            "relative_unipotency": self.relative_unipotency,
            "singular_values": [float(s) for s in self.singular_values],
            "eigenvalue_deviations": [float(d) for d in self.eigenvalue_deviations],
            "numerical_rank": self.numerical_rank,
            "rank_threshold": self.rank_threshold,
            "steps": {
                "accepted": self.steps.accepted,
                "rejected": self.steps.rejected,
                "min_h": self.steps.min_h,
                "max_h": self.steps.max_h,
            },
        }


def _path_segments(radius, base, orientation, extended=False):
    """Pieces (q(s), dq/ds, s1) of the based loop around q = -1, each on [0, s1]."""
    sign = 1.0 if orientation == "ccw" else -1.0
    cexp, two_pi, i = (mpmath.exp, 2 * mpmath.pi, mpmath.mpc(0, 1)) if extended else (cmath.exp, 2 * math.pi, 1j)
    if extended:
        radius, base = mpmath.mpf(radius), mpmath.mpf(base)
    segs = []
    if base != radius:
        segs.append((lambda s: -1 + base + s * (radius - base), lambda s: radius - base, 1.0))
    segs.append((
        lambda t: -1 + radius * cexp(i * sign * t),
        lambda t: i * sign * radius * cexp(i * sign * t),
        two_pi,
    ))
    if base != radius:
        segs.append((lambda s: -1 + radius + s * (base - radius), lambda s: base - radius, 1.0))
    return segs


def numerical_rank(m: np.ndarray, rel: float = 1e-6) -> tuple[int, float, np.ndarray]:
    """Count singular values above ``rel * max(1, ||m + Id||_2)``."""
    sv = np.linalg.svd(m, compute_uv=False)
    scale = max(1.0, float(np.linalg.norm(m + np.eye(m.shape[0]), 2)))
    thr = rel * scale
    return int(np.sum(sv > thr)), thr, sv


def integrate_loop(z: complex = 1.0, radius: float = 0.3, tol: float = 1e-10,
                   max_steps: int = 200_000, orientation: str = "ccw",
                   base: float | None = 0.5, extended: bool = False) -> MonodromyResult:
    """Transport a fundamental matrix once around q = -1 and return the monodromy.

    Y = Id at the base point q = -1 + base; the path runs radially to the
    circle |q + 1| = radius, around it, and back. ``base=None`` starts on the
    circle itself. M = Y(end) Y(start)^-1 maps initial data to transported data.
    """
    z = complex(z)
    if z == 0:
        raise InputError("z must be nonzero")
    if not 0 < radius < 1:
        raise InputError("radius must lie in (0, 1): loop would enclose q=0")
    base = radius if base is None else float(base)
    if not 0 < base < 1:
        raise InputError("base offset must lie in (0, 1)")
    if orientation not in ("ccw", "cw"):
        raise InputError("orientation must be 'ccw' or 'cw'")

    stats = StepStats()
    with mpmath.workdps(EXTENDED_DPS):
        y = _transport(z, radius, base, orientation, tol, max_steps, stats, extended)
    m = np.array(y.tolist(), dtype=complex) if extended else y
    d = m - np.eye(4)
    rnk, thr, sv = numerical_rank(d)
    return MonodromyResult(
        M=m,
        z=z,
        radius=radius,
        base=base,
        orientation=orientation,
        tol=tol,
        residual_unipotency=float(np.linalg.norm(d @ d)),
        nil_norm=float(np.linalg.norm(d)),
        singular_values=sv,
        eigenvalue_deviations=np.sort(np.abs(np.linalg.eigvals(m) - 1))[::-1],
        numerical_rank=rnk,
        rank_threshold=thr,
        steps=stats,
    )


def _transport(z, radius, base, orientation, tol, max_steps, stats, extended):
    if extended:
        y = np.array([[mpmath.mpc(int(i == j)) for j in range(4)] for i in range(4)], dtype=object)
        zz = mpmath.mpc(z)
    else:
        y = np.eye(4, dtype=complex)
        zz = z
    for q_of, dq_of, s1 in _path_segments(radius, base, orientation, extended):
        def rhs(s, yy, q_of=q_of, dq_of=dq_of):
            q, dq = q_of(s), dq_of(s)
            f = (1 + 2 * q) / (1 + q)
            c = -dq / zz
            out = yy * 0
            out[1] = c * yy[0]
            out[2] = (c * f) * yy[1]
            out[3] = c * yy[2]
            return out

        y = _dopri(rhs, y, 0, s1, tol, max_steps, stats, ext=extended)
    return y


# ---------------------------------------------------------------------------
# comparison with the Picard-Lefschetz operator
# ---------------------------------------------------------------------------

def jordan_type(u: np.ndarray, rel: float = 1e-6) -> tuple[int, ...]:
    """Block sizes (descending) of a unipotent matrix from ranks of (u - Id)^k."""
    n = u.shape[0]
    d = np.asarray(u, dtype=complex) - np.eye(n)
    ranks = [n]
    p = np.eye(n, dtype=complex)
    for _ in range(n):
        p = p @ d
        ranks.append(numerical_rank(p, rel)[0] if np.any(p) else 0)
        if ranks[-1] == 0:
            break
    ranks += [0] * (n + 2 - len(ranks))
    # number of blocks of size >= k is rank((u-1)^(k-1)) - rank((u-1)^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, n + 1)] + [0]
    blocks = []
    for k in range(1, n + 1):
        blocks += [k] * (at_least[k - 1] - at_least[k])
    return tuple(sorted(blocks, reverse=True))


def unipotent_log(u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    d = np.asarray(u, dtype=complex) - np.eye(n)
    out = np.zeros((n, n), dtype=complex)
    p = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        p = p @ d
        out += ((-1) ** (k + 1) / k) * p
    return out


def monodromy_vs_pl(result: MonodromyResult, config: CycleConfig, z: complex | None = None,
                    unipotency_tol: float = 1e-8) -> dict:
    """Compare conjugacy invariants of a numerical monodromy with Id + (2 pi i / z) N."""
    if config.r != 1:
        raise InputError("comparison needs a single-node configuration (r = 1)")
    if config.n != result.M.shape[0]:
        raise InputError(f"configuration rank {config.n} != monodromy size {result.M.shape[0]}")
    z = complex(result.z if z is None else z)
    n_pl = np.array(nilpotent(config, 1), dtype=float).astype(complex)
    model = np.eye(config.n) + (2j * math.pi / z) * n_pl
    eig_ok = bool(np.max(result.eigenvalue_deviations) < unipotency_tol)
    unip = eig_ok and result.relative_unipotency < unipotency_tol
    rank_num = numerical_rank(unipotent_log(result.M))[0]
    rank_model = numerical_rank(unipotent_log(model))[0]
    jt_num, jt_model = jordan_type(result.M), jordan_type(model)
    return {
        "unipotent": unip,
        "rank_log_numeric": rank_num,
        "rank_log_model": rank_model,
        "jordan_numeric": list(jt_num),
        "jordan_model": list(jt_model),
        "agree": unip and rank_num == rank_model and jt_num == jt_model,
    }

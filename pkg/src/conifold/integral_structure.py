"""Gamma-class integral structure and its K-theoretic shadows.

Graded cohomology classes are length-4 vectors indexed by degree 0, 2, 4, 6.
Euler-pairing data (chi) is user input; nothing here computes Ext groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .lattice import CycleConfig, InputError, exact_equal, inverse, outer, qmat, qvec, rank
from .pl_stokes import pl_operator

ZETA3 = 1.2020569031595942
DEGREES = (0, 2, 4, 6)


@dataclass(frozen=True)
class GammaClass:
    g0: object
    g2: object
    g4: object
    g6: object
    ch2: object = 0
    ch3: object = 0

    def vector(self) -> list:
        return [self.g0, self.g2, self.g4, self.g6]


def gamma_class(ch2=0, ch3=0, *, exact: bool = False) -> GammaClass:
    """Gamma class of a Calabi-Yau threefold (c1 = 0) from ch2, ch3 of the tangent bundle.

    With ``exact`` the coefficients are sympy expressions in pi and zeta(3).
    """
    if exact:
        two_pi_i = 2 * sympy.pi * sympy.I
        g4 = sympy.simplify(sympy.zeta(2) / two_pi_i**2 * sympy.nsimplify(ch2))
        g6 = sympy.simplify(sympy.zeta(3) / two_pi_i**3 * sympy.nsimplify(ch3))
        return GammaClass(sympy.Integer(1), sympy.Integer(0), g4, g6, ch2, ch3)
    two_pi_i = 2j * math.pi
    zeta2 = math.pi**2 / 6
    return GammaClass(1, 0, zeta2 / two_pi_i**2 * ch2, ZETA3 / two_pi_i**3 * ch3, ch2, ch3)


def cup(a, b) -> list:
    """Product in the graded algebra truncated above degree 6."""
    if len(a) != 4 or len(b) != 4:
        raise InputError("graded vectors must have 4 slots (degrees 0, 2, 4, 6)")
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(4)]


def iritani_map(ch_vector, gamma: GammaClass) -> list:
    prod = cup(list(ch_vector), gamma.vector())
    return [c * (2j * math.pi) ** (-k) for k, c in enumerate(prod)]


@dataclass
class NInt:
    matrix: np.ndarray
    contraction: object
    rank: int

    @property
    def unipotent(self) -> bool:
        return self.contraction == 0


def _as_vec(v):
    try:
        return qvec(v)
    except InputError:
        return np.asarray(v, dtype=complex)


def n_int(chi_with_S, chi_S_with) -> NInt:
    """Outer product (chi(gamma_i, S) * chi(S, gamma_j))_ij.

    ``contraction`` is c = sum_j chi(S, gamma_j) chi(gamma_j, S), so N^2 = c N.
    """
    a, b = _as_vec(chi_with_S), _as_vec(chi_S_with)
    if a.dtype != b.dtype:
        a, b = a.astype(complex), b.astype(complex)
    if a.shape != b.shape:
        raise InputError("chi vectors must have equal length")
    m = outer(a, b)
    c = b @ a
    if m.dtype == object:
        rk = rank(m)
    else:
        m = m.astype(complex)
        rk = int(np.linalg.matrix_rank(m)) if np.any(m) else 0
    return NInt(m, c, rk)


def stokes_from_n_int(n: NInt) -> np.ndarray:
    eye = np.eye(n.matrix.shape[0], dtype=int).astype(object if n.matrix.dtype == object else complex)
    return eye + n.matrix


def spherical_twist(gamma, S, euler_pairing) -> np.ndarray:
    """gamma - chi(S, gamma) S, with chi(x, y) = x^T G y."""
    if euler_pairing is None:
        raise InputError("spherical twist needs an Euler pairing matrix")
    g = qmat(euler_pairing) if not isinstance(euler_pairing, np.ndarray) else euler_pairing
    gamma = qvec(gamma) if not isinstance(gamma, np.ndarray) else gamma
    S = qvec(S) if not isinstance(S, np.ndarray) else S
    return gamma - (S @ g @ gamma) * S


@dataclass(frozen=True, eq=False)
class Correspondence:
    """K-theory -> cohomology data: ch as a matrix, the spherical class, and chi."""

    ch: np.ndarray
    spherical: np.ndarray
    euler_pairing: np.ndarray
    config: CycleConfig
    node: int = 1


def sample_correspondence() -> Correspondence:
    """Four-class sample on the standard rank-4 symplectic lattice with delta = e1.

    ch is an invertible integer matrix, S = -ch^-1 delta, and chi = ch^T P ch,
    so ch intertwines the Euler pairing with the intersection pairing.
    """
    config = CycleConfig.build(
        [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], [[1, 0, 0, 0]]
    )
    ch = qmat([[1, 0, 0, 0], [1, 1, 0, 0], [0, 1, 1, 0], [2, -1, 1, 1]])
    spherical = -(inverse(ch) @ config.cycles[0])
    chi = ch.T @ config.lattice.pairing @ ch
    return Correspondence(ch, spherical, chi, config)


def decategorification_check(corr: Correspondence, classes=None) -> dict:
    """Check ch(T_S gamma) = T_PL(ch gamma) exactly on each class (default: basis)."""
    n = corr.ch.shape[0]
    delta = corr.config.cycles[corr.node - 1]
    premise_ch = exact_equal(corr.ch @ corr.spherical, -delta)
    premise_pair = exact_equal(corr.ch.T @ corr.config.lattice.pairing @ corr.ch, corr.euler_pairing)
    t_pl = pl_operator(corr.config, corr.node)
    if classes is None:
        classes = [np.eye(n, dtype=int)[i].astype(object) * Fraction(1) for i in range(n)]
    results = []
    for g in classes:
        lhs = corr.ch @ spherical_twist(g, corr.spherical, corr.euler_pairing)
        rhs = t_pl @ (corr.ch @ g)
        results.append(exact_equal(lhs, rhs))
    return {
        "premise_ch_S_is_minus_delta": premise_ch,
        "premise_pairing_intertwined": premise_pair,
        "per_class": results,
        "commutes": all(results),
    }


def pairing_compatibility(chi, solutions, flat_pairing, tol: float = 1e-10) -> dict:
    """Check chi(E_i, E_j) = -<s(E_i), s(E_j)>_flat entrywise.

    Rational inputs are compared exactly; anything else to within ``tol``.
    """
    try:
        chi_m, sol, flat = qmat(chi), qmat(solutions), qmat(flat_pairing)
        exact = True
    except InputError:
        chi_m = np.asarray(chi, dtype=complex)
        sol = np.asarray(solutions, dtype=complex)
        flat = np.asarray(flat_pairing, dtype=complex)
        exact = False
    k = chi_m.shape[0]
    if chi_m.shape != (k, k) or sol.shape[0] != k or flat.shape != (sol.shape[1], sol.shape[1]):
        raise InputError("inconsistent dimensions for chi, solutions and flat pairing")
    rhs = -(sol @ flat @ sol.T)
    if exact:
        failures = [(i, j) for i in range(k) for j in range(k) if chi_m[i, j] != rhs[i, j]]
        dev = 0.0 if not failures else max(abs(float(chi_m[i, j] - rhs[i, j])) for i, j in failures)
    else:
        diff = np.abs(chi_m - rhs)
        failures = [tuple(int(x) for x in ij) for ij in zip(*np.nonzero(diff > tol))]
        dev = float(diff.max()) if diff.size else 0.0
    return {"passed": not failures, "exact": exact, "max_deviation": dev, "failures": failures}


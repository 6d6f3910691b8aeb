"""Picard-Lefschetz and Stokes operators built from a cycle configuration.

All operators are exact rational matrices acting on column vectors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .lattice import (
    CycleConfig,
    InputError,
    canonical_key,
    exact_equal,
    intersection_matrix,
    is_zero,
    outer,
    qeye,
    qmatmul,
    _scaled,
    _unscale,
    rank,
)

DEFAULT_CAP = 100_000


class ResourceError(RuntimeError):
    """A computation exceeded its configured budget; ``partial`` holds what was done."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


def _check_index(config: CycleConfig, k: int) -> None:
    if not 1 <= k <= config.r:
        raise InputError(f"cycle index {k} out of range 1..{config.r}")


def _check_pair(config: CycleConfig, i: int, j: int) -> None:
    _check_index(config, i)
    _check_index(config, j)
    if i == j:
        raise InputError("indices must differ")


def nilpotent(config: CycleConfig, k: int) -> np.ndarray:
    """Matrix of a -> <a, delta_k> delta_k (1-based k)."""
    _check_index(config, k)
    d = config.cycles[k - 1]
    return outer(d, config.lattice.pairing @ d)


def pl_operator(config: CycleConfig, k: int) -> np.ndarray:
    return qeye(config.n) + nilpotent(config, k)


def pl_inverse(config: CycleConfig, k: int) -> np.ndarray:
    # N^2 = 0, so (Id + N)^-1 = Id - N
    return qeye(config.n) - nilpotent(config, k)


def stokes_operator(config: CycleConfig, k: int) -> np.ndarray:
    """At a regular singular point the Stokes operator is the local monodromy."""
    return pl_operator(config, k)


@dataclass(frozen=True, eq=False)
class OperatorSet:
    config: CycleConfig
    nilpotents: tuple
    pl_ops: tuple
    stokes_ops: tuple

    @classmethod
    def from_config(cls, config: CycleConfig) -> "OperatorSet":
        ns = tuple(nilpotent(config, k) for k in range(1, config.r + 1))
        ident = qeye(config.n)
        ts = tuple(ident + n for n in ns)
        return cls(config, ns, ts, ts)

    def check(self) -> dict[str, bool]:
        """Exact per-generator invariants: N^2 = 0, rank N = 1, S^-1 = Id - N."""
        ident = qeye(self.config.n)
        return {
            "nilpotent_square_zero": all(is_zero(qmatmul(n, n)) for n in self.nilpotents),
            "nilpotent_rank_one": all(rank(n) == 1 for n in self.nilpotents),
            "stokes_inverse": all(
                exact_equal(qmatmul(s, ident - n), ident) for s, n in zip(self.stokes_ops, self.nilpotents)
            ),
        }


def _integer_parts(config: CycleConfig, i: int, j: int):
    """Integer data for the pair (i, j) after clearing denominators.

    With P = Pi/dp and delta_k = Dk/dk, N_k = NIk/s_k where NIk = outer(Dk, Pi Dk)
    and s_k = dk^2 dp; lambda_ij = L/(di dj dp), so lambda_ij^2 = L^2/(s_i s_j).
    Working on integers avoids Fraction overhead in the exact checks.
    """
    pi, dp = _scaled(config.lattice.pairing)
    di_int, di = _scaled(config.cycles[i - 1])
    dj_int, dj = _scaled(config.cycles[j - 1])
    pdi, pdj = pi.dot(di_int), pi.dot(dj_int)
    nii = np.outer(di_int, pdi).astype(object)
    nij = np.outer(dj_int, pdj).astype(object)
    lam = int(di_int.dot(pdj))
    return nii, nij, di * di * dp, dj * dj * dp, lam, (di_int, dj_int, pdi, pdj)


def _commutator_int(lam, vecs):
    """Integer numerator of [N_i, N_j]; its denominator is s_i s_j."""
    di_int, dj_int, pdi, pdj = vecs
    return np.outer(-lam * di_int, pdj).astype(object) - np.outer(lam * dj_int, pdi).astype(object)


def commutator_nilpotent(config: CycleConfig, i: int, j: int, *, check: bool = True) -> np.ndarray:
    """[N_i, N_j] from the closed form <a,d_j> l_ji d_i - <a,d_i> l_ij d_j.

    With ``check`` the result is compared against N_i N_j - N_j N_i and a
    mismatch raises ``AssertionError``.
    """
    _check_pair(config, i, j)
    nii, nij, si, sj, lam, vecs = _integer_parts(config, i, j)
    closed = _commutator_int(lam, vecs)
    if check:
        direct = nii.dot(nij) - nij.dot(nii)
        if not np.array_equal(closed, direct):
            raise AssertionError(f"closed-form commutator differs from direct product for ({i},{j})")
    return _unscale(closed, si * sj)


def _group_commutator_ints(config: CycleConfig, i: int, j: int):
    """Integer numerators of S_i S_j S_i^-1 S_j^-1 and of its closed form, over s_i^2 s_j^2."""
    nii, nij, si, sj, lam, vecs = _integer_parts(config, i, j)
    n = config.n
    eye = np.array([[int(a == b) for b in range(n)] for a in range(n)], dtype=object)
    prod = (si * eye + nii).dot(sj * eye + nij).dot(si * eye - nii).dot(sj * eye - nij)
    closed = (si * si * sj * sj * eye + si * sj * _commutator_int(lam, vecs)
              + lam * lam * (sj * nii - si * nij - nii.dot(nij)))
    return prod, closed, si * si * sj * sj


def group_commutator_closed_form(config: CycleConfig, i: int, j: int) -> np.ndarray:
    """Id + [N_i, N_j] + lambda_ij^2 (N_i - N_j - N_i N_j).

    Expanding (Id + N_i)(Id + N_j)(Id - N_i)(Id - N_j) with N^2 = 0 leaves the
    cubic and quartic words N_j N_i N_j, N_i N_j N_i, N_i N_j N_i N_j, which
    collapse to the lambda^2 term. The first-order part Id + [N_i, N_j] is
    exact only when lambda_ij = 0.
    """
    _check_pair(config, i, j)
    _, closed, den = _group_commutator_ints(config, i, j)
    return _unscale(closed, den)


def group_commutator(config: CycleConfig, i: int, j: int, *, check: bool = True) -> np.ndarray:
    """S_i S_j S_i^-1 S_j^-1, optionally checked against the exact closed form."""
    _check_pair(config, i, j)
    prod, closed, den = _group_commutator_ints(config, i, j)
    if check and not np.array_equal(prod, closed):
        raise AssertionError(f"[S_{i},S_{j}] differs from its closed form")
    return _unscale(prod, den)


def first_order_commutator_holds(config: CycleConfig, i: int, j: int) -> bool:
    """Whether [S_i, S_j] = Id + [N_i, N_j] exactly (true iff lambda_ij = 0)."""
    expected = qeye(config.n) + commutator_nilpotent(config, i, j, check=False)
    return exact_equal(group_commutator(config, i, j, check=False), expected)


def braid_holds(config: CycleConfig, i: int, j: int) -> bool:
    ti, tj = pl_operator(config, i), pl_operator(config, j)
    return exact_equal(qmatmul(ti, tj, ti), qmatmul(tj, ti, tj))


def relation_classify(config: CycleConfig, i: int, j: int) -> str:
    """Classify the pair as 'commuting', 'braid' or 'neither' by exact matrix comparison."""
    _check_pair(config, i, j)
    ti, tj = pl_operator(config, i), pl_operator(config, j)
    commute = exact_equal(qmatmul(ti, tj), qmatmul(tj, ti))
    lij = Fraction(config.cycles[i - 1] @ config.lattice.pairing @ config.cycles[j - 1])
    if commute != (lij == 0):
        raise AssertionError(f"commutation of T_{i},T_{j} disagrees with lambda_{i}{j} = {lij}")
    if commute:
        return "commuting"
    braid = braid_holds(config, i, j)
    if abs(lij) == 1 and not braid:
        raise AssertionError(f"|lambda_{i}{j}| = 1 but the braid relation fails")
    return "braid" if braid else "neither"


@dataclass
class GroupExploration:
    element_count: int
    abelian: bool
    max_len: int
    complete: bool = True
    words: list | None = field(default=None)


def _generators(config: CycleConfig):
    gens = []
    for k in range(1, config.r + 1):
        gens.append((f"T{k}", pl_operator(config, k)))
        gens.append((f"T{k}^-1", pl_inverse(config, k)))
    return gens


def group_explore(config: CycleConfig, max_len: int, *, cap: int = DEFAULT_CAP,
                  keep_words: bool = False) -> GroupExploration:
    """Breadth-first enumeration of distinct elements given by words of length <= max_len.

    Elements are deduplicated by exact matrix key; the BFS order is fixed so the
    count is deterministic. Raises :class:`ResourceError` past ``cap`` elements.
    """
    if max_len < 1:
        raise InputError("max_len must be >= 1")
    if config.r < 1:
        raise InputError("need at least one cycle")
    gens = _generators(config)
    abelian = all(
        exact_equal(qmatmul(gens[2 * a][1], gens[2 * b][1]), qmatmul(gens[2 * b][1], gens[2 * a][1]))
        for a, b in combinations(range(config.r), 2)
    )
    ident = qeye(config.n)
    seen = {canonical_key(ident): ""}
    frontier = deque([(ident, "")])
    for _ in range(max_len):
        nxt = deque()
        for mat, word in frontier:
            for name, g in gens:
                m = qmatmul(mat, g)
                key = canonical_key(m)
                if key in seen:
                    continue
                seen[key] = f"{word} {name}".strip()
                nxt.append((m, seen[key]))
                if len(seen) > cap:
                    partial = GroupExploration(len(seen), abelian, max_len, complete=False,
                                               words=list(seen.values()) if keep_words else None)
                    raise ResourceError(f"group exploration exceeded cap {cap}", partial)
        frontier = nxt
    words = list(seen.values()) if keep_words else None
    return GroupExploration(len(seen), abelian, max_len, words=words)


def hurwitz_mutate(config: CycleConfig, i: int, j: int, *, inverse: bool = False) -> CycleConfig:
    """Replace delta_i by delta_i - lambda_ij delta_j (or by delta_i + lambda_ij delta_j
    when ``inverse``, which undoes the forward move).

    The operator of the new cycle is checked exactly against T_j^-1 T_i T_j
    (forward) or T_j T_i T_j^-1 (inverse). With pair(a, b) = a^T P b these are
    the conjugations matching the reflection formula, because T_j^-1 sends
    delta_i to delta_i - lambda_ij delta_j.
    """
    _check_pair(config, i, j)
    lam = intersection_matrix(config)
    lij = lam[i - 1, j - 1]
    if lij == 0:
        return config
    sign = 1 if inverse else -1
    new_delta = config.cycles[i - 1] + sign * lij * config.cycles[j - 1]
    mutated = config.replace_cycle(i - 1, new_delta)
    ti, tj, tj_inv = pl_operator(config, i), pl_operator(config, j), pl_inverse(config, j)
    expected = qmatmul(tj, ti, tj_inv) if inverse else qmatmul(tj_inv, ti, tj)
    if not exact_equal(pl_operator(mutated, i), expected):
        raise AssertionError("mutated operator does not match the conjugated T_i")
    return mutated

"""Rigid/flexible atom bookkeeping at the level of dimensions and gradings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .lattice import (
    CycleConfig,
    InputError,
    exact_equal,
    fmt_rational,
    intersection_matrix,
    nullspace,
    orthogonal_complement,
    qmatmul,
    qzeros,
    rank,
)
from .pl_stokes import nilpotent, stokes_operator


class ConsistencyError(AssertionError):
    """Two routes to the same invariant disagreed."""


@dataclass(frozen=True)
class AtomDecomposition:
    n: int
    rigid_dim: int
    flexible_count: int
    flexible_dims: tuple
    vanishing_dim: int
    overlap_dim: int
    covector_rank: int
    splits: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "rigid_dim": self.rigid_dim,
            "flexible_count": self.flexible_count,
            "flexible_dims": list(self.flexible_dims),
            "vanishing_dim": self.vanishing_dim,
            "overlap_dim": self.overlap_dim,
            "covector_rank": self.covector_rank,
            "splits": self.splits,
        }


def _offdiag_zero(lam: np.ndarray) -> bool:
    r = lam.shape[0]
    return all(lam[i, j] == 0 for i in range(r) for j in range(r) if i != j)


def decompose(config: CycleConfig) -> AtomDecomposition:
    """Rigid sector, vanishing lines and their overlap.

    Since every N_k squares to zero, im N_k sits inside ker N_k, so the
    pieces are reported side by side rather than as a direct sum.
    """
    n, r = config.n, config.r
    rigid = orthogonal_complement(config)
    cyc = config.cycle_matrix()
    vanishing_dim = rank(cyc) if r else 0
    if rigid and r:
        joint = rank(np.vstack([cyc, np.array(rigid, dtype=object)]))
    else:
        joint = vanishing_dim + len(rigid)
    # flexible rank is 1 for every node: N_k is the rank-one map onto Q.delta_k
    flex = tuple(rank(nilpotent(config, k)) for k in range(1, r + 1))
    return AtomDecomposition(
        n=n,
        rigid_dim=len(rigid),
        flexible_count=r,
        flexible_dims=flex,
        vanishing_dim=vanishing_dim,
        overlap_dim=vanishing_dim + len(rigid) - joint,
        covector_rank=rank(config.covectors()) if r else 0,
        splits=_offdiag_zero(intersection_matrix(config)),
    )


@dataclass(frozen=True)
class InteractionGraph:
    vertices: tuple
    edges: tuple          # (i, j, lambda_ij) with i < j, 1-based
    components: tuple     # sorted tuples of vertices

    @property
    def has_edge(self) -> bool:
        return bool(self.edges)

    def as_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"i": i, "j": j, "lambda": fmt_rational(l)} for i, j, l in self.edges],
            "components": [list(c) for c in self.components],
        }


def _components(r: int, edges) -> tuple:
    parent = list(range(r + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in edges:
        a, b = find(i), find(j)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(1, r + 1):
        groups.setdefault(find(v), []).append(v)
    return tuple(sorted(tuple(g) for g in groups.values()))


def interaction_graph(config: CycleConfig) -> InteractionGraph:
    lam = intersection_matrix(config)
    r = config.r
    edges = tuple(
        (i + 1, j + 1, lam[i, j]) for i, j in combinations(range(r), 2) if lam[i, j] != 0
    )
    return InteractionGraph(tuple(range(1, r + 1)), edges, _components(r, edges))


def stokes_abelian(config: CycleConfig) -> bool:
    ops = [stokes_operator(config, k) for k in range(1, config.r + 1)]
    return all(exact_equal(qmatmul(a, b), qmatmul(b, a)) for a, b in combinations(ops, 2))


def nnf_report(config: CycleConfig, *, strict: bool = True) -> dict:
    """Evaluate the four interaction criteria independently and cross-check them.

    Each flag is computed by its own route: operator commutation, graph edges,
    the off-diagonal of Lambda, and the splitting of the decomposition.
    """
    abelian = stokes_abelian(config)
    has_edge = interaction_graph(config).has_edge
    lam_nonzero = not _offdiag_zero(intersection_matrix(config))
    splits = decompose(config).splits
    consistent = (not abelian) == has_edge == lam_nonzero == (not splits)
    if strict and not consistent:
        raise ConsistencyError(
            f"interaction criteria disagree: abelian={abelian} edge={has_edge} "
            f"lambda_offdiag={lam_nonzero} splits={splits}"
        )
    return {
        "stokes_abelian": abelian,
        "graph_has_edge": has_edge,
        "lambda_offdiag_nonzero": lam_nonzero,
        "splits": splits,
        "consistent": consistent,
    }


def euler_grading(degrees) -> list[Fraction]:
    """Eigenvalue deg/2 - 3/2 of the grading operator on each basis element."""
    out = []
    for d in degrees:
        if d % 2:
            raise InputError(f"odd cohomological degree {d}; basis must be even-graded")
        if d not in (0, 2, 4, 6):
            raise InputError(f"degree {d} outside 0..6")
        out.append(Fraction(d, 2) - Fraction(3, 2))
    return out


def hodge_delta(r: int) -> tuple[int, int]:
    """Generic change (h11, h21) across a transition contracting r nodes."""
    if r < 0:
        raise InputError("r must be >= 0")
    return r, -r


def clemens_schmid_dims(config: CycleConfig) -> dict:
    """Rank-nullity bookkeeping for the total nilpotent N_sum = sum_k N_k.

    ``ker_dim`` is the common kernel of the covectors <., delta_k>;
    ``total_ker_dim`` is ker N_sum, which can be larger when cycles are dependent.
    """
    n = config.n
    if config.r == 0:
        return {"ker_dim": n, "total_ker_dim": n, "im_dim": 0, "quotient_dim": 0, "exact": True}
    n_sum = sum((nilpotent(config, k) for k in range(1, config.r + 1)), start=qzeros(n))
    im_dim = rank(n_sum)
    total_ker = len(nullspace(n_sum))
    quotient = n - total_ker
    return {
        "ker_dim": n - rank(config.covectors()),
        "total_ker_dim": total_ker,
        "im_dim": im_dim,
        "quotient_dim": quotient,
        "exact": quotient == im_dim,
    }


def ext_dimensions(r: int, degree: int, *, interacting: bool = False) -> int | str:
    """Dimension of the degree-``degree`` extension group of the nodal sector.

    Degree 1 is one-dimensional per node. Higher degrees vanish for
    non-interacting nodes; for interacting configurations degree 2 is
    returned as ``"unknown"``.
    """
    if degree < 1:
        raise InputError("degree must be >= 1")
    if r < 0:
        raise InputError("r must be >= 0")
    if degree == 1:
        return r
    if degree == 2 and interacting and r >= 2:
        return "unknown"
    return 0

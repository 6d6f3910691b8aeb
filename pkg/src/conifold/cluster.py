"""Fock-Goncharov coordinates X_k = exp(2 pi i Z_k / z) and their mutation."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction

from .lattice import CycleConfig, InputError, intersection_matrix
from .pl_stokes import hurwitz_mutate


DEGENERATE_TOL = 1e-12


class DegenerateCoordinateWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ClusterState:
    coords: tuple
    z: complex
    central_charges: tuple | None = None

    @property
    def has_central_charges(self) -> bool:
        return self.central_charges is not None

    def as_dict(self) -> dict:
        cx = lambda v: [complex(v).real, complex(v).imag]  # noqa: E731
        return {
            "z": cx(self.z),
            "coords": [cx(x) for x in self.coords],
            "central_charges": None if self.central_charges is None else [cx(c) for c in self.central_charges],
        }


def fg_coords(Z_list, z) -> ClusterState:
    z = complex(z)
    if z == 0:
        raise InputError("z must be nonzero")
    zs = tuple(complex(v) for v in Z_list)
    return ClusterState(tuple(cmath.exp(2j * math.pi * v / z) for v in zs), z, zs)


def fg_mutate(state: ClusterState, lambda12) -> ClusterState:
    """X1 -> X1 (1 + X2), X2 -> X2 when lambda12 != 0; identity otherwise.

    The mutated state keeps coordinates only (central charges are dropped).
    """
    if len(state.coords) != 2:
        raise InputError("cluster mutation is defined for two-node states")
    if Fraction(lambda12) == 0:
        return state
    x1, x2 = state.coords
    if abs(1 + x2) < DEGENERATE_TOL:
        warnings.warn("X2 = -1 sends X1' to 0", DegenerateCoordinateWarning)
    return replace(state, coords=(x1 * (1 + x2), x2), central_charges=None)


def mutate_and_compare(config: CycleConfig, state: ClusterState, i: int = 1, j: int = 2) -> dict:
    """Put linear central-charge transport next to the cluster formula.

    Linear transport uses Z_i' = Z_i - lambda_ij Z_j, i.e. X_i X_j^(-lambda_ij);
    the cluster branch is X_i (1 + X_j). No equality is asserted.
    """
    if config.r != 2 or len(state.coords) != 2:
        raise InputError("comparison needs a two-node configuration and state")
    lam = intersection_matrix(config)[i - 1, j - 1]
    mutated = hurwitz_mutate(config, i, j)
    xi, xj = state.coords[i - 1], state.coords[j - 1]
    if state.has_central_charges:
        zi = state.central_charges[i - 1] - float(lam) * state.central_charges[j - 1]
        linear = cmath.exp(2j * math.pi * zi / state.z)
    else:
        linear = xi * xj ** (-float(lam))
    cluster = fg_mutate(state, lam).coords[i - 1]
    return {
        "lambda": lam,
        "mutated_cycles": mutated.cycles,
        "linear_transport": linear,
        "cluster": cluster,
        "discrepancy": abs(cluster - linear),
    }

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conifold.cluster import (
    ClusterState,
    DegenerateCoordinateWarning,
    fg_coords,
    fg_mutate,
    mutate_and_compare,
)
from conifold.lattice import InputError
from conifold.pl_stokes import hurwitz_mutate

small = st.floats(-2, 2, allow_nan=False)


def test_fg_coords_examples():
    assert fg_coords([0], 1).coords == (1,)
    z = 0.8 + 0.3j
    assert abs(fg_coords([z / 2], z).coords[0] + 1) < 1e-12
    x = fg_coords([0.25j], 1).coords[0]
    assert abs(abs(x) - math.exp(-2 * math.pi * 0.25)) < 1e-14
    with pytest.raises(InputError):
        fg_coords([1], 0)


@settings(max_examples=50, deadline=None)
@given(small, small, small, small)
def test_fg_coords_is_exponential(a, b, c, d):
    z = 1.3 - 0.2j
    z1, z2 = complex(a, b), complex(c, d)
    lhs = fg_coords([z1 + z2], z).coords[0]
    rhs = fg_coords([z1], z).coords[0] * fg_coords([z2], z).coords[0]
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_fg_mutate_examples():
    state = ClusterState((1, 1), 1)
    assert fg_mutate(state, 1).coords == (2, 1)
    assert fg_mutate(state, 0) is state
    s = fg_coords([0.1, 0.2 + 0.1j], 1)
    out = fg_mutate(s, -2)
    assert out.coords[1] == s.coords[1]
    assert out.coords[0] == s.coords[0] * (1 + s.coords[1])
    assert out.central_charges is None and s.has_central_charges


def test_fg_mutate_degenerate_warns():
    with pytest.warns(DegenerateCoordinateWarning):
        out = fg_mutate(ClusterState((3, -1), 1), 1)
    assert out.coords[0] == 0


def test_fg_mutate_requires_two_nodes():
    with pytest.raises(InputError):
        fg_mutate(ClusterState((1, 1, 1), 1), 1)


def test_mutate_and_compare(a2, a1xa1):
    out = mutate_and_compare(a2, ClusterState((1, 1), 1))
    assert out["lambda"] == 1
    assert out["linear_transport"] == 1 and out["cluster"] == 2
    assert out["discrepancy"] == pytest.approx(1)
    assert [list(c) for c in out["mutated_cycles"]] == [list(c) for c in hurwitz_mutate(a2, 1, 2).cycles]

    state = fg_coords([0.3, 0.1j], 1)
    same = mutate_and_compare(a1xa1, state)
    assert same["lambda"] == 0
    assert same["linear_transport"] == pytest.approx(state.coords[0])
    assert same["cluster"] == state.coords[0]

    # with central charges the linear branch is exp(2 pi i (Z1 - lambda Z2) / z)
    state = fg_coords([0.3, 0.1j], 1)
    lin = mutate_and_compare(a2, state)["linear_transport"]
    assert abs(lin - cmath.exp(2j * math.pi * (0.3 - 0.1j))) < 1e-12


def test_mutate_and_compare_requires_two_nodes(single_node):
    with pytest.raises(InputError):
        mutate_and_compare(single_node, ClusterState((1,), 1))

import random
from fractions import Fraction

import pytest

from conifold.atoms import (
    ConsistencyError,
    clemens_schmid_dims,
    decompose,
    euler_grading,
    ext_dimensions,
    hodge_delta,
    interaction_graph,
    nnf_report,
)
from conifold.corpus import corpus
from conifold.lattice import CycleConfig, InputError, IntersectionLattice, unit


def test_decompose_single_node(single_node):
    d = decompose(single_node)
    assert (d.rigid_dim, d.vanishing_dim, d.overlap_dim, d.splits) == (3, 1, 1, True)
    assert d.flexible_count == 1 and d.flexible_dims == (1,)


def test_decompose_examples(a2, a1xa1):
    assert not decompose(a2).splits
    assert decompose(a1xa1).splits


def test_flexible_atoms_and_rank_nullity(random_corpus):
    for cfg in random_corpus:
        d = decompose(cfg)
        assert d.flexible_count == cfg.r
        assert all(x == 1 for x in d.flexible_dims)
        assert d.rigid_dim + d.covector_rank == cfg.n
        assert 0 <= d.overlap_dim <= d.vanishing_dim


def test_interaction_graph_examples(a2, sympl4):
    g = interaction_graph(a2)
    assert g.edges == ((1, 2, 1),)
    assert g.components == ((1, 2),)
    lat6 = IntersectionLattice.standard_symplectic(3)
    free = CycleConfig(lat6, tuple(unit(6, k) for k in range(3)))
    g0 = interaction_graph(free)
    assert g0.edges == () and g0.components == ((1,), (2,), (3,))
    block = CycleConfig(lat6, (unit(6, 0), unit(6, 3), unit(6, 1)))  # lambda_12 = 1 only
    assert interaction_graph(block).components == ((1, 2), (3,))


def _components_oracle(r, edges):
    """Depth-first search over an adjacency list."""
    adj = {v: set() for v in range(1, r + 1)}
    for i, j, _ in edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, comps = set(), []
    for v in adj:
        if v in seen:
            continue
        stack, comp = [v], []
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            comp.append(x)
            stack.extend(adj[x] - seen)
        comps.append(tuple(sorted(comp)))
    return tuple(sorted(comps))


def test_graph_components_oracle(random_corpus):
    for cfg in random_corpus:
        g = interaction_graph(cfg)
        assert g.components == _components_oracle(cfg.r, g.edges)
        assert all(i < j for i, j, _ in g.edges)


def test_nnf_examples(a2, a1xa1):
    r = nnf_report(a2)
    assert r == {"stokes_abelian": False, "graph_has_edge": True, "lambda_offdiag_nonzero": True,
                 "splits": False, "consistent": True}
    r0 = nnf_report(a1xa1)
    assert r0 == {"stokes_abelian": True, "graph_has_edge": False, "lambda_offdiag_nonzero": False,
                  "splits": True, "consistent": True}


def test_nnf_consistent_on_random_configs():
    for cfg in corpus(seed=7, size=200):
        assert nnf_report(cfg)["consistent"]


def test_nnf_strict_raises_on_inconsistency(monkeypatch, a2):
    import conifold.atoms as atoms
    monkeypatch.setattr(atoms, "stokes_abelian", lambda cfg: True)
    with pytest.raises(ConsistencyError):
        atoms.nnf_report(a2)
    assert not atoms.nnf_report(a2, strict=False)["consistent"]


def test_permutation_equivariance(random_corpus):
    rng = random.Random(3)
    for cfg in random_corpus[:60]:
        perm = list(range(cfg.r))
        rng.shuffle(perm)
        p = cfg.permuted(perm)
        assert decompose(p) == decompose(cfg)
        g, gp = interaction_graph(cfg), interaction_graph(p)
        # relabel edges of the permuted graph back to original labels
        back = {new + 1: old + 1 for new, old in enumerate(perm)}
        edges = {(min(back[i], back[j]), max(back[i], back[j])) for i, j, _ in gp.edges}
        assert edges == {(i, j) for i, j, _ in g.edges}
        assert sorted(map(len, g.components)) == sorted(map(len, gp.components))


def test_euler_grading():
    assert euler_grading([0, 2, 4, 6]) == [Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)]
    assert euler_grading([6]) == [Fraction(3, 2)]
    with pytest.raises(InputError):
        euler_grading([3])


def test_hodge_delta():
    assert hodge_delta(1) == (1, -1)
    assert hodge_delta(0) == (0, 0)
    assert hodge_delta(16) == (16, -16)
    with pytest.raises(InputError):
        hodge_delta(-1)


def test_clemens_schmid(single_node, a2, sympl4):
    cs = clemens_schmid_dims(single_node)
    assert (cs["ker_dim"], cs["im_dim"], cs["exact"]) == (3, 1, True)
    empty = clemens_schmid_dims(CycleConfig(sympl4, ()))
    assert (empty["ker_dim"], empty["im_dim"], empty["exact"]) == (4, 0, True)
    assert sympl4.nondegenerate
    cs2 = clemens_schmid_dims(a2)
    assert cs2["im_dim"] == 2 and cs2["exact"]


def test_clemens_schmid_corpus(random_corpus):
    for cfg in random_corpus:
        cs = clemens_schmid_dims(cfg)
        assert cs["exact"]
        assert cs["total_ker_dim"] >= cs["ker_dim"]


def test_ext_dimensions():
    assert ext_dimensions(1, 1) == 1
    assert ext_dimensions(1, 2) == 0
    assert ext_dimensions(3, 1) == 3
    assert ext_dimensions(2, 2, interacting=True) == "unknown"
    assert ext_dimensions(2, 3, interacting=True) == 0
    with pytest.raises(InputError):
        ext_dimensions(1, 0)

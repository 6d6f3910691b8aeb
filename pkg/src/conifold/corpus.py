"""Seeded random skew configurations for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .lattice import CycleConfig, IntersectionLattice, is_zero, qvec, qzeros


def random_pairing(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> IntersectionLattice:
    p = qzeros(n)
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(lo, hi))
            p[i, j], p[j, i] = v, -v
    return IntersectionLattice(n, p)


def random_config(rng: random.Random, max_rank: int = 8, max_r: int = 4,
                  lo: int = -3, hi: int = 3) -> CycleConfig:
    """Random skew lattice (or standard symplectic, half the time) with 1..max_r cycles.

    Half of the cycles are sparse so small intersection numbers, including
    |lambda| = 1, occur often.
    """
    if rng.random() < 0.5:
        g = rng.randint(1, max_rank // 2)
        lattice = IntersectionLattice.standard_symplectic(g)
    else:
        n = rng.randint(2, max_rank)
        lattice = random_pairing(rng, n, lo, hi)
        while is_zero(lattice.pairing):
            lattice = random_pairing(rng, n, lo, hi)
    n = lattice.rank
    r = rng.randint(1, max_r)
    cycles = []
    while len(cycles) < r:
        if rng.random() < 0.5:
            v = [0] * n
            for _ in range(rng.randint(1, 2)):
                v[rng.randrange(n)] = rng.choice((-1, 1))
        else:
            v = [rng.randint(lo, hi) for _ in range(n)]
        v = qvec(v)
        if not is_zero(lattice.pairing @ v):
            cycles.append(v)
    return CycleConfig(lattice, tuple(cycles))


def corpus(seed: int = 0, size: int = 200, **kw) -> list[CycleConfig]:
    rng = random.Random(seed)
    return [random_config(rng, **kw) for _ in range(size)]

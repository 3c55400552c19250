"""Bundled example sets and seeded generators.

Tiling bases are built the way every tiling base looks: cut ``[0, 1)``
into pieces and lift each piece by an integer in ``0..p-1``. Non-tiling
bases perturb that recipe by dropping pieces (gaps), lifting a piece
twice (overlaps) or both at once, keeping the measure at 1.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .intervals import Interval, IntervalSet, interval_set
from .tiling import PeriodicSet


def _cells(den: int) -> list[Interval]:
    return [Interval(Fraction(i, den), Fraction(i + 1, den)) for i in range(den)]


def _lift(cells_and_shifts) -> IntervalSet:
    return IntervalSet(Interval(c.lo + k, c.hi + k) for c, k in cells_and_shifts)


def random_tiling_base(p: int, rng: random.Random, dens=(1, 2, 3, 4, 6, 8)) -> IntervalSet:
    den = rng.choice(dens)
    return _lift((c, rng.randrange(p)) for c in _cells(den))


def random_disjoint_base(p: int, rng: random.Random, dens=(2, 3, 4, 6, 8)) -> IntervalSet:
    """A base whose residue translates are disjoint; some cells are dropped."""
    den = rng.choice(dens)
    cells = _cells(den)
    keep = [c for c in cells if rng.random() < 0.6]
    return _lift((c, rng.randrange(p)) for c in keep)


def random_overlap_base(p: int, rng: random.Random, dens=(2, 3, 4, 6, 8)) -> IntervalSet:
    """Lift one cell twice (overlap) and drop another (gap): measure stays 1."""
    den = rng.choice(dens)
    cells = _cells(den)
    shifts = [rng.randrange(p) for _ in cells]
    i, j = rng.sample(range(den), 2)
    k = rng.choice([s for s in range(p) if s != shifts[i]])
    pairs = [(c, s) for idx, (c, s) in enumerate(zip(cells, shifts)) if idx != j]
    pairs.append((cells[i], k))
    return _lift(pairs)


def _handpicked_tiling() -> list[PeriodicSet]:
    return [
        PeriodicSet(2, interval_set((0, 1))),
        PeriodicSet(2, interval_set((1, 2))),
        PeriodicSet(2, interval_set((0, "1/2"), ("3/2", 2))),
        PeriodicSet(3, interval_set((0, "1/2"), ("5/2", 3))),
        PeriodicSet(3, interval_set((0, "1/3"), ("4/3", "5/3"), ("8/3", 3))),
        PeriodicSet(2, interval_set((0, "1/4"), ("5/4", "3/2"), ("1/2", "3/4"), ("7/4", 2))),
        PeriodicSet(4, interval_set(("1/5", 1), ("3", "16/5"))),
        PeriodicSet(5, interval_set((0, "1/7"), ("22/7", 4))),
    ]


def _handpicked_nontiling() -> list[PeriodicSet]:
    return [
        PeriodicSet(2, interval_set((0, "3/4"), (1, "5/4"))),
        PeriodicSet(2, interval_set((0, "1/2"))),
        PeriodicSet(2, interval_set((0, "3/4"))),
        PeriodicSet(2, interval_set((0, 2))),
        PeriodicSet(2, IntervalSet()),
        PeriodicSet(3, interval_set((0, "1/2"), ("5/2", "11/4"))),
        PeriodicSet(3, interval_set((0, "5/4"))),
        PeriodicSet(3, interval_set((0, "1/3"), ("1/3", "2/3"), ("5/3", 2), ("7/3", "8/3"))),
        PeriodicSet(4, interval_set((0, "1/2"), ("5/2", 3), (3, "7/2"))),
        PeriodicSet(2, interval_set((0, "15/16"), (1, "17/16"))),
    ]


def tiling_corpus(extra: int = 16, seed: int = 2024) -> list[PeriodicSet]:
    rng = random.Random(seed)
    out = _handpicked_tiling()
    while len(out) < len(_handpicked_tiling()) + extra:
        p = rng.choice([2, 2, 3, 3, 4, 5])
        candidate = PeriodicSet(p, random_tiling_base(p, rng))
        if candidate not in out:
            out.append(candidate)
    return out


def nontiling_corpus(extra: int = 16, seed: int = 4202) -> list[PeriodicSet]:
    rng = random.Random(seed)
    out = _handpicked_nontiling()
    kinds = [random_disjoint_base, random_overlap_base]
    i = 0
    while len(out) < len(_handpicked_nontiling()) + extra:
        p = rng.choice([2, 3, 4])
        gen = kinds[i % 2]
        i += 1
        base = gen(p, rng)
        # a disjoint base may by chance keep every cell; that one tiles
        if gen is random_disjoint_base and base.measure == 1:
            continue
        candidate = PeriodicSet(p, base)
        if candidate not in out:
            out.append(candidate)
    return out

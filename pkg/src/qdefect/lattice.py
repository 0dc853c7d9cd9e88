"""Enumeration of subspaces of fixed dimension with q-binomial counting.

Subspaces stream as canonical RREF bases, each exactly once, in a fixed
order: pivot-column sets lexicographically, then free entries as ascending
code counters (last free position fastest).  Counts match the Gaussian
binomial, which doubles as the budget guard.
"""

from __future__ import annotations

from itertools import combinations

from .errors import BadRange, BudgetExceeded
from .matrices import Mat, rref

DEFAULT_SUBSPACE_BUDGET = 10**7


def gaussian_binomial(a: int, b: int, size: int) -> int:
    """Number of b-dimensional subspaces of an a-dimensional space over a
    field with ``size`` elements, by the exact product formula."""
    if not (0 <= b <= a):
        raise BadRange(f"need 0 <= {b} <= {a}")
    num = 1
    den = 1
    for i in range(b):
        num *= size ** (a - i) - 1
        den *= size ** (b - i) - 1
    assert num % den == 0
    return num // den


def iter_rref_bases(ambient: int, r: int, size: int):
    """Yield the RREF bases of all r-dim subspaces of width ``ambient`` as
    tuples of row tuples with entries in [0, size)."""
    if r == 0:
        yield ()
        return
    for pivots in combinations(range(ambient), r):
        free = [
            (i, c)
            for i in range(r)
            for c in range(pivots[i] + 1, ambient)
            if c not in pivots
        ]
        base = []
        for i in range(r):
            row = [0] * ambient
            row[pivots[i]] = 1
            base.append(row)
        nfree = len(free)
        counter = [0] * nfree
        while True:
            for (i, c), v in zip(free, counter):
                base[i][c] = v
            yield tuple(tuple(row) for row in base)
            pos = nfree - 1
            while pos >= 0:
                counter[pos] += 1
                if counter[pos] < size:
                    break
                counter[pos] = 0
                pos -= 1
            if pos < 0:
                break


class SubspaceStream:
    """Deterministic single-pass stream of canonical subspace bases."""

    def __init__(self, tower, ambient, r, level, budget=DEFAULT_SUBSPACE_BUDGET):
        size = tower.top_size if level == "qm" else tower.q
        self.count = gaussian_binomial(ambient, r, size)
        if self.count > budget:
            raise BudgetExceeded(self.count, budget, "subspaces")
        self.tower = tower
        self.ambient = ambient
        self.r = r
        self.level = level
        self.size = size

    def __iter__(self):
        for rows in iter_rref_bases(self.ambient, self.r, self.size):
            yield Mat(self.tower, self.level, self.ambient, rows)


def enum_subspaces(tower, ambient: int, r: int, level: str = "qm",
                   budget: int = DEFAULT_SUBSPACE_BUDGET) -> SubspaceStream:
    return SubspaceStream(tower, ambient, r, level, budget)


def enum_subspaces_of(t: Mat, r: int, budget: int = DEFAULT_SUBSPACE_BUDGET):
    """Yield all r-dim subspaces of rowspace(t) as canonical Mats.

    Enumeration happens in the coordinates of t's rows and is mapped back,
    so each subspace appears exactly once.
    """
    tower = t.tower
    red, rank, _ = rref(t)
    if r > rank:
        raise BadRange(f"dimension {r} exceeds rank {rank}")
    size = tower.top_size if t.level == "qm" else tower.q
    count = gaussian_binomial(rank, r, size)
    if count > budget:
        raise BudgetExceeded(count, budget, "subspaces")
    if t.level == "qm":
        add, mul = tower.add, tower.mul
    else:
        add, mul = tower.q_add, tower.q_mul
    base = red.rows
    for coeffs in iter_rref_bases(rank, r, size):
        rows = []
        for lam in coeffs:
            acc = [0] * t.ncols
            for c, brow in zip(lam, base):
                if c:
                    acc = [add(x, mul(c, y)) for x, y in zip(acc, brow)]
            rows.append(tuple(acc))
        yield rref(Mat(tower, t.level, t.ncols, tuple(rows)))[0]


def random_subspace(rng, tower, ambient: int, r: int, level: str = "qm") -> Mat:
    """Plain pseudo-random RREF basis; no uniformity guarantee."""
    size = tower.top_size if level == "qm" else tower.q
    while True:
        rows = tuple(
            tuple(rng.randrange(size) for _ in range(ambient)) for _ in range(r)
        )
        red, rank, _ = rref(Mat(tower, level, ambient, rows))
        if rank == r:
            return red

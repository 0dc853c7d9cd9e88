"""Deterministic test corpora and small search constructions.

Everything here is reproducible from a seed: the standard code corpus
(non-degenerate codes with non-degenerate duals over a small parameter
grid), a near-MRD system found by exhaustive scan, a club found by random
search over linearized-polynomial graphs, and block generators for
two-block MRD sums.  No optimality is claimed for any of the searches.
"""

from __future__ import annotations

import itertools
import random

from .fields import FieldTower, make_tower
from .lattice import iter_rref_bases
from .matrices import Mat, mat, mat_rank, rref
from .qsystem import FqSystem
from .rmcode import RankCode, gabidulin

DEFAULT_CORPUS_SEED = 20250807


def _random_code(rng, tower, n, k):
    size = tower.top_size
    while True:
        g = mat(tower, "qm", n, [tuple(rng.randrange(size) for _ in range(n)) for _ in range(k)])
        if mat_rank(g) == k:
            return RankCode(g)


def standard_corpus(seed: int = DEFAULT_CORPUS_SEED, per_combo: int = 11,
                    ms=(3, 4), n_max: int = 6, k_max: int = 3):
    """Codes over F_{2^m}, non-degenerate on both sides, spread over every
    feasible (m, n, k); deterministic in the seed."""
    rng = random.Random(seed)
    out = []
    for m in ms:
        tower = make_tower(2, 1, m)
        for k in range(1, k_max + 1):
            for n in range(k + 1, min(n_max, m * k) + 1):
                got = 0
                # seed each combo with a structured code when available
                if n <= m:
                    c = gabidulin(tower, n, k)
                    if c.nondegenerate and c.dual_nondegenerate:
                        out.append(c)
                        got += 1
                while got < per_combo:
                    c = _random_code(rng, tower, n, k)
                    if c.nondegenerate and c.dual_nondegenerate:
                        out.append(c)
                        got += 1
    return out


def find_near_mrd_system(tower: FieldTower | None = None):
    """First 4-dim F_q-subspace of F_{q^m}^2 (enumeration order) whose
    lines all have weight <= 2 with at least one of weight exactly 2;
    the associated [4, 2] code has d = n - k with the 1-defect profile."""
    if tower is None:
        tower = make_tower(2, 1, 3)
    k = 2
    width = tower.m * k
    for rows in iter_rref_bases(width, 4, tower.q):
        u = FqSystem.from_fq_rows(tower, k, rows)
        if not u.spans_ambient:
            continue
        prof_ok = True
        saw_two = False
        for line in iter_rref_bases(k, 1, tower.top_size):
            w = u._weight_rows(line)
            if w > 2:
                prof_ok = False
                break
            if w == 2:
                saw_two = True
        if prof_ok and saw_two:
            return u
    return None


def code_from_system(u: FqSystem) -> RankCode:
    """A code whose associated system is ``u``: the columns of the
    generator are the canonical basis vectors of ``u``."""
    cols = u.vectors()
    g = mat(u.tower, "qm", u.n, [tuple(v[i] for v in cols) for i in range(u.k)])
    return RankCode(g)


def linearized_graph_system(tower: FieldTower, coeffs) -> FqSystem:
    """The graph {(x, f(x))} of the q-polynomial with the given
    coefficient vector (a_0, ..., a_{m-1}), an m-dim system in ambient 2."""
    vecs = []
    for j in range(tower.m):
        x = tower.gamma(j)
        fx = 0
        xi = x
        for a in coeffs:
            if a:
                fx = tower.add(fx, tower.mul(a, xi))
            xi = tower.frob(xi)
        vecs.append((x, fx))
    return FqSystem.from_vectors(tower, 2, vecs)


def find_club(tower: FieldTower | None = None, index: int = 2,
              seed: int = DEFAULT_CORPUS_SEED, max_tries: int = 20000):
    """Random search for an index-i club as a linearized-polynomial graph:
    exactly one line of weight ``index``, all other lines of weight <= 1.
    The oracle is the exhaustive weight spectrum of every line."""
    if tower is None:
        tower = make_tower(2, 1, 5)
    rng = random.Random(seed)
    size = tower.top_size
    lines = list(iter_rref_bases(2, 1, size))
    for _ in range(max_tries):
        coeffs = tuple(rng.randrange(size) for _ in range(tower.m))
        u = linearized_graph_system(tower, coeffs)
        if u.n != tower.m or not u.spans_ambient:
            continue
        heavy = []
        ok = True
        for line in lines:
            w = u._weight_rows(line)
            if w >= 2:
                heavy.append((line, w))
                if len(heavy) > 1 or w != index:
                    ok = False
                    break
        if ok and len(heavy) == 1:
            return u
    return None


def block_generator(tower: FieldTower, blocks) -> Mat:
    """Block-diagonal generator from per-block generator matrices."""
    nvec = [b.ncols for b in blocks]
    kvec = [b.nrows for b in blocks]
    n = sum(nvec)
    rows = []
    cofs = [sum(nvec[:i]) for i in range(len(blocks))]
    for b, coff in zip(blocks, cofs):
        for r in b.rows:
            row = [0] * n
            for j, x in enumerate(r):
                row[coff + j] = x
            rows.append(tuple(row))
    return mat(tower, "qm", n, rows)


def find_block_11_mrd(tower: FieldTower | None = None):
    """First pair (g, h) such that [[1, g]] (+) [[1, h]] is a two-block
    ((2,2),(1,1))-MRD generator: both blocks MRD and every mixed line
    of the ambient plane has weight <= 1."""
    if tower is None:
        tower = make_tower(2, 1, 4)
    for g, h in itertools.product(range(2, tower.top_size), repeat=2):
        gen = _check_block_11(tower, g, h)
        if gen is not None:
            return gen
    return None


def find_block_11_mrd_all(tower: FieldTower, limit: int | None = None):
    """All (or the first ``limit``) valid ((2,2),(1,1)) block generators."""
    out = []
    for g, h in itertools.product(range(2, tower.top_size), repeat=2):
        gen = _check_block_11(tower, g, h)
        if gen is not None:
            out.append(gen)
            if limit is not None and len(out) >= limit:
                break
    return out


def _check_block_11(tower, g, h):
    # blocks [1, g], [1, h] are MRD iff g, h lie outside F_q
    if g < tower.q or h < tower.q:
        return None
    gen = block_generator(
        tower,
        [mat(tower, "qm", 2, [(1, g)]), mat(tower, "qm", 2, [(1, h)])],
    )
    c = RankCode(gen)
    u = c.system
    for line in iter_rref_bases(2, 1, tower.top_size):
        # skip the two component spans
        if line == ((1, 0),) or line == ((0, 1),):
            continue
        if u._weight_rows(line) > 1:
            return None
    return gen


def paper_quasi_mrd_system(tower: FieldTower | None = None) -> FqSystem:
    """The 5-dimensional system {(x^q, x^{q^2}-x, x^{q^3}-a*t) : x, t}
    in ambient 3 at m = 4, with a chosen so a^{q^2} != -a."""
    if tower is None:
        tower = make_tower(2, 1, 4)
    a = None
    for cand in range(2, tower.top_size):
        if tower.pow_q_i(cand, 2) != tower.neg(cand):
            a = cand
            break
    assert a is not None
    vecs = []
    for j in range(tower.m):
        x = tower.gamma(j)
        vecs.append(
            (
                tower.frob(x),
                tower.sub(tower.pow_q_i(x, 2), x),
                tower.pow_q_i(x, 3),
            )
        )
    vecs.append((0, 0, a))
    return FqSystem.from_vectors(tower, 3, vecs)

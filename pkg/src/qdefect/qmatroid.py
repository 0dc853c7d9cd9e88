"""q-matroids as rank oracles on the subspace lattice of F_q^n.

Rank functions are memoized on canonical (RREF) bases and accept any
spanning row set.  Constructions: column matroids of matrices over
F_{q^m}, uniform q-matroids, iterated direct sums (exact minimization
over the sublattice of the queried subspace), and explicit tables.  The
rank generating function is the four-variable lattice sum
sum_D X1^(rho(E)-rho(D)) X2^(dim D - rho(D)) prod_{i<dim D}(X3 - q^i X4),
tied to the rank-weight enumerator of a representing code by an exact
substitution identity.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BadRange, BudgetExceeded, GroundMismatch, RankDeficient
from .lattice import (
    DEFAULT_SUBSPACE_BUDGET,
    enum_subspaces_of,
    gaussian_binomial,
    iter_rref_bases,
)
from .matrices import (
    Mat,
    lift_to_qm,
    mat,
    mat_rank,
    matmul,
    rowspace_intersect,
    rref,
    transpose,
)
from .polyarith import MultiPoly

DEFAULT_LATTICE_BUDGET = DEFAULT_SUBSPACE_BUDGET


def _lattice_size(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, r, q) for r in range(n + 1))


def ground_lattice(tower, n: int, budget: int = DEFAULT_LATTICE_BUDGET):
    """All subspaces of F_q^n as canonical level-q Mats, dimension by
    dimension in enumeration order."""
    total = _lattice_size(n, tower.q)
    if total > budget:
        raise BudgetExceeded(total, budget, "subspaces")
    out = []
    for r in range(n + 1):
        for rows in iter_rref_bases(n, r, tower.q):
            out.append(Mat(tower, "q", n, rows))
    return out


class QMatroid:
    """Ground space F_q^n with a memoized rank oracle."""

    def __init__(self, tower, n: int, tag: tuple):
        self.tower = tower
        self.q = tower.q
        self.n = n
        self.tag = tag
        self._memo: dict = {}

    # subclasses implement _rank_canonical on an RREF Mat
    def _rank_canonical(self, v: Mat) -> int:
        raise NotImplementedError

    def rank(self, v) -> int:
        """Rank of the subspace spanned by ``v`` (a Mat or row iterable)."""
        if isinstance(v, Mat):
            rows = v.rows
        else:
            rows = tuple(tuple(r) for r in v)
        red = rref(Mat(self.tower, "q", self.n, rows))[0]
        key = red.rows
        got = self._memo.get(key)
        if got is None:
            got = self._rank_canonical(red)
            self._memo[key] = got
        return got

    def rank_value(self) -> int:
        """rho(E), the rank of the whole matroid."""
        return self.rank(_full_rows(self.n))

    @property
    def height(self) -> int:
        return self.n

    def __repr__(self):
        return f"QMatroid({self.tag}, n={self.n}, q={self.q})"


def _full_rows(n: int):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


class _MatrixMatroid(QMatroid):
    def __init__(self, g: Mat):
        if mat_rank(g) < g.nrows:
            raise RankDeficient("generator matrix has dependent rows")
        super().__init__(g.tower, g.ncols, ("matrix",))
        self.G = g

    def _rank_canonical(self, v: Mat) -> int:
        if v.nrows == 0:
            return 0
        av = transpose(lift_to_qm(v))
        return mat_rank(matmul(self.G, av))


class _UniformMatroid(QMatroid):
    def __init__(self, tower, k: int, n: int):
        if not (0 <= k <= n):
            raise BadRange(f"need 0 <= {k} <= {n}")
        super().__init__(tower, n, ("uniform", k, n))
        self.k = k

    def _rank_canonical(self, v: Mat) -> int:
        return min(self.k, v.nrows)


class _TableMatroid(QMatroid):
    def __init__(self, tower, n: int, table: dict):
        super().__init__(tower, n, ("table",))
        self.table = dict(table)

    def _rank_canonical(self, v: Mat) -> int:
        return self.table[v.rows]


class _DirectSumMatroid(QMatroid):
    def __init__(self, m1: QMatroid, m2: QMatroid, budget: int):
        if m1.q != m2.q:
            raise GroundMismatch("summands live over different ground fields")
        super().__init__(m1.tower, m1.n + m2.n, ("direct_sum", m1.tag, m2.tag))
        self.m1 = m1
        self.m2 = m2
        self.budget = budget

    def _rank_canonical(self, v: Mat) -> int:
        d = v.nrows
        total = _lattice_size(d, self.q)
        if total > self.budget:
            raise BudgetExceeded(total, self.budget, "subspaces")
        n1 = self.m1.n
        best = None
        for r in range(d + 1):
            for x in enum_subspaces_of(v, r, self.budget):
                p1 = [row[:n1] for row in x.rows]
                p2 = [row[n1:] for row in x.rows]
                val = self.m1.rank(p1) + self.m2.rank(p2) - r
                if best is None or val < best:
                    best = val
        return d + best


def from_matrix(g: Mat) -> QMatroid:
    """The q-matroid V -> rank(G A^V) of a full-rank matrix over F_{q^m}."""
    return _MatrixMatroid(g)


def uniform(tower, k: int, n: int) -> QMatroid:
    return _UniformMatroid(tower, k, n)


def from_table(tower, n: int, table: dict) -> QMatroid:
    """Explicit rank table keyed by canonical RREF row tuples."""
    return _TableMatroid(tower, n, table)


def direct_sum(m1: QMatroid, m2: QMatroid, budget: int = DEFAULT_LATTICE_BUDGET) -> QMatroid:
    """Direct sum on E1 + E2: rho(V) = dim V + min over X <= V of
    (rho1(pi1 X) + rho2(pi2 X) - dim X), the minimum taken exactly."""
    return _DirectSumMatroid(m1, m2, budget)


def check_axioms(m: QMatroid, budget: int = DEFAULT_LATTICE_BUDGET) -> dict:
    """Exhaustive verification of boundedness, monotonicity and
    submodularity; the first violation is returned with witnesses."""
    lat = ground_lattice(m.tower, m.n, budget)
    for v in lat:
        r = m.rank(v)
        if not (0 <= r <= v.nrows):
            return {"ok": False, "axiom": "R1", "witness": {"rows": list(v.rows), "rank": r}}
    for b in lat:
        rb = m.rank(b)
        for r in range(b.nrows + 1):
            for a in enum_subspaces_of(b, r, budget):
                if m.rank(a) > rb:
                    return {
                        "ok": False,
                        "axiom": "R2",
                        "witness": {"a": list(a.rows), "b": list(b.rows)},
                    }
    for i, a in enumerate(lat):
        ra = m.rank(a)
        for b in lat[i:]:
            rb = m.rank(b)
            rsum = m.rank(a.rows + b.rows)
            rint = m.rank(rowspace_intersect(a, b))
            if rsum + rint > ra + rb:
                return {
                    "ok": False,
                    "axiom": "R3",
                    "witness": {"a": list(a.rows), "b": list(b.rows),
                                "lhs": rsum + rint, "rhs": ra + rb},
                }
    return {"ok": True}


def is_representation(g: Mat, m: QMatroid, budget: int = DEFAULT_LATTICE_BUDGET):
    """Exhaustively compare the matrix matroid of ``g`` against ``m``.

    Returns (True, None) or (False, first mismatch witness).
    """
    if g.ncols != m.n:
        raise GroundMismatch("matrix has a different number of columns")
    if g.tower.q != m.q:
        raise GroundMismatch("matrix lives over a different ground field")
    mg = from_matrix(g)
    for v in ground_lattice(m.tower, m.n, budget):
        got = mg.rank(v)
        want = m.rank(v)
        if got != want:
            return False, {"rows": list(v.rows), "matrix_rank": got, "matroid_rank": want}
    return True, None


def rank_generating_function(m: QMatroid, budget: int = DEFAULT_LATTICE_BUDGET) -> MultiPoly:
    x1 = MultiPoly.var("X1")
    x2 = MultiPoly.var("X2")
    x3 = MultiPoly.var("X3")
    x4 = MultiPoly.var("X4")
    # g^l for l = 0..n, built incrementally
    gpows = [MultiPoly.const(1)]
    for i in range(m.n):
        gpows.append(gpows[-1] * (x3 - (m.q**i) * x4))
    rho_e = m.rank_value()
    acc = MultiPoly.const(0)
    for d in ground_lattice(m.tower, m.n, budget):
        r = m.rank(d)
        acc = acc + x1 ** (rho_e - r) * x2 ** (d.nrows - r) * gpows[d.nrows]
    return acc


def weight_enumerator_identity(code, points=((2, 3), (3, 5), (5, 7)),
                               budget: int = DEFAULT_LATTICE_BUDGET) -> dict:
    """Check W_C(X, Y) = Y^{n-k} R(q Y^{1/m}, Y^{-1/m}, X, Y) at exact
    rational points, substituting Y = y^m to avoid fractional exponents.

    With the four-variable R used here (exponents rho(E)-rho(D) and
    dim D - rho(D)) the first two arguments enter through their m-th
    powers, (q Y^{1/m})^m = q^m Y and (Y^{-1/m})^m = 1/Y; at m = 1 this
    is the verbatim substitution.
    """
    from .rmcode import weight_distribution

    mg = from_matrix(code.G)
    r = rank_generating_function(mg, budget)
    wd = weight_distribution(code)
    t = code.tower
    n, k, mm = code.n, code.k, t.m
    failures = []
    for y, xv in points:
        yy = Fraction(y) ** mm
        lhs = sum(Fraction(wd.counts[i]) * Fraction(xv) ** (n - i) * yy**i for i in range(n + 1))
        rhs = yy ** (n - k) * r.evaluate(
            {
                "X1": Fraction(t.q**mm) * yy,
                "X2": 1 / yy,
                "X3": Fraction(xv),
                "X4": yy,
            }
        )
        if lhs != rhs:
            failures.append({"point": [y, xv], "lhs": str(lhs), "rhs": str(rhs)})
    return {"ok": not failures, "failures": failures, "points": [list(p) for p in points]}

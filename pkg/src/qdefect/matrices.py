"""Exact linear algebra over the two levels of a tower.

Subspaces are always represented by the reduced row-echelon basis of their
row space; equality of subspaces is equality of these canonical bases.
Rows over F_2 are bit-packed internally (bit i = column i); the generic
element-wise path covers every other field and the observable results
agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LevelMismatch, TowerMismatch, WidthMismatch
from .fields import FieldTower


@dataclass(frozen=True)
class Mat:
    """An exact matrix at one level of a tower, rows as code tuples."""

    tower: FieldTower
    level: str  # "q" | "qm"
    ncols: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise WidthMismatch("row width differs from ncols")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]


def mat(tower, level, ncols, rows) -> Mat:
    return Mat(tower, level, ncols, tuple(tuple(r) for r in rows))


def zero_mat(tower, level, ncols) -> Mat:
    return Mat(tower, level, ncols, ())


def identity(tower, level, n) -> Mat:
    return Mat(tower, level, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))


def _check_pair(a: Mat, b: Mat):
    if a.tower is not b.tower:
        raise TowerMismatch("matrices from different towers")
    if a.level != b.level:
        raise LevelMismatch(f"levels {a.level!r} and {b.level!r} differ")
    if a.ncols != b.ncols:
        raise WidthMismatch(f"widths {a.ncols} and {b.ncols} differ")


def _field(mat_or_tower, level):
    t = mat_or_tower
    if level == "qm":
        return t.top_size, t.add, t.sub, t.mul, t.inv
    return t.q, t.q_add, t.q_sub, t.q_mul, t.q_inv


def _is_gf2(m: Mat) -> bool:
    return m.level == "q" and m.tower.q == 2


# -- GF(2) packed kernels ------------------------------------------------


def pack_row(row) -> int:
    x = 0
    for j, v in enumerate(row):
        if v:
            x |= 1 << j
    return x


def unpack_row(x: int, width: int) -> tuple[int, ...]:
    return tuple((x >> j) & 1 for j in range(width))


def rank2(rows) -> int:
    """Rank of packed GF(2) rows; does not mutate the input."""
    piv = {}
    rank = 0
    for row in rows:
        while row:
            lb = row & -row
            p = piv.get(lb)
            if p is None:
                piv[lb] = row
                rank += 1
                break
            row ^= p
    return rank


def rref2(rows) -> list[int]:
    """Reduced row echelon form of packed GF(2) rows, pivot columns ascending."""
    piv = {}
    for row in rows:
        while row:
            lb = row & -row
            p = piv.get(lb)
            if p is None:
                piv[lb] = row
                break
            row ^= p
    masks = sorted(piv)
    for i, mk in enumerate(masks):
        r = piv[mk]
        for mj in masks[i + 1 :]:
            if r & mj:
                r ^= piv[mj]
        piv[mk] = r
    return [piv[mk] for mk in masks]


def kernel2(rows, width: int) -> list[int]:
    """Canonical basis of {x : rows . x = 0} over GF(2), packed."""
    red = rref2(rows)
    pivots = [(r & -r).bit_length() - 1 for r in red]
    pivset = set(pivots)
    out = []
    for j in range(width):
        if j in pivset:
            continue
        v = 1 << j
        for r, pc in zip(red, pivots):
            if (r >> j) & 1:
                v |= 1 << pc
        out.append(v)
    return rref2(out)


def intersect2(arows, brows, width: int) -> list[int]:
    """Zassenhaus intersection of two packed GF(2) row spaces."""
    comb = [(a << width) | a for a in arows] + [(b << width) for b in brows]
    piv = {}
    for row in comb:
        while row:
            h = row.bit_length()
            p = piv.get(h)
            if p is None:
                piv[h] = row
                break
            row ^= p
    mask = (1 << width) - 1
    inter = [r & mask for h, r in piv.items() if h <= width]
    return rref2([r for r in inter if r])


def solver2(rows, width: int):
    """Return solve(v)->coeff-int or None for the row space of ``rows``.

    Coefficient bit i refers to rows[i] in the given order.
    """
    n = len(rows)
    aug = [(row << n) | (1 << i) for i, row in enumerate(rows)]
    piv = {}
    for row in aug:
        r = row
        while r >> n:
            h = r.bit_length()
            p = piv.get(h)
            if p is None:
                piv[h] = r
                break
            r ^= p

    def solve(v: int):
        r = v << n
        while r >> n:
            h = r.bit_length()
            p = piv.get(h)
            if p is None:
                return None
            r ^= p
        return r

    return solve


# -- generic kernels -----------------------------------------------------


def _rref_rows(rows, ncols, fld):
    _, add, sub, mul, inv = fld
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        iv = inv(work[r][c])
        if iv != 1:
            work[r] = [mul(iv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [sub(x, mul(f, y)) for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return [tuple(row) for row in work[:r]], pivots


def _kernel_rows(rows, ncols, fld):
    _, add, sub, mul, inv = fld
    red, pivots = _rref_rows(rows, ncols, fld)
    pivset = set(pivots)
    out = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [0] * ncols
        v[j] = 1
        for row, pc in zip(red, pivots):
            if row[j] != 0:
                v[pc] = sub(0, row[j])
        out.append(tuple(v))
    red2, _ = _rref_rows(out, ncols, fld)
    return red2


def _intersect_rows(arows, brows, ncols, fld):
    comb = [tuple(r) + tuple(r) for r in arows] + [tuple(r) + (0,) * ncols for r in brows]
    red, _ = _rref_rows(comb, 2 * ncols, fld)
    inter = [r[ncols:] for r in red if all(x == 0 for x in r[:ncols]) and any(r[ncols:])]
    out, _ = _rref_rows(inter, ncols, fld)
    return out


# -- public Mat operations ------------------------------------------------


def rref(m: Mat):
    """(canonical RREF, rank, pivot columns) of ``m``; row space preserved."""
    if _is_gf2(m):
        red = rref2([pack_row(r) for r in m.rows])
        rows = tuple(unpack_row(x, m.ncols) for x in red)
        pivots = [(x & -x).bit_length() - 1 for x in red]
        return Mat(m.tower, m.level, m.ncols, rows), len(rows), pivots
    fld = _field(m.tower, m.level)
    rows, pivots = _rref_rows(m.rows, m.ncols, fld)
    return Mat(m.tower, m.level, m.ncols, tuple(rows)), len(rows), pivots


def mat_rank(m: Mat) -> int:
    return rref(m)[1]


def rowspace_sum(a: Mat, b: Mat) -> Mat:
    _check_pair(a, b)
    return rref(Mat(a.tower, a.level, a.ncols, a.rows + b.rows))[0]


def rowspace_intersect(a: Mat, b: Mat) -> Mat:
    _check_pair(a, b)
    if _is_gf2(a):
        inter = intersect2([pack_row(r) for r in a.rows], [pack_row(r) for r in b.rows], a.ncols)
        return Mat(a.tower, a.level, a.ncols, tuple(unpack_row(x, a.ncols) for x in inter))
    fld = _field(a.tower, a.level)
    rows = _intersect_rows(a.rows, b.rows, a.ncols, fld)
    return Mat(a.tower, a.level, a.ncols, tuple(rows))


def rowspace_contains(a: Mat, b: Mat) -> bool:
    """True when rowspace(a) contains rowspace(b)."""
    _check_pair(a, b)
    ra = mat_rank(a)
    return mat_rank(Mat(a.tower, a.level, a.ncols, a.rows + b.rows)) == ra


def rowspace_equal(a: Mat, b: Mat) -> bool:
    _check_pair(a, b)
    return rref(a)[0].rows == rref(b)[0].rows


def kernel(m: Mat) -> Mat:
    """Canonical basis of the right kernel {x : m x^T = 0}."""
    if _is_gf2(m):
        ker = kernel2([pack_row(r) for r in m.rows], m.ncols)
        return Mat(m.tower, m.level, m.ncols, tuple(unpack_row(x, m.ncols) for x in ker))
    fld = _field(m.tower, m.level)
    rows = _kernel_rows(m.rows, m.ncols, fld)
    return Mat(m.tower, m.level, m.ncols, tuple(rows))


def rowspace_ops(a: Mat, b: Mat | None, op: str):
    """Dispatch {sum, intersect, contains, equal, kernel}; kernel is unary."""
    if op == "kernel":
        return kernel(a)
    if op == "sum":
        return rowspace_sum(a, b)
    if op == "intersect":
        return rowspace_intersect(a, b)
    if op == "contains":
        return rowspace_contains(a, b)
    if op == "equal":
        return rowspace_equal(a, b)
    raise ValueError(f"unknown operation {op!r}")


def orthogonal_complement(s: Mat) -> Mat:
    """Complement under the standard dot product at the matrix's level."""
    return kernel(s)


def transpose(m: Mat) -> Mat:
    return Mat(m.tower, m.level, m.nrows, tuple(zip(*m.rows)) if m.rows else tuple(() for _ in range(m.ncols)))


def lift_to_qm(m: Mat) -> Mat:
    """Reinterpret an F_q matrix inside F_{q^m}; codes embed unchanged."""
    if m.level != "q":
        raise LevelMismatch("expected a level-q matrix")
    return Mat(m.tower, "qm", m.ncols, m.rows)


def matmul(a: Mat, b: Mat) -> Mat:
    if a.tower is not b.tower or a.level != b.level:
        raise TowerMismatch("incompatible operands")
    if a.ncols != b.nrows:
        raise WidthMismatch("inner dimensions differ")
    _, add, _, mul, _ = _field(a.tower, a.level)
    bt = list(zip(*b.rows)) if b.rows else [()] * b.ncols
    out = []
    for row in a.rows:
        orow = []
        for col in bt:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = add(acc, mul(x, y))
            orow.append(acc)
        out.append(tuple(orow))
    return Mat(a.tower, a.level, b.ncols, tuple(out))


def scale_vec(tower, level, c, row):
    _, add, _, mul, _ = _field(tower, level)
    return tuple(mul(c, x) for x in row)


def expand_row(tower: FieldTower, row) -> tuple[int, ...]:
    """F_q coordinates of a top-level vector: per-coordinate digit blocks."""
    out = []
    for v in row:
        out.extend(tower.top_digits(v))
    return tuple(out)


def pack_expand_row(tower: FieldTower, row) -> int:
    """Packed GF(2) expansion (q = 2 only): bit i*m+j = digit j of coord i."""
    m = tower.m
    x = 0
    for i, v in enumerate(row):
        x |= v << (i * m)
    return x


def expand_fq(s: Mat, k: int | None = None) -> Mat:
    """Expand a top-level subspace to its F_q row space of dimension m*rank.

    Each top-level row of width k produces m rows (multiples by the basis
    powers) of width m*k; the result is the canonical RREF basis.
    """
    if s.level != "qm":
        raise LevelMismatch("expand_fq expects a top-level matrix")
    t = s.tower
    if k is not None and k != s.ncols:
        raise WidthMismatch("ambient width differs from matrix width")
    k = s.ncols
    rows = []
    for row in s.rows:
        v = row
        for j in range(t.m):
            if j:
                v = tuple(t.mul(t.gamma(1), x) for x in v)
            rows.append(expand_row(t, v))
    out = Mat(t, "q", t.m * k, tuple(rows))
    return rref(out)[0]


def linear_solver(m: Mat):
    """Build solve(vec) -> coefficient tuple (or None) for rowspace(m).

    The returned coefficients lam satisfy lam . m == vec, indexed by the
    rows of ``m`` in their given order.
    """
    n = m.nrows
    if _is_gf2(m):
        solve2 = solver2([pack_row(r) for r in m.rows], m.ncols)

        def solve(vec):
            res = solve2(pack_row(vec))
            if res is None:
                return None
            return tuple((res >> i) & 1 for i in range(n))

        return solve

    fld = _field(m.tower, m.level)
    _, add, sub, mul, inv = fld
    w = m.ncols
    work = [list(r) + [1 if j == i else 0 for j in range(n)] for i, r in enumerate(m.rows)]
    pivots = []
    r = 0
    for c in range(w):
        sel = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        iv = inv(work[r][c])
        if iv != 1:
            work[r] = [mul(iv, x) for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [sub(x, mul(f, y)) for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break

    rows = work[:r]
    pivs = list(pivots)

    def solve(vec):
        res = list(vec) + [0] * n
        for row, c in zip(rows, pivs):
            if res[c] != 0:
                f = res[c]
                res = [sub(x, mul(f, y)) for x, y in zip(res, row)]
        if any(res[:w]):
            return None
        return tuple(sub(0, x) for x in res[w:])

    return solve


def unexpand_row(tower: FieldTower, row) -> tuple[int, ...]:
    """Inverse of :func:`expand_row` on coordinate blocks of length m."""
    m = tower.m
    q = tower.q
    out = []
    for i in range(0, len(row), m):
        v = 0
        for j in reversed(range(m)):
            v = v * q + row[i + j]
        out.append(v)
    return tuple(out)

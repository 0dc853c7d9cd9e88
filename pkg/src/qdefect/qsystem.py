"""Weights and defects of F_q-subspaces of an ambient F_{q^m}^k.

For an F_q-subspace U and a top-level subspace T, the weight is
dim_{F_q}(U cap T) and the defect is the weight minus dim_{F_{q^m}}(T).
This module computes full defect profiles (the maximum defect for every
dimension, exhaustively), the strictly increasing sequence of maximum
non-zero defects with witnesses, minimality of a subspace with respect to
its defect, and the structural predicates built on these numbers:
subgeometry, (h,r)-evasive, h-scattered, clubs, decomposability, and
scatteredness of a decomposition with respect to hyperplanes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AmbientMismatch, BudgetExceeded, DecompositionInvalid, NotSpanning
from .fields import FieldTower
from .lattice import DEFAULT_SUBSPACE_BUDGET, gaussian_binomial, iter_rref_bases
from .matrices import (
    Mat,
    expand_row,
    lift_to_qm,
    mat,
    mat_rank,
    pack_expand_row,
    pack_row,
    rowspace_contains,
    rowspace_equal,
    rowspace_sum,
    rref,
    unexpand_row,
)


class _WeightEngine:
    """Intersection-dimension computations of one F_q row space against
    top-level subspaces, with a bit-packed fast path for q = 2."""

    def __init__(self, tower: FieldTower, k: int, uq: Mat):
        self.tower = tower
        self.k = k
        self.dim = uq.nrows
        self.fast = tower.q == 2
        if self.fast:
            self._packed = [pack_row(r) for r in uq.rows]
        else:
            self._rows = [list(r) for r in uq.rows]

    def _expansion_packed(self, trows):
        t = self.tower
        m, mul, g1 = t.m, t.mul, t.gamma(1)
        out = []
        for v in trows:
            for j in range(m):
                if j:
                    v = tuple(mul(g1, x) for x in v)
                out.append(pack_expand_row(t, v))
        return out

    def weight(self, trows) -> int:
        """dim(U cap T) for T given by independent top-level rows."""
        t = self.tower
        r = len(trows)
        if self.fast:
            rows = self._packed + self._expansion_packed(trows)
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
            return self.dim + t.m * r - rank
        exp_rows = []
        mul, g1 = t.mul, t.gamma(1)
        for v in trows:
            for j in range(t.m):
                if j:
                    v = tuple(mul(g1, x) for x in v)
                exp_rows.append(list(expand_row(t, v)))
        stacked = mat(t, "q", t.m * self.k, [tuple(x) for x in self._rows + exp_rows])
        return self.dim + t.m * r - mat_rank(stacked)


@dataclass(frozen=True)
class DefectProfile:
    """The vector of maximum defects plus its non-zero strictly increasing
    subsequence (t_i, eps_i) with one witness subspace per entry."""

    eps: tuple[int, ...]  # eps[r] for r = 0..k
    seq: tuple[tuple[int, int], ...]
    witnesses: tuple[Mat, ...]
    full_defect_below_k: bool

    @property
    def s(self) -> int:
        return len(self.seq)

    def eps_at(self, r: int) -> int:
        return self.eps[r]

    def summary(self) -> dict:
        return {
            "eps": list(self.eps),
            "seq": [list(p) for p in self.seq],
            "s": self.s,
            "full_defect_below_k": self.full_defect_below_k,
        }


class FqSystem:
    """An F_q-subspace of F_{q^m}^k held as the RREF basis of its
    expansion in F_q^{mk}; immutable, with the defect profile cached."""

    def __init__(self, tower: FieldTower, k: int, basis: Mat):
        if basis.level != "q" or basis.ncols != tower.m * k:
            raise AmbientMismatch("basis must be a level-q matrix of width m*k")
        red, rank, _ = rref(basis)
        self.tower = tower
        self.k = k
        self.basis = red
        self.n = rank
        self._engine = _WeightEngine(tower, k, red)
        self._span_dim = mat_rank(mat(tower, "qm", k, self.vectors())) if rank else 0
        self._profile = None
        self._positives = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_fq_rows(cls, tower, k, rows) -> "FqSystem":
        return cls(tower, k, mat(tower, "q", tower.m * k, rows))

    @classmethod
    def from_vectors(cls, tower, k, vectors) -> "FqSystem":
        """F_q-span of the given top-level vectors."""
        rows = [expand_row(tower, v) for v in vectors]
        return cls.from_fq_rows(tower, k, rows)

    # -- basic views ------------------------------------------------------

    def vectors(self) -> tuple[tuple[int, ...], ...]:
        """Basis rows decoded back to vectors of F_{q^m}^k."""
        return tuple(unexpand_row(self.tower, r) for r in self.basis.rows)

    @property
    def spans_ambient(self) -> bool:
        return self._span_dim == self.k

    def key(self):
        return (self.tower.p, self.tower.e, self.tower.m, self.k, self.basis.rows)

    def __eq__(self, other):
        return isinstance(other, FqSystem) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FqSystem(k={self.k}, n={self.n}, q={self.tower.q}, m={self.tower.m})"

    # -- weights ----------------------------------------------------------

    def weight_defect(self, t: Mat) -> tuple[int, int]:
        """(weight, defect) of a top-level subspace, given as an RREF basis."""
        if t.tower is not self.tower or t.level != "qm" or t.ncols != self.k:
            raise AmbientMismatch("subspace lives in a different ambient space")
        red, r, _ = rref(t)
        w = self._engine.weight(red.rows)
        return w, w - r

    def _weight_rows(self, trows) -> int:
        return self._engine.weight(trows)

    # -- profile ----------------------------------------------------------

    def defect_profile(self, budget: int = DEFAULT_SUBSPACE_BUDGET) -> DefectProfile:
        if self._profile is not None:
            return self._profile
        if not self.spans_ambient:
            raise NotSpanning("the system does not span its ambient space")
        t, k, n = self.tower, self.k, self.n
        size = t.top_size
        total = sum(gaussian_binomial(k, r, size) for r in range(1, k))
        if total > budget:
            raise BudgetExceeded(total, budget, "subspaces")
        eps = [0] * (k + 1)
        best_wit: list = [None] * (k + 1)
        positives = []
        for r in range(1, k):
            best = None
            wit = None
            for rows in iter_rref_bases(k, r, size):
                w = self._engine.weight(rows)
                d = w - r
                if best is None or d > best:
                    best = d
                    wit = rows
                if d > 0:
                    positives.append((rows, r, d))
            eps[r] = best
            best_wit[r] = wit
        eps[k] = n - k
        best_wit[k] = tuple(
            tuple(1 if i == j else 0 for j in range(k)) for i in range(k)
        )
        seq = []
        wits = []
        for r in range(1, k + 1):
            if eps[r] > 0 and (not seq or eps[r] > seq[-1][1]):
                seq.append((r, eps[r]))
                wits.append(mat(t, "qm", k, best_wit[r]))
        profile = DefectProfile(
            eps=tuple(eps),
            seq=tuple(seq),
            witnesses=tuple(wits),
            full_defect_below_k=bool(seq) and seq[-1][0] < k,
        )
        self._profile = profile
        self._positives = tuple(positives)
        return profile

    def positive_defect_subspaces(self, budget: int = DEFAULT_SUBSPACE_BUDGET):
        """All proper subspaces of positive defect (dims 1..k-1), in
        enumeration order, as (rows, dim, defect) triples."""
        if self._positives is None:
            self.defect_profile(budget)
        return self._positives

    # -- minimality -------------------------------------------------------

    def is_minimal_wrt_defect(self, t: Mat, budget: int = DEFAULT_SUBSPACE_BUDGET) -> bool:
        """True when every proper top-level subspace of t has strictly
        smaller defect."""
        red, r, _ = rref(t)
        if r == 0:
            raise AmbientMismatch("minimality is defined for nonzero subspaces")
        w = self._engine.weight(red.rows)
        d = w - r
        if d <= 0:
            return False  # the zero subspace already has defect 0 >= d
        size = self.tower.top_size
        total = sum(gaussian_binomial(r, rr, size) for rr in range(1, r))
        if total > budget:
            raise BudgetExceeded(total, budget, "subspaces")
        add, mul = self.tower.add, self.tower.mul
        for rr in range(1, r):
            for coeffs in iter_rref_bases(r, rr, size):
                rows = []
                for lam in coeffs:
                    acc = [0] * self.k
                    for c, brow in zip(lam, red.rows):
                        if c:
                            acc = [add(x, mul(c, y)) for x, y in zip(acc, brow)]
                    rows.append(tuple(acc))
                if self._engine.weight(rows) - rr >= d:
                    return False
        return True

    def minimal_defect_set(self, budget: int = DEFAULT_SUBSPACE_BUDGET):
        """The proper subspaces of positive defect that are minimal with
        respect to it, in deterministic enumeration order."""
        if not self.spans_ambient:
            raise NotSpanning("the system does not span its ambient space")
        out = []
        for rows, r, d in self.positive_defect_subspaces(budget):
            m = mat(self.tower, "qm", self.k, rows)
            if self.is_minimal_wrt_defect(m, budget):
                out.append((m, r, d))
        return out

    # -- classification ---------------------------------------------------

    def classify(self, decomposition: "Decomposition | None" = None,
                 budget: int = DEFAULT_SUBSPACE_BUDGET) -> dict:
        """Structural report: scatteredness, evasiveness, subgeometry,
        club index, 1-defect flag, and (given a decomposition) the
        hyperplane-scattered verification."""
        if not self.spans_ambient:
            raise NotSpanning("classification needs a spanning system")
        prof = self.defect_profile(budget)
        k, n, m = self.k, self.n, self.tower.m
        is_subgeometry = self._span_dim == self.n
        scattered_h = 0
        for h in range(1, k + 1):
            if prof.eps[h] <= 0:
                scattered_h = h
            else:
                break
        if is_subgeometry:
            scattered_h = k
        evasive = {h: h + max(prof.eps[h], 0) for h in range(1, k + 1)}
        report = {
            "n": n,
            "k": k,
            "q": self.tower.q,
            "m": m,
            "profile": prof.summary(),
            "is_subgeometry": is_subgeometry,
            "scattered_h": scattered_h,
            "evasive_table": evasive,
            "is_maximum_h_scattered": (
                not is_subgeometry and scattered_h >= 1 and n * (scattered_h + 1) == k * m
            ),
            "is_1_defect": prof.s == 2,
            "club_index": None,
        }
        if k == 2:
            lines = [(rows, d) for rows, r, d in self.positive_defect_subspaces(budget) if r == 1]
            if len(lines) == 1 and lines[0][1] + 1 >= 2:
                report["club_index"] = lines[0][1] + 1
        if decomposition is not None:
            report["kbold_scattered"] = self._check_kbold(decomposition, budget)
        return report

    def _check_kbold(self, dec: "Decomposition", budget: int) -> dict:
        dec.validate(self)
        t = self.tower
        comps_ok = True
        for ui, fi, ki, ni in zip(dec.parts, dec.spans, dec.kvec, dec.nvec):
            if ni <= ki:
                comps_ok = False
                break
            engine = _WeightEngine(t, self.k, ui)
            # hyperplanes of the span F_i
            from .lattice import enum_subspaces_of

            for h in enum_subspaces_of(fi, ki - 1, budget):
                if engine.weight(h.rows) > ki - 1:
                    comps_ok = False
                    break
            if not comps_ok:
                break
        cross_ok = True
        hyper_ok = True
        for rows, r, d in self.positive_defect_subspaces(budget):
            tm = mat(t, "qm", self.k, rows)
            contains_comp = any(rowspace_contains(tm, fi) for fi in dec.spans)
            if not contains_comp:
                cross_ok = False
                if r == self.k - 1:
                    hyper_ok = False
        verdict = comps_ok and hyper_ok
        return {
            "decomposable": True,
            "components_scattered": comps_ok,
            "cross_hyperplane_ok": hyper_ok,
            "verdict": verdict,
            "nonpositive_defect_crosscheck": cross_ok,
        }


@dataclass(frozen=True)
class Decomposition:
    """A direct-sum decomposition U = U_1 + ... + U_t with component spans
    F_i; construct through :func:`decomposition` so the invariants hold."""

    parts: tuple[Mat, ...]   # U_i, level q, width m*k
    spans: tuple[Mat, ...]   # F_i = <U_i>, level qm, width k
    kvec: tuple[int, ...]
    nvec: tuple[int, ...]

    def validate(self, system: FqSystem):
        t = system.tower
        if sum(self.nvec) != system.n:
            raise DecompositionInvalid("component dimensions do not sum to n")
        if sum(self.kvec) != system.k:
            raise DecompositionInvalid("span dimensions do not sum to k")
        for ki, ni in zip(self.kvec, self.nvec):
            if ki > ni:
                raise DecompositionInvalid("a span exceeds its component dimension")
        stacked = self.parts[0]
        for p in self.parts[1:]:
            stacked = Mat(t, "q", stacked.ncols, stacked.rows + p.rows)
        if mat_rank(stacked) != system.n:
            raise DecompositionInvalid("components are not in direct sum")
        if not rowspace_equal(stacked, system.basis):
            raise DecompositionInvalid("components do not span the system")
        fstack = self.spans[0]
        for f in self.spans[1:]:
            fstack = Mat(t, "qm", fstack.ncols, fstack.rows + f.rows)
        if mat_rank(fstack) != system.k:
            raise DecompositionInvalid("component spans are not in direct sum")


def decomposition(system: FqSystem, parts_rows) -> Decomposition:
    """Build and validate a decomposition from F_q bases of the U_i, given
    in expanded mk-wide coordinates."""
    t = system.tower
    parts = []
    spans = []
    kvec = []
    nvec = []
    for rows in parts_rows:
        p = rref(mat(t, "q", t.m * system.k, rows))[0]
        vecs = [unexpand_row(t, r) for r in p.rows]
        f = rref(mat(t, "qm", system.k, vecs))[0]
        parts.append(p)
        spans.append(f)
        kvec.append(f.nrows)
        nvec.append(p.nrows)
    dec = Decomposition(tuple(parts), tuple(spans), tuple(kvec), tuple(nvec))
    dec.validate(system)
    return dec


def weight_defect(system: FqSystem, t: Mat) -> tuple[int, int]:
    return system.weight_defect(t)


def defect_profile(system: FqSystem, budget: int = DEFAULT_SUBSPACE_BUDGET) -> DefectProfile:
    return system.defect_profile(budget)


def is_minimal_wrt_defect(system: FqSystem, t: Mat, budget: int = DEFAULT_SUBSPACE_BUDGET) -> bool:
    return system.is_minimal_wrt_defect(t, budget)


def minimal_defect_set(system: FqSystem, budget: int = DEFAULT_SUBSPACE_BUDGET):
    return system.minimal_defect_set(budget)


def classify_system(system: FqSystem, decomposition: Decomposition | None = None,
                    budget: int = DEFAULT_SUBSPACE_BUDGET) -> dict:
    return system.classify(decomposition, budget)

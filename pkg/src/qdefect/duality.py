"""Quotient-model Delsarte duality.

A spanning F_q-subspace U of F_{q^m}^k with dim_{F_q} U = n > k is the
projection of the canonical subgeometry W = F_q^n of F_{q^m}^n from an
(n-k)-dimensional top-level subspace.  Concretely: the columns of a k x n
matrix G list an F_q-basis of U, the projection is x -> x G^T with kernel
Gamma = rowspace(G)^perp, and the complementary projection x -> x H^T
(H a basis of Gamma) yields the Delsarte dual U^d inside F_{q^m}^{n-k}.
Both forms are the standard dot products, so U^d is a deterministic
function of the RREF basis of U.

The same model transports top-level subspaces: a subspace T generated by
its intersection with U pulls back to S = phi^{-1}(T cap U) inside W, and
T^d is the push-forward of the perp of the top-level span of S.
"""

from __future__ import annotations

from .errors import (
    DegenerateDual,
    HyperplaneWeightTooLarge,
    NotGeneratedByIntersection,
    NotSpanning,
    SubgeometryCase,
)
from .lattice import DEFAULT_SUBSPACE_BUDGET
from .matrices import (
    Mat,
    expand_row,
    kernel,
    lift_to_qm,
    linear_solver,
    mat,
    mat_rank,
    matmul,
    rowspace_equal,
    rowspace_intersect,
    rref,
    transpose,
    unexpand_row,
)
from .qsystem import DefectProfile, FqSystem


class QuotientModel:
    """The projections of W = F_q^n realizing a system and its dual."""

    def __init__(self, system: FqSystem):
        if not system.spans_ambient:
            raise NotSpanning("the system does not span its ambient space")
        if system.n == system.k:
            raise SubgeometryCase("n = k is the subgeometry case; no model needed")
        t = system.tower
        self.tower = t
        self.system = system
        self.n = system.n
        self.k = system.k
        cols = system.vectors()  # F_q-basis of U, used as the columns of G
        self.G = mat(t, "qm", self.n, [tuple(v[i] for v in cols) for i in range(self.k)])
        self.H = kernel(self.G)  # basis of Gamma = C^perp
        # Gamma cap W = 0 always holds here: the columns of G are F_q-independent.
        dual_cols = [tuple(r[j] for r in self.H.rows) for j in range(self.n)]
        self._dual = FqSystem.from_vectors(t, self.n - self.k, dual_cols)
        self.dual_degenerate = self._dual.n < self.n
        self.degeneracy_witness = None
        if self.dual_degenerate:
            # a nonzero F_q-vector of W inside Gamma^perp = rowspace(G)
            wexp = mat(t, "q", t.m * self.n,
                       [expand_row(t, tuple(1 if i == j else 0 for j in range(self.n)))
                        for i in range(self.n)])
            cexp = rref(mat(t, "q", t.m * self.n,
                            [r for row in self.G.rows for r in _expansion_rows(t, row)]))[0]
            inter = rowspace_intersect(wexp, cexp)
            self.degeneracy_witness = unexpand_row(t, inter.rows[0])
        self._solver_u = linear_solver(system.basis)
        self._solver_d = linear_solver(self._dual.basis)

    @property
    def dual_system(self) -> FqSystem:
        return self._dual

    # -- the subspace correspondence --------------------------------------

    def _coords_in(self, target: str, rows_q: Mat) -> Mat:
        """Coefficient vectors (inside W = F_q^n) of level-q rows of the
        primal or dual system's expansion."""
        solver = self._solver_u if target == "primal" else self._solver_d
        coords = []
        for r in rows_q.rows:
            lam = solver(r)
            assert lam is not None, "row outside the system"
            coords.append(lam)
        return rref(mat(self.tower, "q", self.n, coords))[0]

    def _push(self, x: Mat, through: Mat) -> Mat:
        """Image of a top-level subspace under y -> y * through^T."""
        if x.nrows == 0:
            return mat(self.tower, "qm", through.nrows, [])
        img = matmul(x, transpose(through))
        return rref(img)[0]

    def map_subspace(self, t_sub: Mat, side: str = "primal") -> Mat:
        """T -> T^d for T generated by its intersection with the system.

        ``side`` selects the direction: "primal" maps subspaces of
        F_{q^m}^k to subspaces of F_{q^m}^{n-k}; "dual" maps back.
        """
        t = self.tower
        system = self.system if side == "primal" else self._dual
        other = self.H if side == "primal" else self.G
        red, r, _ = rref(t_sub)
        from .matrices import expand_fq

        texp = expand_fq(red, system.k)
        inter = rowspace_intersect(system.basis, texp)
        vecs = [unexpand_row(t, row) for row in inter.rows]
        span = rref(mat(t, "qm", system.k, vecs))[0]
        if not rowspace_equal(span, red):
            raise NotGeneratedByIntersection(
                "the subspace is not generated by its intersection with the system"
            )
        s_rows = self._coords_in(side, inter)
        s_star = rref(lift_to_qm(s_rows))[0]
        x = kernel(s_star)
        return self._push(x, other)


def _expansion_rows(tower, row):
    out = []
    v = row
    for j in range(tower.m):
        if j:
            v = tuple(tower.mul(tower.gamma(1), x) for x in v)
        out.append(expand_row(tower, v))
    return out


def model_from_system(system: FqSystem, allow_degenerate_dual: bool = False) -> QuotientModel:
    """Build the quotient model; by default a degenerate dual side (some
    hyperplane of weight n-1) is rejected with its witness."""
    model = QuotientModel(system)
    if model.dual_degenerate and not allow_degenerate_dual:
        raise DegenerateDual(
            "W meets Gamma^perp: some hyperplane has weight n-1",
            witness=model.degeneracy_witness,
        )
    return model


def delsarte_dual(system: FqSystem) -> FqSystem:
    """The Delsarte dual system inside F_{q^m}^{n-k}.

    When the dual side is degenerate the dual is still returned, with the
    smaller F_q-dimension n - (k - t_s).
    """
    return QuotientModel(system).dual_system


def dual_subspace(model: QuotientModel, t_sub: Mat) -> Mat:
    return model.map_subspace(t_sub, "primal")


def transform_sequence(seq, n: int, k: int):
    """Expected dual sequence: (n-k-eps_{s-1}, k-t_{s-1}), ...,
    (n-k-eps_1, k-t_1), (n-k, k)."""
    out = []
    for t_i, e_i in reversed(seq[:-1]):
        out.append((n - k - e_i, k - t_i))
    out.append((n - k, k))
    return tuple(out)


def verify_sequence_duality(system: FqSystem, budget: int = DEFAULT_SUBSPACE_BUDGET) -> dict:
    """Compare the computed defect sequence of U^d with the transform of
    the sequence of U; requires every hyperplane weight < n-1."""
    prof = system.defect_profile(budget)
    if prof.full_defect_below_k:
        raise HyperplaneWeightTooLarge(
            "a hyperplane of weight n-1 exists; the dual has smaller dimension"
        )
    model = model_from_system(system)
    dual = model.dual_system
    dprof = dual.defect_profile(budget)
    expected = transform_sequence(prof.seq, system.n, system.k)
    ok = dprof.seq == expected
    report = {
        "ok": ok,
        "sequence": [list(p) for p in prof.seq],
        "dual_sequence": [list(p) for p in dprof.seq],
        "expected_dual_sequence": [list(p) for p in expected],
        "dual_dim": dual.n,
    }
    if not ok:
        report["witnesses"] = [list(w.rows) for w in dprof.witnesses]
    return report

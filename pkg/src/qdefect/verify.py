"""Invariant suites behind the ``verify`` subcommand.

Each suite replays a module's contract on a small deterministic corpus
and returns {"name", "ok", "checks", "failures": [...]}; a failure entry
carries enough data to reproduce it.  All suites are pure functions of
the seed.
"""

from __future__ import annotations

import random

from .corpus import standard_corpus
from .duality import model_from_system, transform_sequence
from .fields import make_tower
from .lattice import gaussian_binomial, iter_rref_bases, random_subspace
from .matrices import (
    expand_fq,
    kernel,
    lift_to_qm,
    mat,
    mat_rank,
    rowspace_equal,
    rowspace_intersect,
    rowspace_sum,
    rref,
)
from .polyarith import gaussian_binomial_poly
from .qmatroid import check_axioms, is_representation, uniform, from_matrix
from .qsystem import FqSystem
from .rmcode import (
    dual_generalized_weights_from_profile,
    gabidulin,
    generalized_weights,
    macwilliams,
    rank_weight,
    rank_weight_support,
    weight_distribution,
)


def _suite(name):
    return {"name": name, "ok": True, "checks": 0, "failures": []}


def _fail(rep, **info):
    rep["ok"] = False
    rep["failures"].append(info)


def _tick(rep):
    rep["checks"] += 1


def _small_corpus(seed):
    return standard_corpus(seed=seed, per_combo=2, ms=(3, 4), n_max=5, k_max=3)


def suite_fields(seed=0) -> dict:
    rep = _suite("fields")
    for p, e, m in ((2, 1, 3), (2, 2, 2), (3, 1, 2)):
        t = make_tower(p, e, m)
        s = t.top_size
        for a in range(s):
            _tick(rep)
            if a and t.pow_int(a, s - 1) != 1:
                _fail(rep, tower=[p, e, m], element=a, check="unit order")
            if t._log is not None and t.mul(a, a) != t._mul_generic(a, a):
                _fail(rep, tower=[p, e, m], element=a, check="table vs generic")
        fibers = {}
        for a in range(s):
            fibers.setdefault(t.trace(a), 0)
            fibers[t.trace(a)] += 1
        if sorted(fibers) != list(range(t.q)) or set(fibers.values()) != {s // t.q}:
            _fail(rep, tower=[p, e, m], check="trace fibers", fibers=fibers)
    return rep


def suite_matrices(seed=0) -> dict:
    rep = _suite("matrices")
    rng = random.Random(seed)
    t = make_tower(2, 1, 3)
    for _ in range(30):
        a = random_subspace(rng, t, 5, rng.randrange(4), "q")
        b = random_subspace(rng, t, 5, rng.randrange(4), "q")
        s = rowspace_sum(a, b)
        i = rowspace_intersect(a, b)
        _tick(rep)
        if s.nrows + i.nrows != a.nrows + b.nrows:
            _fail(rep, check="dimension formula", a=list(a.rows), b=list(b.rows))
        _tick(rep)
        if not rowspace_equal(kernel(kernel(a)), rref(a)[0]) if a.nrows else False:
            _fail(rep, check="double complement", a=list(a.rows))
    for _ in range(10):
        a = random_subspace(rng, t, 2, 1, "qm")
        b = random_subspace(rng, t, 2, rng.randrange(1, 3), "qm")
        _tick(rep)
        lhs = expand_fq(rowspace_intersect(a, b))
        rhs = rowspace_intersect(expand_fq(a), expand_fq(b))
        if not rowspace_equal(lhs, rhs):
            _fail(rep, check="expansion vs intersection", a=list(a.rows), b=list(b.rows))
    return rep


def suite_counting(seed=0) -> dict:
    rep = _suite("counting")
    sizes = {2: (2, 1, 1), 3: (3, 1, 1), 4: (2, 2, 1), 8: (2, 1, 3), 9: (3, 2, 1)}
    for size in sizes:
        for a in range(5):
            for b in range(a + 1):
                _tick(rep)
                got = sum(1 for _ in iter_rref_bases(a, b, size))
                want = gaussian_binomial(a, b, size)
                poly = gaussian_binomial_poly(a, b).evaluate({"q": size})
                if got != want or poly != want:
                    _fail(rep, check="count", size=size, a=a, b=b, got=got)
    return rep


def suite_qsystem(seed=0) -> dict:
    rep = _suite("qsystem")
    rng = random.Random(seed)
    t = make_tower(2, 1, 4)
    u = gabidulin(t, 4, 2).system
    for _ in range(40):
        t1 = random_subspace(rng, t, 2, rng.randrange(3), "qm")
        t2 = random_subspace(rng, t, 2, rng.randrange(3), "qm")
        w1, e1 = u.weight_defect(t1)
        w2, e2 = u.weight_defect(t2)
        ws, es = u.weight_defect(rowspace_sum(t1, t2))
        wi, ei = u.weight_defect(rowspace_intersect(t1, t2))
        _tick(rep)
        if ws < w1 + w2 - wi or es < e1 + e2 - ei:
            _fail(rep, check="submodularity", t1=list(t1.rows), t2=list(t2.rows))
    prof = u.defect_profile()
    _tick(rep)
    if list(prof.eps) != sorted(prof.eps) or prof.eps[-1] != u.n - u.k:
        _fail(rep, check="monotonicity", eps=list(prof.eps))
    # GL invariance on a random change of basis
    for _ in range(5):
        while True:
            phi = mat(t, "qm", 2, [(rng.randrange(16), rng.randrange(16)) for _ in range(2)])
            if mat_rank(phi) == 2:
                break
        from .matrices import matmul

        vecs = [tuple(r) for r in matmul(mat(t, "qm", 2, u.vectors()), phi).rows]
        u2 = FqSystem.from_vectors(t, 2, vecs)
        _tick(rep)
        if u2.defect_profile().eps != prof.eps:
            _fail(rep, check="GL invariance", phi=list(phi.rows))
    return rep


def suite_duality(seed=0) -> dict:
    rep = _suite("duality")
    for c in _small_corpus(seed):
        u = c.system
        if u.n <= u.k:
            continue
        prof = u.defect_profile()
        if prof.full_defect_below_k:
            continue
        model = model_from_system(u)
        ud = model.dual_system
        _tick(rep)
        if ud.n != u.n:
            _fail(rep, check="dual dimension", params=c.params())
            continue
        _tick(rep)
        if ud.defect_profile().seq != transform_sequence(prof.seq, u.n, u.k):
            _fail(rep, check="sequence transform", params=c.params())
        e_u = u.minimal_defect_set()
        e_d = ud.minimal_defect_set()
        mapped = [model.map_subspace(tm, "primal") for tm, _, _ in e_u]
        _tick(rep)
        if sorted(x.rows for x in mapped) != sorted(x.rows for x, _, _ in e_d):
            _fail(rep, check="E-set bijection", params=c.params())
    return rep


def suite_wei_duality(seed=0) -> dict:
    rep = _suite("wei-duality")
    for c in _small_corpus(seed):
        dr = generalized_weights(c, "defect")
        drd = generalized_weights(c.dual(), "defect")
        _tick(rep)
        if set(drd) != set(range(1, c.n + 1)) - {c.n + 1 - d for d in dr}:
            _fail(rep, check="partition", params=c.params(), dr=list(dr), drd=list(drd))
        _tick(rep)
        if dual_generalized_weights_from_profile(c) != drd:
            _fail(rep, check="transform route", params=c.params())
    return rep


def suite_supports(seed=0) -> dict:
    rep = _suite("supports")
    rng = random.Random(seed)
    for c in _small_corpus(seed):
        words = [w for _, w in c.iter_codewords() if any(w)]
        for w in rng.sample(words, min(5, len(words))):
            d1, s1 = rank_weight_support(c.tower, w, "expansion")
            d2, s2 = rank_weight_support(c.tower, w, "trace")
            d3, s3 = rank_weight_support(c.tower, w, "perp")
            _tick(rep)
            if not (s1.rows == s2.rows == s3.rows and d1 == d2 == d3 == rank_weight(c.tower, w)):
                _fail(rep, check="triple equality", params=c.params(), word=list(w))
    return rep


def suite_macwilliams(seed=0) -> dict:
    rep = _suite("macwilliams")
    for c in _small_corpus(seed):
        a = weight_distribution(c)
        b = macwilliams(a, c.n, c.k)
        _tick(rep)
        if b.counts != weight_distribution(c.dual()).counts:
            _fail(rep, check="dual distribution", params=c.params())
        _tick(rep)
        if macwilliams(b, c.n, c.n - c.k).counts != a.counts:
            _fail(rep, check="round trip", params=c.params())
    return rep


def suite_qmatroid(seed=0) -> dict:
    rep = _suite("qmatroid")
    t2 = make_tower(2, 1, 1)
    t3 = make_tower(2, 1, 3)
    for m in (
        uniform(t2, 2, 4),
        from_matrix(gabidulin(t3, 3, 1).G),
        _ds(uniform(t2, 1, 2), uniform(t2, 1, 2)),
    ):
        _tick(rep)
        res = check_axioms(m)
        if not res["ok"]:
            _fail(rep, check="axioms", tag=str(m.tag), axiom=res["axiom"])
    ok, wit = is_representation(gabidulin(t3, 3, 1).G, uniform(t3, 1, 3))
    _tick(rep)
    if not ok:
        _fail(rep, check="representation", witness=wit)
    return rep


def _ds(a, b):
    from .qmatroid import direct_sum

    return direct_sum(a, b)


SUITES = {
    "fields": suite_fields,
    "matrices": suite_matrices,
    "counting": suite_counting,
    "qsystem": suite_qsystem,
    "duality": suite_duality,
    "wei-duality": suite_wei_duality,
    "supports": suite_supports,
    "macwilliams": suite_macwilliams,
    "qmatroid": suite_qmatroid,
}


def run_suites(names=None, seed: int = 0) -> dict:
    reports = []
    for name in names or SUITES:
        reports.append(SUITES[name](seed))
    return {"ok": all(r["ok"] for r in reports), "suites": reports}

"""Command-line surface.

One binary, one subcommand per task, deterministic output: identical
config and seed produce byte-identical JSON apart from the timestamp
field.  Exit codes: 0 success, 1 refuted property (witness in the JSON),
2 usage or budget errors.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import dataclass, field

from . import io as qio
from .errors import HorizonExceeded, QdefectError
from .duality import model_from_system, verify_sequence_duality
from .lattice import DEFAULT_SUBSPACE_BUDGET
from .qmatroid import check_axioms, is_representation, rank_generating_function
from .rmcode import (
    DEFAULT_CODEWORD_BUDGET,
    TABLE_ROWS,
    classify_code,
    generalized_weights,
    min_feasible_m,
    nkmrd_wdist,
    weight_distribution,
)
from .verify import SUITES, run_suites


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    seed: int | None = None
    subspace_budget: int = DEFAULT_SUBSPACE_BUDGET
    codeword_budget: int = DEFAULT_CODEWORD_BUDGET
    threads: int = 1
    options: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "inputs": list(self.inputs),
            "seed": self.seed,
            "subspace_budget": self.subspace_budget,
            "codeword_budget": self.codeword_budget,
            "threads": self.threads,
            "options": dict(sorted(self.options.items())),
        }


def _threads() -> int:
    # accepted for compatibility; computation is a single deterministic pipeline
    try:
        return max(1, min(1, int(os.environ.get("QDEFECT_THREADS", "1"))))
    except ValueError:
        return 1


def _emit(cfg: RunConfig, status: str, result: dict, out, csv_rows=None, csv=False):
    if csv and csv_rows is not None:
        text = "\n".join(",".join(str(x) for x in row) for row in csv_rows) + "\n"
    else:
        doc = {
            "config": cfg.as_dict(),
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "status": status,
            "result": result,
        }
        text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _profile_result(system, budget) -> dict:
    prof = system.defect_profile(budget)
    return {
        "n": system.n,
        "k": system.k,
        "eps": list(prof.eps),
        "seq": [list(p) for p in prof.seq],
        "s": prof.s,
        "full_defect_below_k": prof.full_defect_below_k,
        "witnesses": [[list(r) for r in w.rows] for w in prof.witnesses],
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qdefect")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=True,
                        help="JSON output (default)")
    common.add_argument("--csv", action="store_true", help="CSV output for tabular results")
    common.add_argument("--out", help="write the report to a file instead of stdout")
    common.add_argument("--subspace-budget", type=int, default=DEFAULT_SUBSPACE_BUDGET)
    common.add_argument("--codeword-budget", type=int, default=DEFAULT_CODEWORD_BUDGET)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    s = add("defect-seq", help="defect profile of a system file")
    s.add_argument("system")

    s = add("dual", help="Delsarte dual of a system file")
    s.add_argument("system")
    s.add_argument("--dual-out", help="write the dual system to this path")

    s = add("genweights", help="generalized weights of a code file")
    s.add_argument("code")
    s.add_argument("--method", default="all", choices=["all", "defect", "codim", "subcode"])

    s = add("wdist", help="weight distribution of a code file")
    s.add_argument("code")

    s = add("classify", help="MRD family verdicts for a code file")
    s.add_argument("code")
    s.add_argument("--blocks", help="n1,n2:k1,k2 block structure")

    s = add("nkmrd", help="symbolic two-block MRD weight distribution")
    s.add_argument("nvec", help="n1,n2")
    s.add_argument("kvec", help="k1,k2")
    s.add_argument("--min-m", action="store_true")
    s.add_argument("--horizon", type=int, default=None)

    add("table1", help="lower bounds on m for the nine tabulated block shapes")

    s = add("qmatroid", help="q-matroid operations on a matroid file")
    s.add_argument("matroid")
    s.add_argument("--check-axioms", action="store_true")
    s.add_argument("--rgf", action="store_true")
    s.add_argument("--represent", help="generator matrix file")

    s = add("verify", help="run invariant suites")
    s.add_argument("--suite", action="append", choices=sorted(SUITES), default=None)
    s.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(
        subcommand=ns.subcommand,
        subspace_budget=ns.subspace_budget,
        codeword_budget=ns.codeword_budget,
        threads=_threads(),
    )
    try:
        status, result, csv_rows = _dispatch(ns, cfg)
    except QdefectError as exc:
        _emit(cfg, "error", {"error": {"reason": type(exc).__name__, "detail": str(exc)}},
              ns.out)
        return 2
    except FileNotFoundError as exc:
        _emit(cfg, "error", {"error": {"reason": "FileNotFound", "detail": str(exc)}}, ns.out)
        return 2
    _emit(cfg, status, result, ns.out, csv_rows=csv_rows, csv=ns.csv)
    return 0 if status == "ok" else 1


def _dispatch(ns, cfg: RunConfig):
    sb, cb = cfg.subspace_budget, cfg.codeword_budget
    if ns.subcommand == "defect-seq":
        cfg.inputs = [ns.system]
        system = qio.read_system(ns.system)
        return "ok", _profile_result(system, sb), None

    if ns.subcommand == "dual":
        cfg.inputs = [ns.system]
        system = qio.read_system(ns.system)
        model = model_from_system(system, allow_degenerate_dual=True)
        dual = model.dual_system
        if ns.dual_out:
            qio.write_system(ns.dual_out, dual)
        result = {
            "dual_k": dual.k,
            "dual_n": dual.n,
            "dual_basis": [list(r) for r in dual.basis.rows],
            "dual_degenerate": model.dual_degenerate,
        }
        if not model.dual_degenerate:
            result["sequence_duality"] = verify_sequence_duality(system, sb)
        return "ok", result, None

    if ns.subcommand == "genweights":
        cfg.inputs = [ns.code]
        cfg.options["method"] = ns.method
        code = qio.read_code(ns.code)
        methods = ["defect", "codim", "subcode"] if ns.method == "all" else [ns.method]
        got = {m: list(generalized_weights(code, m, sb)) for m in methods}
        agree = len({tuple(v) for v in got.values()}) == 1
        result = {"params": code.params(), "d_r": got, "agree": agree}
        return ("ok" if agree else "refuted"), result, None

    if ns.subcommand == "wdist":
        cfg.inputs = [ns.code]
        code = qio.read_code(ns.code)
        wd = weight_distribution(code, cb)
        rows = [(i, c) for i, c in enumerate(wd.counts)]
        return "ok", {"params": code.params(), "A": list(wd.counts)}, rows

    if ns.subcommand == "classify":
        cfg.inputs = [ns.code]
        code = qio.read_code(ns.code)
        blocks = None
        if ns.blocks:
            cfg.options["blocks"] = ns.blocks
            npart, kpart = ns.blocks.split(":")
            blocks = (
                tuple(int(x) for x in npart.split(",")),
                tuple(int(x) for x in kpart.split(",")),
            )
        rep = classify_code(code, blocks=blocks, budget=sb, codeword_budget=cb)
        wd = weight_distribution(code, cb)
        verdicts = {
            key: rep[key]
            for key in ("mrd", "near_mrd", "quasi_mrd", "dually_quasi_mrd")
            if key in rep
        }
        witnesses = {}
        if blocks is not None:
            verdicts["nk_mrd"] = rep["nk_mrd"]["verdict"]
            if rep["nk_mrd"]["witness"] is not None:
                witnesses["nk_mrd"] = rep["nk_mrd"]["witness"]
        result = {
            "params": rep["params"],
            "nondegenerate": rep["nondegenerate"],
            "dual_nondegenerate": rep["dual_nondegenerate"],
            "d": rep["d"],
            "A": list(wd.counts),
            "d_r": rep.get("d_r"),
            "verdicts": verdicts,
            "witnesses": witnesses,
            "cross_checks": rep["cross_checks"],
        }
        return "ok", result, None

    if ns.subcommand == "nkmrd":
        cfg.inputs = []
        cfg.options["nvec"] = ns.nvec
        cfg.options["kvec"] = ns.kvec
        n1, n2 = (int(x) for x in ns.nvec.split(","))
        k1, k2 = (int(x) for x in ns.kvec.split(","))
        dist = nkmrd_wdist(n1, n2, k1, k2)
        result = {"N": n1 + n2, "K": k1 + k2, "A": dist.rendered()}
        if ns.min_m:
            m = min_feasible_m(n1, n2, k1, k2, ns.horizon)
            if m is None:
                raise HorizonExceeded("no feasible m up to the horizon")
            result["min_feasible_m"] = m
        rows = [(i, s) for i, s in enumerate(result["A"])]
        return "ok", result, rows

    if ns.subcommand == "table1":
        rows = []
        for n1, n2, k1, k2 in TABLE_ROWS:
            rows.append((n1, n2, k1, k2, min_feasible_m(n1, n2, k1, k2)))
        result = {"rows": [list(r) for r in rows]}
        return "ok", result, rows

    if ns.subcommand == "qmatroid":
        cfg.inputs = [ns.matroid]
        m = qio.read_matroid(ns.matroid)
        result = {"tag": str(m.tag), "n": m.n, "q": m.q, "rank": m.rank_value()}
        status = "ok"
        if ns.check_axioms:
            cfg.options["check_axioms"] = True
            rep = check_axioms(m, sb)
            result["axioms"] = rep
            if not rep["ok"]:
                status = "refuted"
        if ns.rgf:
            cfg.options["rgf"] = True
            result["rgf"] = rank_generating_function(m, sb).render()
        if ns.represent:
            cfg.inputs.append(ns.represent)
            g = qio.read_matrix(ns.represent)
            ok, wit = is_representation(g, m, sb)
            result["represents"] = ok
            if not ok:
                result["mismatch"] = wit
                status = "refuted"
        return status, result, None

    if ns.subcommand == "verify":
        cfg.seed = ns.seed
        cfg.options["suites"] = ns.suite or sorted(SUITES)
        rep = run_suites(ns.suite, ns.seed)
        return ("ok" if rep["ok"] else "refuted"), rep, None

    raise AssertionError("unhandled subcommand")  # unreachable


if __name__ == "__main__":
    sys.exit(main())

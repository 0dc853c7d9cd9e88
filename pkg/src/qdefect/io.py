"""Text file formats.

Every file opens with the tower header line

    p=<p> e=<e> m=<m> polyq=<ints> polyqm=<ints>

with polynomial coefficients listed constant term first.  Matrices follow
as a dimensions line ``rows=<r> cols=<c> level=<q|qm>`` (system files add
``k=<k>``) and one row of element codes per line.  Matroid files carry a
``matroid=<tag>`` structure line after the header.
"""

from __future__ import annotations

from .errors import InconsistentInput
from .fields import FieldTower, make_tower
from .matrices import Mat, mat
from .qmatroid import QMatroid, direct_sum, from_matrix, from_table, uniform
from .qsystem import FqSystem
from .rmcode import RankCode


def _parse_kv(line: str) -> dict:
    out = {}
    for part in line.split():
        if "=" not in part:
            raise InconsistentInput(f"malformed header field {part!r}")
        key, val = part.split("=", 1)
        out[key] = val
    return out


def parse_tower_header(line: str) -> FieldTower:
    kv = _parse_kv(line)
    try:
        p, e, m = int(kv["p"]), int(kv["e"]), int(kv["m"])
        polyq = tuple(int(x) for x in kv["polyq"].split(","))
        polyqm = tuple(int(x) for x in kv["polyqm"].split(","))
    except (KeyError, ValueError) as exc:
        raise InconsistentInput(f"bad tower header: {line!r}") from exc
    tower = make_tower(p, e, m)
    if tower.poly_q != polyq or tower.poly_qm != polyqm:
        raise InconsistentInput(
            "defining polynomials differ from the deterministic choice"
        )
    return tower


def format_matrix_lines(m: Mat, extra: str = "") -> list[str]:
    head = f"rows={m.nrows} cols={m.ncols} level={m.level}"
    if extra:
        head += " " + extra
    lines = [head]
    for row in m.rows:
        lines.append(" ".join(str(x) for x in row))
    return lines


def parse_matrix_lines(tower, lines, start: int = 0):
    """(Mat, next line index); the dims line may carry extra fields,
    returned as the third element."""
    kv = _parse_kv(lines[start])
    r, c, level = int(kv["rows"]), int(kv["cols"]), kv["level"]
    if level not in ("q", "qm"):
        raise InconsistentInput(f"unknown level {level!r}")
    rows = []
    for i in range(r):
        rows.append(tuple(int(x) for x in lines[start + 1 + i].split()))
    size = tower.top_size if level == "qm" else tower.q
    for row in rows:
        if len(row) != c or any(not (0 <= x < size) for x in row):
            raise InconsistentInput("matrix entry out of range")
    return mat(tower, level, c, rows), start + 1 + r, kv


def write_matrix(path, m: Mat):
    lines = [m.tower.header()] + format_matrix_lines(m)
    _write(path, lines)


def read_matrix(path):
    lines = _read(path)
    tower = parse_tower_header(lines[0])
    m, _, _ = parse_matrix_lines(tower, lines, 1)
    return m


def write_system(path, u: FqSystem):
    lines = [u.tower.header()] + format_matrix_lines(u.basis, extra=f"k={u.k}")
    _write(path, lines)


def read_system(path) -> FqSystem:
    lines = _read(path)
    tower = parse_tower_header(lines[0])
    m, _, kv = parse_matrix_lines(tower, lines, 1)
    if "k" not in kv:
        raise InconsistentInput("system file lacks the k= field")
    return FqSystem(tower, int(kv["k"]), m)


def write_code(path, c: RankCode):
    lines = [c.tower.header()] + format_matrix_lines(c.G)
    _write(path, lines)


def read_code(path) -> RankCode:
    lines = _read(path)
    tower = parse_tower_header(lines[0])
    m, _, _ = parse_matrix_lines(tower, lines, 1)
    return RankCode(m)


# -- matroid files -----------------------------------------------------------


def matroid_lines(m: QMatroid) -> list[str]:
    tag = m.tag
    if tag[0] == "uniform":
        return [f"matroid=uniform k={tag[1]} n={tag[2]}"]
    if tag[0] == "matrix":
        return ["matroid=matrix"] + format_matrix_lines(m.G)
    if tag[0] == "direct_sum":
        out = ["matroid=direct_sum"]
        out += matroid_lines(m.m1)
        out += matroid_lines(m.m2)
        return out
    if tag[0] == "table":
        entries = sorted(m.table.items())
        out = [f"matroid=table n={m.n} count={len(entries)}"]
        for rows, rank in entries:
            flat = " ".join(str(x) for row in rows for x in row)
            out.append(f"{rank} {len(rows)}" + (" " + flat if flat else ""))
        return out
    raise InconsistentInput(f"unknown matroid tag {tag!r}")


def write_matroid(path, m: QMatroid):
    _write(path, [m.tower.header()] + matroid_lines(m))


def _parse_matroid(tower, lines, start: int):
    kv = _parse_kv(lines[start])
    kind = kv["matroid"]
    if kind == "uniform":
        return uniform(tower, int(kv["k"]), int(kv["n"])), start + 1
    if kind == "matrix":
        g, nxt, _ = parse_matrix_lines(tower, lines, start + 1)
        return from_matrix(g), nxt
    if kind == "direct_sum":
        m1, nxt = _parse_matroid(tower, lines, start + 1)
        m2, nxt = _parse_matroid(tower, lines, nxt)
        return direct_sum(m1, m2), nxt
    if kind == "table":
        n = int(kv["n"])
        count = int(kv["count"])
        table = {}
        for i in range(count):
            parts = lines[start + 1 + i].split()
            rank, d = int(parts[0]), int(parts[1])
            flat = [int(x) for x in parts[2:]]
            if len(flat) != d * n:
                raise InconsistentInput("table entry has wrong width")
            rows = tuple(tuple(flat[j * n : (j + 1) * n]) for j in range(d))
            table[rows] = rank
        return from_table(tower, n, table), start + 1 + count
    raise InconsistentInput(f"unknown matroid kind {kind!r}")


def read_matroid(path) -> QMatroid:
    lines = _read(path)
    tower = parse_tower_header(lines[0])
    m, _ = _parse_matroid(tower, lines, 1)
    return m


def _write(path, lines):
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _read(path) -> list[str]:
    with open(path, encoding="ascii") as fh:
        return [ln.rstrip("\n") for ln in fh if ln.strip()]

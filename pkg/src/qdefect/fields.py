"""Finite-field towers F_p <= F_q <= F_{q^m} with integer-coded elements.

Defining polynomials are chosen deterministically: for each level we scan
monic polynomials in increasing order of their integer code (coefficients
read base ``field size``, constant term least significant) and keep the
first irreducible one.  Two towers built from the same ``(p, e, m)``
therefore agree bit for bit.

Elements are handled as integer codes.  An element of F_q = F_p[y]/(f)
with coefficients (c_0, ..., c_{e-1}) has code sum(c_i * p**i); an element
of F_{q^m} = F_q[x]/(g) with coefficients (d_0, ..., d_{m-1}) over F_q has
code sum(code(d_i) * q**i).  The basis of F_{q^m} over F_q is
(1, x, ..., x^{m-1}); the code of the basis element x**j is q**j.

Multiplication uses discrete-log tables when q^m <= 2**16; the generic
polynomial path is kept alongside and must agree with the tables (tested).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import (
    BudgetExceeded,
    DivisionByZero,
    NotPrime,
    OutOfRange,
    TowerMismatch,
)

DEFAULT_TOWER_BUDGET = 2**20
_LOG_TABLE_LIMIT = 2**16
_SUBFIELD_TABLE_LIMIT = 2**9


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _digits(value: int, base: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        value, r = divmod(value, base)
        out.append(r)
    return tuple(out)


def _undigits(digits, base: int) -> int:
    v = 0
    for d in reversed(digits):
        v = v * base + d
    return v


class _Ops:
    """Field operations on integer codes, used to build the next level."""

    def __init__(self, size, add, sub, mul, inv):
        self.size = size
        self.add = add
        self.sub = sub
        self.mul = mul
        self.inv = inv


def _poly_trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b, ops: _Ops) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] = ops.add(out[i + j], ops.mul(ai, bj))
    return _poly_trim(out)


def _poly_mod(a, mod, ops: _Ops) -> list[int]:
    # mod is monic
    r = list(a)
    dm = len(mod) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - dm
            for j, c in enumerate(mod):
                if c:
                    r[shift + j] = ops.sub(r[shift + j], ops.mul(lead, c))
        r.pop()
        _poly_trim(r)
    return r


def _poly_is_irreducible(p, ops: _Ops) -> bool:
    deg = len(p) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(ops.size**d):
            div = list(_digits(low, ops.size, d)) + [1]
            if not _poly_mod(p, div, ops):
                return False
    return True


def _scan_irreducible(degree: int, ops: _Ops) -> tuple[int, ...]:
    for low in range(ops.size**degree):
        cand = list(_digits(low, ops.size, degree)) + [1]
        if _poly_is_irreducible(cand, ops):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldTower:
    """The chain F_p <= F_q <= F_{q^m} with fixed defining polynomials.

    Immutable after construction; all operations are pure functions of the
    integer codes, so instances are safe to share.
    """

    def __init__(self, p: int, e: int, m: int, budget: int = DEFAULT_TOWER_BUDGET):
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if e < 1 or m < 1:
            raise OutOfRange("exponents must be positive")
        if p ** (e * m) > budget:
            raise BudgetExceeded(p ** (e * m), budget, "field size q^m")
        self.p = p
        self.e = e
        self.m = m
        self.q = p**e
        self.top_size = self.q**m
        self._build_subfield()
        self._build_top()

    # -- construction ---------------------------------------------------

    def _build_subfield(self):
        p, e = self.p, self.e
        p_ops = _Ops(
            p,
            lambda a, b: (a + b) % p,
            lambda a, b: (a - b) % p,
            lambda a, b: (a * b) % p,
            lambda a: pow(a, p - 2, p),
        )
        if e == 1:
            self.poly_q = (0, 1)
            self._q_ops = p_ops
            return
        self.poly_q = _scan_irreducible(e, p_ops)
        poly_q = list(self.poly_q)

        def q_add(a, b):
            return _undigits(
                [(x + y) % p for x, y in zip(_digits(a, p, e), _digits(b, p, e))], p
            )

        def q_sub(a, b):
            return _undigits(
                [(x - y) % p for x, y in zip(_digits(a, p, e), _digits(b, p, e))], p
            )

        def q_mul(a, b):
            prod = _poly_mul(list(_digits(a, p, e)), list(_digits(b, p, e)), p_ops)
            red = _poly_mod(prod, poly_q, p_ops)
            return _undigits(red + [0] * (e - len(red)), p)

        q = self.q
        if q <= _SUBFIELD_TABLE_LIMIT:
            add_t = [[q_add(a, b) for b in range(q)] for a in range(q)]
            sub_t = [[q_sub(a, b) for b in range(q)] for a in range(q)]
            mul_t = [[q_mul(a, b) for b in range(q)] for a in range(q)]
            inv_t = [0] * q
            for a in range(1, q):
                for b in range(1, q):
                    if mul_t[a][b] == 1:
                        inv_t[a] = b
                        break
            self._q_ops = _Ops(
                q,
                lambda a, b: add_t[a][b],
                lambda a, b: sub_t[a][b],
                lambda a, b: mul_t[a][b],
                lambda a: inv_t[a],
            )
        else:

            def q_inv(a):
                r = 1
                n = q - 2
                base = a
                while n:
                    if n & 1:
                        r = q_mul(r, base)
                    base = q_mul(base, base)
                    n >>= 1
                return r

            self._q_ops = _Ops(q, q_add, q_sub, q_mul, q_inv)

    def _build_top(self):
        q, m = self.q, self.m
        self.poly_qm = _scan_irreducible(m, self._q_ops)
        s = self.top_size
        self._log = None
        self._exp = None
        self._frob_t = None
        self._inv_t = None
        self._vecs = None
        if s <= _LOG_TABLE_LIMIT:
            self._vecs = [_digits(a, q, m) for a in range(s)]
            g = 1 if s == 2 else self._find_generator()
            exp = [1] * (s - 1)
            for i in range(1, s - 1):
                exp[i] = self._mul_generic(exp[i - 1], g)
            log = [0] * s
            for i, v in enumerate(exp):
                log[v] = i
            self._exp = exp
            self._log = log
            o = s - 1
            self._inv_t = [0] + [exp[(o - log[a]) % o] for a in range(1, s)]
            self._frob_t = [0] + [exp[(log[a] * q) % o] for a in range(1, s)]

    def _find_generator(self) -> int:
        o = self.top_size - 1
        factors = []
        n = o
        f = 2
        while f * f <= n:
            if n % f == 0:
                factors.append(f)
                while n % f == 0:
                    n //= f
            f += 1
        if n > 1:
            factors.append(n)
        for g in range(2, self.top_size):
            if all(self._pow_generic(g, o // f) != 1 for f in factors):
                return g
        raise AssertionError("multiplicative group has no generator")  # unreachable

    # -- top-level arithmetic on integer codes --------------------------

    def top_digits(self, a: int) -> tuple[int, ...]:
        """Coefficients of ``a`` over the basis (1, x, ..., x^{m-1})."""
        if self._vecs is not None:
            return self._vecs[a]
        return _digits(a, self.q, self.m)

    def q_digits(self, c: int) -> tuple[int, ...]:
        return _digits(c, self.p, self.e)

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        s = 0
        mul = 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            s += ((da + db) % p) * mul
            mul *= p
        return s

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        s = 0
        mul = 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            s += ((da - db) % p) * mul
            mul *= p
        return s

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def _mul_generic(self, a: int, b: int) -> int:
        ops = self._q_ops
        m, q = self.m, self.q
        av = _digits(a, q, m)
        bv = _digits(b, q, m)
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(av):
            if ai == 0:
                continue
            for j, bj in enumerate(bv):
                if bj:
                    conv[i + j] = ops.add(conv[i + j], ops.mul(ai, bj))
        poly = self.poly_qm
        for i in range(2 * m - 2, m - 1, -1):
            c = conv[i]
            if c:
                conv[i] = 0
                for j in range(m):
                    if poly[j]:
                        conv[i - m + j] = ops.sub(conv[i - m + j], ops.mul(c, poly[j]))
        return _undigits(conv[:m], q)

    def mul(self, a: int, b: int) -> int:
        if self._log is not None:
            if a == 0 or b == 0:
                return 0
            o = self.top_size - 1
            return self._exp[(self._log[a] + self._log[b]) % o]
        return self._mul_generic(a, b)

    def _pow_generic(self, a: int, n: int) -> int:
        r = 1
        base = a
        while n:
            if n & 1:
                r = self._mul_generic(r, base)
            base = self._mul_generic(base, base)
            n >>= 1
        return r

    def pow_int(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self._log is not None:
            o = self.top_size - 1
            return self._exp[(self._log[a] * n) % o]
        return self._pow_generic(a, n % (self.top_size - 1) or (self.top_size - 1))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self._inv_t is not None:
            return self._inv_t[a]
        return self._pow_generic(a, self.top_size - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int) -> int:
        """x -> x^q, the F_q-linear Frobenius of the top level."""
        if self._frob_t is not None:
            return self._frob_t[a]
        return self.pow_int(a, self.q)

    def pow_q_i(self, a: int, i: int) -> int:
        for _ in range(i % self.m):
            a = self.frob(a)
        return a

    def trace(self, a: int) -> int:
        """Tr_{q^m/q}(a) = sum of a^{q^i}, returned as an F_q code."""
        acc = 0
        x = a
        for _ in range(self.m):
            acc = self.add(acc, x)
            x = self.frob(x)
        digs = self.top_digits(acc)
        assert all(d == 0 for d in digs[1:]), "trace left the subfield"
        return digs[0]

    # -- subfield arithmetic --------------------------------------------

    def q_add(self, a: int, b: int) -> int:
        return self._q_ops.add(a, b)

    def q_sub(self, a: int, b: int) -> int:
        return self._q_ops.sub(a, b)

    def q_mul(self, a: int, b: int) -> int:
        return self._q_ops.mul(a, b)

    def q_inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self._q_ops.inv(a)

    def q_neg(self, a: int) -> int:
        return self._q_ops.sub(0, a)

    # -- misc -------------------------------------------------------------

    def gamma(self, j: int) -> int:
        """Code of the basis element x**j of F_{q^m} over F_q."""
        return self.q**j

    def header(self) -> str:
        """Tower header line used by all file formats."""
        pq = ",".join(str(c) for c in self.poly_q)
        pqm = ",".join(str(c) for c in self.poly_qm)
        return f"p={self.p} e={self.e} m={self.m} polyq={pq} polyqm={pqm}"

    def element(self, code: int, level: str = "qm") -> "FieldElement":
        return decode(self, code, level)

    def zero(self, level: str = "qm") -> "FieldElement":
        return FieldElement(self, level, 0)

    def one(self, level: str = "qm") -> "FieldElement":
        return FieldElement(self, level, 1)

    def __repr__(self):
        return f"FieldTower(p={self.p}, e={self.e}, m={self.m})"


@functools.lru_cache(maxsize=None)
def make_tower(p: int, e: int, m: int, budget: int = DEFAULT_TOWER_BUDGET) -> FieldTower:
    """Deterministic tower construction; identical inputs share one instance."""
    return FieldTower(p, e, m, budget)


@dataclass(frozen=True)
class FieldElement:
    """A field element at one level of a tower, wrapping its integer code."""

    tower: FieldTower
    level: str  # "q" or "qm"
    code: int

    def _peer(self, other: "FieldElement"):
        if not isinstance(other, FieldElement):
            raise TypeError("expected a FieldElement")
        if other.tower is not self.tower or other.level != self.level:
            raise TowerMismatch("elements from different towers or levels")

    @property
    def coeffs(self) -> tuple[int, ...]:
        if self.level == "qm":
            return self.tower.top_digits(self.code)
        return self.tower.q_digits(self.code)

    def _ops(self):
        t = self.tower
        if self.level == "qm":
            return t.add, t.sub, t.mul, t.div
        return t.q_add, t.q_sub, t.q_mul, lambda a, b: t.q_mul(a, t.q_inv(b))

    def __add__(self, other):
        self._peer(other)
        return FieldElement(self.tower, self.level, self._ops()[0](self.code, other.code))

    def __sub__(self, other):
        self._peer(other)
        return FieldElement(self.tower, self.level, self._ops()[1](self.code, other.code))

    def __mul__(self, other):
        self._peer(other)
        return FieldElement(self.tower, self.level, self._ops()[2](self.code, other.code))

    def __truediv__(self, other):
        self._peer(other)
        if other.code == 0:
            raise DivisionByZero("division by zero")
        return FieldElement(self.tower, self.level, self._ops()[3](self.code, other.code))

    def __neg__(self):
        return FieldElement(
            self.tower,
            self.level,
            self.tower.neg(self.code) if self.level == "qm" else self.tower.q_neg(self.code),
        )

    def pow_q(self, i: int) -> "FieldElement":
        if self.level != "qm":
            raise TowerMismatch("Frobenius powers live at the top level")
        return FieldElement(self.tower, "qm", self.tower.pow_q_i(self.code, i))

    def trace(self) -> "FieldElement":
        return trace_qm_q(self)

    def __repr__(self):
        return f"<{self.level}:{self.code} of {self.tower!r}>"


def arith(a: FieldElement, b, op: str) -> FieldElement:
    """Dispatch {add, sub, mul, div, pow_q_i} on wrapped elements.

    ``pow_q_i`` takes an integer exponent i in place of ``b``.
    """
    if op == "pow_q_i":
        return a.pow_q(int(b))
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def trace_qm_q(a: FieldElement) -> FieldElement:
    if a.level != "qm":
        raise TowerMismatch("trace takes a top-level element")
    return FieldElement(a.tower, "q", a.tower.trace(a.code))


def encode(a: FieldElement) -> int:
    return a.code


def decode(tower: FieldTower, value: int, level: str = "qm") -> FieldElement:
    size = tower.top_size if level == "qm" else tower.q
    if level not in ("q", "qm"):
        raise OutOfRange(f"unknown level {level!r}")
    if not (0 <= value < size):
        raise OutOfRange(f"code {value} outside [0, {size})")
    return FieldElement(tower, level, value)

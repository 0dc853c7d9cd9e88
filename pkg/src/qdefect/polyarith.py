"""Exact integer-coefficient polynomials over a small fixed variable set.

The variable universe is (q, z, X1, X2, X3, X4, X, Y, y); every term stores
a dense 9-tuple of exponents.  Coefficients are arbitrary-precision
integers, evaluation is exact (``fractions.Fraction``), and the canonical
rendering below is byte-stable: terms sorted by total degree then by
exponent tuple, both descending, e.g. ``q^4+q^3+2*q^2+q+1``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BadRange, InconsistentInput

VARS = ("q", "z", "X1", "X2", "X3", "X4", "X", "Y", "y")
_NV = len(VARS)
_VIDX = {v: i for i, v in enumerate(VARS)}
_ZEROEXP = (0,) * _NV


class MultiPoly:
    """Immutable exact polynomial; supports +, -, *, ** and comparisons."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for exp, c in terms.items():
                if c:
                    t[exp] = c
        self.terms = t

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(c: int) -> "MultiPoly":
        return MultiPoly({_ZEROEXP: int(c)})

    @staticmethod
    def var(name: str, power: int = 1) -> "MultiPoly":
        if name not in _VIDX:
            raise BadRange(f"unknown variable {name!r}")
        if power < 0:
            raise BadRange("negative power")
        exp = [0] * _NV
        exp[_VIDX[name]] = power
        return MultiPoly({tuple(exp): 1})

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        t = dict(self.terms)
        for exp, c in o.terms.items():
            t[exp] = t.get(exp, 0) + c
        return MultiPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                t[exp] = t.get(exp, 0) + c1 * c2
        return MultiPoly(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise BadRange("negative power")
        out = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    # -- evaluation and substitution --------------------------------------

    def variables(self) -> tuple[str, ...]:
        used = [False] * _NV
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(VARS, used) if u)

    def evaluate(self, values: dict) -> Fraction:
        """Exact value at a point; every used variable must be given."""
        vals = [None] * _NV
        for name, v in values.items():
            if name not in _VIDX:
                raise BadRange(f"unknown variable {name!r}")
            vals[_VIDX[name]] = Fraction(v)
        acc = Fraction(0)
        for exp, c in self.terms.items():
            term = Fraction(c)
            for i, e in enumerate(exp):
                if e:
                    if vals[i] is None:
                        raise BadRange(f"no value for variable {VARS[i]!r}")
                    term *= vals[i] ** e
            acc += term
        return acc

    def subst(self, name: str, repl: "MultiPoly") -> "MultiPoly":
        """Replace a variable by a polynomial."""
        i = _VIDX[name]
        out = MultiPoly()
        powers = {0: MultiPoly.const(1)}
        for exp, c in self.terms.items():
            e = exp[i]
            if e not in powers:
                powers[e] = repl**e
            rest = list(exp)
            rest[i] = 0
            out = out + MultiPoly({tuple(rest): c}) * powers[e]
        return out

    def shift_down(self, name: str, power: int) -> "MultiPoly":
        """Exact division by ``name**power``; InconsistentInput if impossible."""
        i = _VIDX[name]
        t = {}
        for exp, c in self.terms.items():
            if exp[i] < power:
                raise InconsistentInput(
                    f"term not divisible by {name}^{power}"
                )
            e = list(exp)
            e[i] -= power
            t[tuple(e)] = c
        return MultiPoly(t)

    def divide_exact(self, other: "MultiPoly") -> "MultiPoly":
        """Long division that must leave no remainder."""
        if other.is_zero():
            raise InconsistentInput("division by the zero polynomial")
        rem = MultiPoly(dict(self.terms))
        lead_exp = max(other.terms, key=_term_key)
        lead_c = other.terms[lead_exp]
        quot = {}
        while not rem.is_zero():
            rexp = max(rem.terms, key=_term_key)
            rc = rem.terms[rexp]
            dexp = tuple(a - b for a, b in zip(rexp, lead_exp))
            if any(e < 0 for e in dexp) or rc % lead_c != 0:
                raise InconsistentInput("division is not exact")
            fc = rc // lead_c
            quot[dexp] = quot.get(dexp, 0) + fc
            rem = rem - MultiPoly({dexp: fc}) * other
        return MultiPoly(quot)

    def coefficients_univariate(self, name: str) -> list[int]:
        """Dense coefficient list in one variable (errors if others occur)."""
        i = _VIDX[name]
        coeffs: dict[int, int] = {}
        for exp, c in self.terms.items():
            if any(e and j != i for j, e in enumerate(exp)):
                raise BadRange("polynomial is not univariate in " + name)
            coeffs[exp[i]] = c
        if not coeffs:
            return [0]
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c
        return out

    # -- rendering --------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: _term_key(kv[0]), reverse=True)
        parts = []
        for idx, (exp, c) in enumerate(items):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(VARS, exp) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("-" if c < 0 else "+") + body)
        return "".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"MultiPoly({self.render()})"


def _term_key(exp):
    return (sum(exp), exp)


def poly_ops(a: MultiPoly, b, op: str):
    """Dispatch {add, sub, mul, eval, subst} on polynomials.

    ``eval`` takes a dict of values, ``subst`` a (name, MultiPoly) pair.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "eval":
        return a.evaluate(b)
    if op == "subst":
        name, repl = b
        return a.subst(name, repl)
    raise ValueError(f"unknown operation {op!r}")


def gaussian_binomial_poly(a: int, b: int) -> MultiPoly:
    """The q-binomial coefficient as an exact polynomial in q.

    Built from the q-Pascal recurrence, so no division is needed; the
    product-formula quotient agrees (tested by exact long division).
    """
    if not (0 <= b <= a):
        raise BadRange(f"need 0 <= {b} <= {a}")
    qv = MultiPoly.var("q")
    prev = [MultiPoly.const(1)]
    for n in range(1, a + 1):
        cur = [MultiPoly.const(1)]
        for k in range(1, n):
            cur.append(prev[k - 1] + qv**k * prev[k] if k < len(prev) else prev[k - 1])
        cur.append(MultiPoly.const(1))
        prev = cur
    return prev[b]

"""Sparse multivariate polynomials with exact rational coefficients.

Variables are plain strings (``"Z1"``, ``"x0"``, ``"E[hyp][0][1][0]"``).  A
monomial is a sorted tuple of ``(variable, exponent)`` pairs; the zero
polynomial has no terms.  The variable ``lam`` is the bifurcation parameter
and does not count towards :attr:`Polynomial.degree`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Mapping

__all__ = ["Polynomial", "Monomial", "PARAM", "parse_polynomial", "var", "const"]

PARAM = "lam"

Monomial = tuple[tuple[str, int], ...]


def _norm(c):
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _norm(Fraction(c))
    raise TypeError(f"polynomial coefficients must be exact rationals, got {type(c).__name__}")


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Polynomial:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, object] = {}
        for m, c in (terms or {}).items():
            c = _norm(c)
            if c:
                m = tuple(sorted((v, e) for v, e in m if e))
                clean[m] = _norm(clean.get(m, 0) + c)
                if not clean[m]:
                    del clean[m]
        self.terms = dict(sorted(clean.items()))
        self._hash = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict) -> Polynomial:
        p = cls.__new__(cls)
        p.terms = dict(sorted((m, c) for m, c in terms.items() if c))
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls({(): c})

    @classmethod
    def variable(cls, name: str, power: int = 1) -> Polynomial:
        return cls({((name, power),): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> Polynomial:
        return cls({tuple(sorted(exps.items())): coeff})

    # -- inspection -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree ignoring the parameter ``lam``; -1 for the zero polynomial."""
        return max((sum(e for v, e in m if v != PARAM) for m in self.terms), default=-1)

    @property
    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def coefficient(self, exps: Mapping[str, int]):
        return self.terms.get(tuple(sorted((v, e) for v, e in exps.items() if e)), 0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.constant(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = _norm(out.get(m, 0) + c)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _norm(other)
            return Polynomial._raw({m: _norm(v * c) for m, v in self.terms.items()})
        out: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw({m: _norm(c) for m, c in out.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = Fraction(_norm(other))
        return self * (1 / c)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- evaluation and substitution ---------------------------------------------

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at ``values``; exact numbers stay exact, numpy arrays broadcast."""
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = t * values[v] ** e
            total = total + t
        return total

    def __call__(self, **values):
        return self.evaluate(values)

    def rename(self, mapping: Mapping[str, str]) -> Polynomial:
        """Substitute variables by variables (unmapped names are kept)."""
        out: dict[Monomial, object] = {}
        for m, c in self.terms.items():
            d: dict[str, int] = {}
            for v, e in m:
                w = mapping.get(v, v)
                d[w] = d.get(w, 0) + e
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, 0) + c
        return Polynomial(out)

    def substitute(self, mapping: Mapping[str, Polynomial]) -> Polynomial:
        out = Polynomial()
        cache: dict[tuple[str, int], Polynomial] = {}
        for m, c in self.terms.items():
            t = Polynomial.constant(c)
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = mapping[v] ** e
                    t = t * cache[key]
                else:
                    t = t * Polynomial.variable(v, e)
            out = out + t
        return out

    def integer_scaled(self) -> tuple[Polynomial, int]:
        """``(k * self, k)`` with the smallest positive ``k`` making coefficients integral."""
        k = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                k = lcm(k, c.denominator)
        return self * k, k

    # -- division by a linear factor ---------------------------------------------

    def divmod_linear(self, x: str, y: str) -> tuple[Polynomial, Polynomial]:
        """Return ``(q, r)`` with ``self = (x - y) * q + r`` and ``r`` free of ``x``."""
        by_power: dict[int, dict[Monomial, object]] = {}
        for m, c in self.terms.items():
            e = dict(m).get(x, 0)
            rest = tuple((v, k) for v, k in m if v != x)
            by_power.setdefault(e, {})[rest] = c
        if not by_power:
            return Polynomial(), Polynomial()
        n = max(by_power)
        coeffs = [Polynomial._raw(by_power.get(e, {})) for e in range(n + 1)]
        yv = Polynomial.variable(y)
        # synthetic division by (x - y)
        b = [Polynomial()] * n
        carry = Polynomial()
        for e in range(n, 0, -1):
            carry = coeffs[e] + yv * carry if e < n else coeffs[e]
            b[e - 1] = carry
        remainder = coeffs[0] + yv * b[0] if n > 0 else coeffs[0]
        q = Polynomial()
        for e, be in enumerate(b):
            q = q + be * Polynomial.variable(x, e) if e else q + be
        return q, remainder

    # -- printing ------------------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({str(self)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (-_deg(mc[0]), mc[0])):
            factors = [v if e == 1 else f"{v}^{e}" for v, e in m]
            mag = abs(c)
            if factors:
                body = "*".join(factors) if mag == 1 else f"{mag}*" + "*".join(factors)
            else:
                body = str(mag)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _deg(m: Monomial) -> int:
    return sum(e for _, e in m)


def var(name: str, power: int = 1) -> Polynomial:
    return Polynomial.variable(name, power)


def const(c) -> Polynomial:
    return Polynomial.constant(c)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+|\.\d+)?)"
    r"|(?P<var>Y\[\d+\]|E\[[^\[\]\s]+\]\[\d+\]\[\d+\]\[\d+\]|[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^]))"
)


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``coef * var^k * ... +/- ...`` (no parentheses)."""
    pos, tokens = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    if not tokens:
        raise ValueError("empty polynomial")
    out = Polynomial()
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coeff = Fraction(sign)
        exps: dict[str, int] = {}
        expect_factor = True
        while i < len(tokens):
            kind, val = tokens[i]
            if expect_factor:
                if kind == "num":
                    coeff *= Fraction(val)
                elif kind == "var":
                    power = 1
                    if i + 2 < len(tokens) + 1 and i + 1 < len(tokens) and tokens[i + 1] == ("op", "^"):
                        if i + 2 >= len(tokens) or tokens[i + 2][0] != "num" or not tokens[i + 2][1].isdigit():
                            raise ValueError(f"bad exponent after {val}")
                        power = int(tokens[i + 2][1])
                        i += 2
                    exps[val] = exps.get(val, 0) + power
                else:
                    raise ValueError(f"unexpected {val!r}")
                expect_factor = False
                i += 1
            elif kind == "op" and val == "*":
                expect_factor = True
                i += 1
            elif kind == "op" and val in "+-":
                break
            else:
                raise ValueError(f"unexpected {val!r}")
        if expect_factor:
            raise ValueError("dangling operator in polynomial")
        out = out + Polynomial.monomial(exps, coeff)
    return out

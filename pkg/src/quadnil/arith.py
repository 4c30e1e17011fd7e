"""Exact arithmetic: rationals over arbitrary-precision integers and sparse
multivariate integer polynomials in the parameters a1, ..., aN.

Rationals are :class:`fractions.Fraction`; this module only adds parsing and
the canonical ``"p/q"`` serialization.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction
Monomial = tuple  # sorted tuple of (variable index, exponent > 0)

__all__ = [
    "ArityMismatch",
    "Rational",
    "SparsePoly",
    "format_rational",
    "parse_rational",
    "rat_inv",
]


class ArityMismatch(ValueError):
    """Polynomials over different numbers of variables were combined."""


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_inv(x: Fraction) -> Fraction:
    if x == 0:
        raise ZeroDivisionError("inverse of zero rational")
    return 1 / Fraction(x)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _grlex_key(m: Monomial):
    # descending graded-lex: higher degree first, then larger leading exponents
    return (-_mono_degree(m), tuple((v, -e) for v, e in m))


class SparsePoly:
    """Polynomial with integer coefficients in variables a1..a{num_vars}.

    Terms are stored as ``{monomial: coefficient}`` where a monomial is a
    sorted tuple of ``(variable, exponent)`` pairs; variables are 1-based.
    Instances are treated as immutable.
    """

    __slots__ = ("terms", "num_vars")

    def __init__(self, terms: Mapping[Monomial, int] | None = None, num_vars: int = 0):
        self.num_vars = num_vars
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    for v, e in mono:
                        if not 1 <= v <= num_vars or e <= 0:
                            raise ValueError(f"bad monomial {mono} for {num_vars} variables")
                    clean[mono] = int(c)
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, num_vars: int) -> "SparsePoly":
        return cls(None, num_vars)

    @classmethod
    def constant(cls, c: int, num_vars: int) -> "SparsePoly":
        return cls({(): c}, num_vars)

    @classmethod
    def var(cls, index: int, num_vars: int, coeff: int = 1) -> "SparsePoly":
        return cls({((index, 1),): coeff}, num_vars)

    # -- helpers ------------------------------------------------------
    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.num_vars != self.num_vars:
                raise ArityMismatch(f"{self.num_vars} vs {other.num_vars} variables")
            return other
        if isinstance(other, int):
            return SparsePoly.constant(other, self.num_vars)
        if isinstance(other, Fraction) and other.denominator == 1:
            return SparsePoly.constant(other.numerator, self.num_vars)
        return NotImplemented

    @classmethod
    def _raw(cls, terms: dict, num_vars: int) -> "SparsePoly":
        p = cls.__new__(cls)
        p.terms = terms
        p.num_vars = num_vars
        return p

    # -- ring operations ---------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return SparsePoly._raw(out, self.num_vars)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw({m: -c for m, c in self.terms.items()}, self.num_vars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return SparsePoly._raw(out, self.num_vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = SparsePoly.constant(1, self.num_vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- queries ------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({(): other} if other else {})
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.terms.items())))

    def variables(self) -> set[int]:
        return {v for mono in self.terms for v, _ in mono}

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def eval(self, values: Mapping[int, Fraction]) -> Fraction:
        """Evaluate at ``values`` (variable index -> rational); missing variables are 0."""
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            for v, e in mono:
                x = values.get(v, 0)
                if not x:
                    term = 0
                    break
                term *= Fraction(x) ** e
            total += term
        return total

    # -- text ---------------------------------------------------------
    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"SparsePoly({self.to_string()!r}, num_vars={self.num_vars})"

    def to_string(self, latex: bool = False) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            for v, e in mono:
                f = f"a_{{{v}}}" if latex else f"a{v}"
                if e > 1:
                    f += f"^{{{e}}}" if latex else f"^{e}"
                factors.append(f)
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = (" " if latex else "*").join(factors)
            else:
                body = (" " if latex else "*").join([str(mag)] + factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text: str, num_vars: int) -> "SparsePoly":
        """Parse the canonical text form, e.g. ``"a1*a10 - 2*a2^2"``."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls.zero(num_vars)
        if s[0] not in "+-":
            s = "+" + s
        result = cls.zero(num_vars)
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            if not body:
                raise ValueError(f"cannot parse polynomial {text!r}")
            coeff = 1
            exps: dict[int, int] = {}
            for factor in body.split("*"):
                m = re.fullmatch(r"a(\d+)(?:\^(\d+))?", factor)
                if m:
                    v, e = int(m.group(1)), int(m.group(2) or 1)
                    exps[v] = exps.get(v, 0) + e
                elif factor.isdigit():
                    coeff *= int(factor)
                else:
                    raise ValueError(f"cannot parse polynomial {text!r}")
            c = -coeff if sign == "-" else coeff
            result = result + cls({tuple(sorted(exps.items())): c}, num_vars)
        return result


def poly_eval(p: SparsePoly, values: Mapping[int, Fraction]) -> Fraction:
    return p.eval(values)


def lcm_of_denominators(xs: Iterable[Fraction]) -> int:
    from math import lcm

    out = 1
    for x in xs:
        out = lcm(out, Fraction(x).denominator)
    return out

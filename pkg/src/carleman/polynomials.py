"""Sparse multivariate polynomials with exact rational coefficients.

Coefficients are `fractions.Fraction`; a polynomial is a map from exponent
tuples to nonzero coefficients over a fixed tuple of variable names.
Arithmetic never leaves the exact domain.
"""

from __future__ import annotations

from fractions import Fraction


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational scalar, got {type(value).__name__}")


class Poly:
    """Polynomial over Q in a fixed tuple of named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        clean = {}
        for exps, coeff in (terms or {}).items():
            coeff = _as_fraction(coeff)
            if len(exps) != len(self.vars):
                raise ValueError("exponent tuple length does not match variables")
            if coeff:
                clean[tuple(int(e) for e in exps)] = coeff
        self.terms = clean

    @classmethod
    def constant(cls, value, variables=("t",)):
        variables = tuple(variables)
        value = _as_fraction(value)
        if not value:
            return cls(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name, variables):
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: Fraction(1)})

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError("polynomials over different variable tuples")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(other, self.vars)
        return None

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps, Fraction(0)) + coeff
            if acc:
                terms[exps] = acc
            else:
                terms.pop(exps, None)
        return Poly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(exps, Fraction(0)) + c1 * c2
                if acc:
                    terms[exps] = acc
                else:
                    terms.pop(exps, None)
        return Poly(self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.constant(1, self.vars)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def as_fraction(self):
        """Return the value of a constant polynomial as a Fraction."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (exps, coeff), = self.terms.items()
            if not any(exps):
                return coeff
        raise ValueError("polynomial is not constant")

    def _monomial_str(self, exps, coeff):
        parts = []
        for name, e in zip(self.vars, exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        if not parts:
            return str(abs(coeff))
        mag = abs(coeff)
        if mag != 1:
            parts.insert(0, str(mag))
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        ordered = sorted(
            self.terms.items(),
            key=lambda kv: (sum(kv[0]), tuple(-e for e in kv[0])),
        )
        out = []
        for idx, (exps, coeff) in enumerate(ordered):
            mono = self._monomial_str(exps, coeff)
            if idx == 0:
                out.append(f"-{mono}" if coeff < 0 else mono)
            else:
                out.append(f"- {mono}" if coeff < 0 else f"+ {mono}")
        return " ".join(out)

    def __repr__(self):
        return f"Poly({self.vars!r}, {self!s})"

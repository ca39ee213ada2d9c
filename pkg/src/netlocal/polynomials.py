"""Sparse multivariate polynomials with exact rational coefficients.

Terms map exponent tuples to nonzero Fraction coefficients over a fixed,
ordered variable universe.  Printing and equality use graded-lex term order.
Division is by rational constants only; nothing here needs polynomial
division.
"""

from __future__ import annotations

from fractions import Fraction


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        clean = {}
        for expo, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            expo = tuple(int(e) for e in expo)
            if len(expo) != len(self.variables):
                raise ValueError("exponent tuple length != variable count")
            clean[expo] = clean.get(expo, Fraction(0)) + coeff
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def constant(cls, value, variables) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): Fraction(value)})

    @classmethod
    def variable(cls, name: str, variables) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        expo = tuple(int(v == name) for v in variables)
        return cls(variables, {expo: Fraction(1)})

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials live over different variable universes")
            return other
        return MultiPoly.constant(other, self.variables)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultiPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            f = Fraction(other)
            return MultiPoly(self.variables, {e: c * f for e, c in self.terms.items()})
        other = self._coerce(other)
        terms: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (Fraction(1) / Fraction(scalar))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = MultiPoly.constant(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self.terms == self._coerce(other).terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, expo: tuple) -> Fraction:
        return self.terms.get(tuple(expo), Fraction(0))

    def substitute(self, name: str, replacement) -> "MultiPoly":
        """Substitute one variable by a polynomial (or constant) over the same universe."""
        if name not in self.variables:
            raise ValueError(f"unknown variable {name!r}")
        if not isinstance(replacement, MultiPoly):
            replacement = MultiPoly.constant(replacement, self.variables)
        else:
            replacement = self._coerce(replacement)
        idx = self.variables.index(name)
        out = MultiPoly(self.variables, {})
        powers = {0: MultiPoly.constant(1, self.variables)}
        for expo, coeff in self.terms.items():
            k = expo[idx]
            if k not in powers:
                powers[k] = replacement ** k
            rest = list(expo)
            rest[idx] = 0
            out = out + powers[k] * MultiPoly(self.variables, {tuple(rest): coeff})
        return out

    def evaluate(self, assignment: dict):
        """Exact value at a full rational assignment {name: value}."""
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            term = coeff
            for name, k in zip(self.variables, expo):
                if k:
                    term *= Fraction(assignment[name]) ** k
            total += term
        return total

    def _key(self, expo):
        return (sum(expo), tuple(-e for e in expo))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for expo in sorted(self.terms, key=self._key, reverse=True):
            coeff = self.terms[expo]
            factors = []
            for name, k in zip(self.variables, expo):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    __repr__ = __str__

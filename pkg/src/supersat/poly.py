"""Multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]
Exponent = tuple[int, ...]


class ExactPolynomial:
    """Polynomial over Q in a fixed, ordered list of variables.

    Terms are stored as ``{exponent tuple: Fraction}`` with zero coefficients
    dropped, so equality is structural.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, Number] | None = None):
        self.variables = tuple(variables)
        k = len(self.variables)
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != k:
                raise ValueError(f"exponent {exp} does not match {k} variables")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, variables: Sequence[str], c: Number) -> ExactPolynomial:
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> ExactPolynomial:
        i = list(variables).index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(variables, {exp: 1})

    def _lift(self, other) -> ExactPolynomial:
        if isinstance(other, ExactPolynomial):
            if other.variables != self.variables:
                raise ValueError("variable lists differ")
            return other
        return ExactPolynomial.const(self.variables, other)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other) -> ExactPolynomial:
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return ExactPolynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> ExactPolynomial:
        return ExactPolynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> ExactPolynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> ExactPolynomial:
        return self._lift(other) - self

    def __mul__(self, other) -> ExactPolynomial:
        other = self._lift(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return ExactPolynomial(self.variables, out)

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> ExactPolynomial:
        c = Fraction(c)
        return ExactPolynomial(self.variables, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, k: int) -> ExactPolynomial:
        if k < 0:
            raise ValueError("negative power")
        out = ExactPolynomial.const(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPolynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == ExactPolynomial.const(self.variables, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus and substitution --------------------------------------
    def diff(self, name: str) -> ExactPolynomial:
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return ExactPolynomial(self.variables, out)

    def substitute(self, values: Mapping[str, ExactPolynomial | Number], variables: Sequence[str]) -> ExactPolynomial:
        """Replace every variable by a polynomial (or number) over ``variables``."""
        images = []
        for v in self.variables:
            val = values.get(v, None)
            if val is None:
                val = ExactPolynomial.var(variables, v)
            elif not isinstance(val, ExactPolynomial):
                val = ExactPolynomial.const(variables, val)
            images.append(val)
        out = ExactPolynomial(variables)
        cache: dict[tuple[int, int], ExactPolynomial] = {}
        for e, c in self.terms.items():
            term = ExactPolynomial.const(variables, c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = images[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def __call__(self, *point: Number) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != len(self.variables):
            raise ValueError("wrong number of coordinates")
        point = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    # -- inspection ------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def homogeneous_part(self, d: int) -> ExactPolynomial:
        return ExactPolynomial(self.variables, {e: c for e, c in self.terms.items() if sum(e) == d})

    def univariate_coefficients(self) -> list[Fraction]:
        """Coefficients ``[c0, c1, ...]`` of a one-variable polynomial."""
        if len(self.variables) != 1:
            raise ValueError("not univariate")
        out = [Fraction(0)] * (self.degree() + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out

    def permuted(self, perm: Sequence[int]) -> ExactPolynomial:
        """Rename variable ``i`` to variable ``perm[i]``."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(e)
            for i, k in enumerate(e):
                ne[perm[i]] = k
            out[tuple(ne)] = c
        return ExactPolynomial(self.variables, out)

    def to_text(self) -> str:
        """Canonical form: ``[exponents] num/den`` per term, exponents ascending."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            parts.append(f"[{','.join(map(str, e))}] {c.numerator}/{c.denominator}")
        return "; ".join(parts)

    @classmethod
    def from_text(cls, variables: Sequence[str], text: str) -> ExactPolynomial:
        if text.strip() == "0":
            return cls(variables)
        terms = {}
        for part in text.split(";"):
            exp_s, coef = part.strip().split("] ")
            exp = tuple(int(x) for x in exp_s.lstrip("[").split(","))
            terms[exp] = Fraction(coef)
        return cls(variables, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-k for k in e])):
            c = self.terms[e]
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ExactPolynomial({list(self.variables)}, {self})"


def falling_factorial(p: ExactPolynomial, k: int) -> ExactPolynomial:
    """(p)_k = p (p-1) ... (p-k+1); equals 1 for k = 0."""
    out = ExactPolynomial.const(p.variables, 1)
    for j in range(k):
        out = out * (p - j)
    return out

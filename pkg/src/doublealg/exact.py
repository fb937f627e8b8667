"""Exact sparse multivariate polynomial arithmetic over the rationals.

Every coefficient in this package is a `fractions.Fraction`; nothing is ever
rounded, so equality of canonical forms is decidable and all axiom checks
downstream are exact.

A polynomial lives on a `Chart` (an ordered tuple of coordinate names, possibly
empty for a point base) and is stored sparsely:

    terms: Dict[Tuple[int, ...], Fraction]

mapping an exponent tuple (one entry per chart coordinate) to a nonzero
coefficient.  The zero polynomial is the empty dict.  Canonical printing
orders monomials by descending (total degree, exponent tuple), and the text
grammar round-trips bit-exactly with the parser in `parsing`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]


class ChartMismatch(ValueError):
    """Raised when operands live on different charts."""


class UnknownCoordinate(KeyError):
    """Raised when a coordinate name is not part of a chart."""


def rat(value) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rat(value: Fraction) -> str:
    """Print a rational as `p` or `p/q`."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Chart:
    """An ordered coordinate system x^1..x^n; n = 0 is a point base."""

    names: Tuple[str, ...]

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"chart coordinates not distinct: {names}")
        object.__setattr__(self, "names", names)

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownCoordinate(f"{name!r} not in chart {self.names}") from None

    def extend(self, extra: Iterable[str]) -> "Chart":
        """Adjoin fibre coordinates; duplicates raise."""
        return Chart(self.names + tuple(extra))

    def __repr__(self) -> str:
        return f"Chart({', '.join(self.names)})"


ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial on a chart with Fraction coefficients.

    Immutable; all operations return new values.  Two polynomials are equal
    iff their charts and term maps are equal (canonical form stores no zero
    coefficients).
    """

    chart: Chart
    terms: Tuple[Tuple[Exponent, Fraction], ...]

    def __init__(self, chart: Chart, terms: Mapping[Exponent, Fraction] | None = None):
        object.__setattr__(self, "chart", chart)
        cleaned = {}
        if terms:
            n = chart.dim
            for exp, coeff in terms.items():
                coeff = rat(coeff)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not fit chart of dim {n}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                if coeff != 0:
                    cleaned[tuple(exp)] = coeff
        ordered = tuple(sorted(cleaned.items(), key=_term_key, reverse=True))
        object.__setattr__(self, "terms", ordered)

    # --- constructors -------------------------------------------------

    @staticmethod
    def zero(chart: Chart) -> "Polynomial":
        return Polynomial(chart, {})

    @staticmethod
    def constant(chart: Chart, value) -> "Polynomial":
        c = rat(value)
        if c == 0:
            return Polynomial.zero(chart)
        return Polynomial(chart, {(0,) * chart.dim: c})

    @staticmethod
    def coordinate(chart: Chart, name: str) -> "Polynomial":
        i = chart.index(name)
        exp = tuple(1 if j == i else 0 for j in range(chart.dim))
        return Polynomial(chart, {exp: ONE})

    # --- ring structure -----------------------------------------------

    def _require_same_chart(self, other: "Polynomial") -> None:
        if self.chart != other.chart:
            raise ChartMismatch(f"charts differ: {self.chart} vs {other.chart}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._require_same_chart(other)
        acc: Dict[Exponent, Fraction] = dict(self.terms)
        for exp, coeff in other.terms:
            acc[exp] = acc.get(exp, ZERO) + coeff
        return Polynomial(self.chart, acc)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.chart, {e: -c for e, c in self.terms})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._require_same_chart(other)
        acc: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                exp = tuple(a + b for a, b in zip(e1, e2))
                acc[exp] = acc.get(exp, ZERO) + c1 * c2
        return Polynomial(self.chart, acc)

    def scale(self, value) -> "Polynomial":
        c = rat(value)
        return Polynomial(self.chart, {e: c * k for e, k in self.terms})

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.chart.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e, _ in self.terms)

    # --- calculus -----------------------------------------------------

    def partial(self, name: str) -> "Polynomial":
        """Formal partial derivative with respect to a chart coordinate."""
        i = self.chart.index(name)
        acc: Dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms:
            if exp[i] == 0:
                continue
            new = list(exp)
            new[i] -= 1
            acc[tuple(new)] = coeff * exp[i]
        return Polynomial(self.chart, acc)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.chart.dim:
            raise ValueError("point dimension does not match chart")
        total = ZERO
        for exp, coeff in self.terms:
            term = coeff
            for value, power in zip(point, exp):
                for _ in range(power):
                    term *= value
            total += term
        return total

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute coordinates by polynomials (all on one target chart).

        Coordinates absent from `images` must exist on the target chart and
        map to themselves.
        """
        if not images:
            return self
        target = next(iter(images.values())).chart
        lookup = []
        for name in self.chart.names:
            if name in images:
                img = images[name]
                if img.chart != target:
                    raise ChartMismatch("substitution images on mixed charts")
                lookup.append(img)
            else:
                lookup.append(Polynomial.coordinate(target, name))
        result = Polynomial.zero(target)
        for exp, coeff in self.terms:
            term = Polynomial.constant(target, coeff)
            for img, power in zip(lookup, exp):
                for _ in range(power):
                    term = term * img
            result = result + term
        return result

    def restrict(self, target: Chart) -> "Polynomial":
        """Project onto a subchart; raises if a dropped coordinate occurs."""
        keep = {name: target.index(name) for name in self.chart.names if name in set(target.names)}
        acc: Dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms:
            new = [0] * target.dim
            for name, power in zip(self.chart.names, exp):
                if power == 0:
                    continue
                if name not in keep:
                    raise ValueError(f"coordinate {name!r} survives restriction")
                new[keep[name]] = power
            acc[tuple(new)] = coeff
        return Polynomial(target, acc)

    def lift(self, target: Chart) -> "Polynomial":
        """Reinterpret on a chart containing this chart's coordinates."""
        index = {name: target.index(name) for name in self.chart.names}
        acc: Dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms:
            new = [0] * target.dim
            for name, power in zip(self.chart.names, exp):
                new[index[name]] = power
            acc[tuple(new)] = coeff
        return Polynomial(target, acc)

    def rename(self, target: Chart, mapping: Mapping[str, str]) -> "Polynomial":
        """Transport to `target`, renaming coordinates via `mapping`.

        Coordinates not mentioned keep their name; every (renamed) coordinate
        must exist on the target chart.
        """
        index = {}
        for name in self.chart.names:
            index[name] = target.index(mapping.get(name, name))
        acc: Dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms:
            new = [0] * target.dim
            for name, power in zip(self.chart.names, exp):
                new[index[name]] += power
            acc[tuple(new)] = coeff
        return Polynomial(target, acc)

    def coefficient_of(self, name: str) -> "Polynomial":
        """Coefficient of the degree-1 part in `name` (a polynomial in the rest).

        Requires the polynomial to have degree <= 1 in `name`.
        """
        i = self.chart.index(name)
        acc: Dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms:
            if exp[i] == 0:
                continue
            if exp[i] > 1:
                raise ValueError(f"degree in {name} exceeds 1")
            new = list(exp)
            new[i] = 0
            acc[tuple(new)] = coeff
        return Polynomial(self.chart, acc)

    def constant_part_in(self, names: Iterable[str]) -> "Polynomial":
        """Terms of degree 0 in every coordinate of `names`."""
        idx = [self.chart.index(n) for n in names]
        acc = {e: c for e, c in self.terms if all(e[i] == 0 for i in idx)}
        return Polynomial(self.chart, acc)

    # --- printing -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for k, (exp, coeff) in enumerate(self.terms):
            sign = "-" if coeff < 0 else "+"
            mono = _format_monomial(self.chart, exp, abs(coeff))
            if k == 0:
                pieces.append(mono if coeff > 0 else f"-{mono}")
            else:
                pieces.append(f" {sign} {mono}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def _term_key(item: Tuple[Exponent, Fraction]):
    exp, _ = item
    return (sum(exp), exp)


def _format_monomial(chart: Chart, exp: Exponent, coeff: Fraction) -> str:
    factors = []
    for name, power in zip(chart.names, exp):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    if not factors:
        return format_rat(coeff)
    if coeff == 1:
        return " * ".join(factors)
    return " * ".join([format_rat(coeff)] + factors)


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    """Ring operation dispatch: op in {'add', 'mul'}."""
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def partial(p: Polynomial, coord: str) -> Polynomial:
    return p.partial(coord)

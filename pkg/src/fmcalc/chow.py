"""Exact intersection theory on products of up to three gerbey genus 1 curves.

Classes are rational combinations of square-free monomials in three kinds of
generators on a product ``C_0 x ... x C_{n-1}``:

``G(i, j)``
    the graph divisor between factors ``i < j``;
``P(i)``
    the pullback of a point class from factor ``i`` (a fiber divisor);
``T(i, j, k)``
    an internal codimension-2 class standing for ``G(i, j) * G(j, k)``.

Products are reduced by a small rewriting system driven by an
:class:`IntersectionTable`:

R1  ``P(i)^2 -> 0`` and ``G(i,j)^2 -> self * P(i) P(j)``
R2  ``G(i,j) P(i) -> first * P(i) P(j)`` and ``G(i,j) P(j) -> second * P(i) P(j)``
R3  ``G(i,j) G(j,k) -> T(i,j,k)``, only when no R2 redex exists
R4  ``T(i,j,k) P(l) -> P(i) P(j) P(k)`` with the coefficient obtained by
    expanding ``T`` back into graphs
R5  ``T(i,j,k) G(i,j)`` and ``T(i,j,k) G(j,k)``, likewise

plus two global checks: anything past the ambient dimension is zero, and a
product of all three graph classes on a triple is rejected.  R4 and R5 exist
so that multiplication stays associative once ``T`` has been formed.

The default table has ``first = second = 1`` and ``self = 0``: a graph meets
fibers of both rulings once and has zero self-intersection.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from math import factorial
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import FMCalcError, TableError, UnsupportedProduct

Number = Union[int, Fraction]


class Gen(NamedTuple):
    kind: str  # "G", "P" or "T"
    idx: tuple[int, ...]

    @property
    def codim(self) -> int:
        return 2 if self.kind == "T" else 1

    def __str__(self):
        return self.kind + "".join(map(str, self.idx))


def Graph(i: int, j: int) -> Gen:
    if not i < j:
        raise FMCalcError(f"graph generator needs i < j, got ({i}, {j})")
    return Gen("G", (i, j))


def Point(i: int) -> Gen:
    return Gen("P", (i,))


def Tridiag(i: int, j: int, k: int) -> Gen:
    if not i < j < k:
        raise FMCalcError(f"tridiagonal generator needs i < j < k, got ({i}, {j}, {k})")
    return Gen("T", (i, j, k))


Monomial = tuple[Gen, ...]


def monomial(*gens: Gen) -> Monomial:
    return tuple(sorted(gens))


def codim(mono: Monomial) -> int:
    return sum(g.codim for g in mono)


def format_monomial(mono: Monomial | None) -> str:
    if mono is None:
        return "0"
    return "*".join(map(str, mono)) or "1"


@dataclass(frozen=True)
class ProductSpace:
    factors: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not 1 <= len(self.factors) <= 3:
            raise FMCalcError(f"products of 1 to 3 curves only, got {len(self.factors)}")

    @classmethod
    def of_size(cls, n: int) -> "ProductSpace":
        return cls(tuple(f"C{i}" for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.factors)

    def point_class(self) -> Monomial:
        return tuple(Point(i) for i in range(self.dim))

    def generators(self) -> list[Gen]:
        n = self.dim
        gens = [Graph(i, j) for i in range(n) for j in range(i + 1, n)]
        gens += [Point(i) for i in range(n)]
        gens += [Tridiag(i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)]
        return gens

    def check(self, gen: Gen) -> None:
        if any(not 0 <= i < self.dim for i in gen.idx):
            raise FMCalcError(f"generator {gen} does not live on a {self.dim}-fold product")


@dataclass(frozen=True)
class IntersectionTable:
    """Pairings that drive the rewrite rules.

    ``graph_point_first`` is ``G(i,j) . P(i)``, ``graph_point_second`` is
    ``G(i,j) . P(j)`` and ``graph_self`` is ``G(i,j)^2``, all measured on a
    pair of curves.
    """

    graph_point_first: Fraction = Fraction(1)
    graph_point_second: Fraction = Fraction(1)
    graph_self: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("graph_point_first", "graph_point_second", "graph_self"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def graph_of_multiplication(cls, d: int) -> "IntersectionTable":
        """Table for the honest graph of ``p -> d*p``, which covers the target with degree ``d^2``."""
        return cls(Fraction(1), Fraction(d * d), Fraction(0))

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "IntersectionTable":
        known = {"graph_point_first", "graph_point_second", "graph_self"}
        bad = sorted(set(data) - known)
        if bad:
            raise FMCalcError(f"unknown intersection table key: {bad[0]}")
        return cls(**{k: Fraction(str(v)) for k, v in data.items()})

    @classmethod
    def load(cls, path: str | Path) -> "IntersectionTable":
        return cls.from_mapping(json.loads(Path(path).read_text()))

    def to_mapping(self) -> dict[str, str]:
        return {
            "graph_point_first": format_number(self.graph_point_first),
            "graph_point_second": format_number(self.graph_point_second),
            "graph_self": format_number(self.graph_self),
        }


DEFAULT_TABLE = IntersectionTable()

REJECTED = "rejected"
_ALL_PAIRS = frozenset({(0, 1), (0, 2), (1, 2)})


def _graph_pairs(mono: Monomial) -> set[tuple[int, int]]:
    pairs = set()
    for g in mono:
        if g.kind == "G":
            pairs.add(g.idx)
        elif g.kind == "T":
            i, j, k = g.idx
            pairs.update({(i, j), (j, k)})
    return pairs


def _is_rejected(mono: Monomial) -> bool:
    return _ALL_PAIRS <= _graph_pairs(mono)


def _replace(mono: Monomial, remove: Iterable[Gen], add: Iterable[Gen]) -> Monomial:
    items = list(mono)
    for g in remove:
        items.remove(g)
    return tuple(sorted(items + list(add)))


def _successors(mono: Monomial, table: IntersectionTable):
    """Every one-step rewrite of ``mono`` as ``(rule, coefficient, result)``.

    ``result`` is ``None`` when the rule sends the monomial to zero.
    """
    counts = Counter(mono)
    present = set(counts)
    out = []
    for g, c in sorted(counts.items()):
        if c < 2:
            continue
        if g.kind == "P":
            out.append(("R1", Fraction(0), None))
        elif g.kind == "G":
            i, j = g.idx
            out.append(("R1", table.graph_self, _replace(mono, [g, g], [Point(i), Point(j)])))
        else:
            out.append(("R1", Fraction(0), None))
    r2 = []
    for g in sorted(present):
        if g.kind != "G":
            continue
        i, j = g.idx
        if Point(i) in present:
            r2.append(("R2", table.graph_point_first, _replace(mono, [g], [Point(j)])))
        if Point(j) in present:
            r2.append(("R2", table.graph_point_second, _replace(mono, [g], [Point(i)])))
    out += r2
    if not r2:
        for g in sorted(present):
            if g.kind != "G":
                continue
            i, j = g.idx
            for h in sorted(present):
                if h.kind == "G" and h.idx[0] == j:
                    k = h.idx[1]
                    out.append(("R3", Fraction(1), _replace(mono, [g, h], [Tridiag(i, j, k)])))
    first, second, self_ = table.graph_point_first, table.graph_point_second, table.graph_self
    for t in sorted(g for g in present if g.kind == "T"):
        i, j, k = t.idx
        full = [Point(i), Point(j), Point(k)]
        point_coef = {i: first * first, j: first * second, k: second * second}
        for l, coef in point_coef.items():
            if Point(l) in present:
                out.append(("R4", coef, _replace(mono, [t, Point(l)], full)))
        if Graph(i, j) in present:
            out.append(("R5", self_ * first, _replace(mono, [t, Graph(i, j)], full)))
        if Graph(j, k) in present:
            out.append(("R5", self_ * second, _replace(mono, [t, Graph(j, k)], full)))
    return out


def _validate(mono: Monomial, space: ProductSpace) -> None:
    for g in mono:
        space.check(g)


def rewrite_normal_form(
    mono: Iterable[Gen],
    space: ProductSpace | None = None,
    table: IntersectionTable = DEFAULT_TABLE,
) -> tuple[Fraction, Monomial] | None:
    """Reduce a monomial to ``(coefficient, normal monomial)``, or ``None`` for zero.

    Rules are applied in a fixed priority order until none applies.  Raises
    :class:`UnsupportedProduct` for a product of all three graph classes.
    When ``space`` is omitted the smallest product containing every index is
    used.
    """
    mono = tuple(sorted(mono))
    if space is None:
        n = max((i for g in mono for i in g.idx), default=0) + 1
        space = ProductSpace.of_size(n)
    _validate(mono, space)
    return _normal_form(mono, space.dim, table)


@lru_cache(maxsize=None)
def _normal_form(mono: Monomial, dim: int, table: IntersectionTable):
    coef = Fraction(1)
    if codim(mono) > dim:
        return None
    while True:
        if _is_rejected(mono):
            raise UnsupportedProduct(
                f"{format_monomial(mono)}: products of three graph classes are not supported"
            )
        steps = _successors(mono, table)
        if not steps:
            return coef, mono
        _, c, result = steps[0]
        coef *= c
        if result is None or coef == 0:
            return None
        mono = result


def all_normal_forms(
    mono: Iterable[Gen],
    space: ProductSpace,
    table: IntersectionTable = DEFAULT_TABLE,
) -> set:
    """Normal forms reachable by every possible order of rule application.

    Each outcome is ``(coefficient, monomial)``, ``(0, None)`` for zero or
    :data:`REJECTED`.  A confluent system yields exactly one outcome.
    """
    mono = tuple(sorted(mono))
    _validate(mono, space)

    @lru_cache(maxsize=None)
    def explore(m: Monomial) -> frozenset:
        if codim(m) > space.dim:
            return frozenset({(Fraction(0), None)})
        if _is_rejected(m):
            return frozenset({REJECTED})
        steps = _successors(m, table)
        if not steps:
            return frozenset({(Fraction(1), m)})
        found = set()
        for _, c, result in steps:
            if result is None or c == 0:
                found.add((Fraction(0), None))
                continue
            for outcome in explore(result):
                if outcome == REJECTED:
                    found.add(REJECTED)
                elif outcome[1] is None:
                    found.add((Fraction(0), None))
                else:
                    found.add((c * outcome[0], outcome[1]))
        return frozenset(found)

    return set(explore(mono))


def format_number(x: Number) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class ChowElement:
    """An element of the rational Chow ring of a product space.

    Terms are stored in normal form, so equality is equality of classes.
    """

    __slots__ = ("space", "table", "terms")

    def __init__(
        self,
        space: ProductSpace,
        terms: Mapping[Monomial, Number] | None = None,
        table: IntersectionTable = DEFAULT_TABLE,
    ):
        self.space = space
        self.table = table
        acc: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            nf = rewrite_normal_form(mono, space, table)
            if nf is None:
                continue
            k, m = nf
            acc[m] = acc.get(m, Fraction(0)) + c * k
        self.terms = {m: c for m, c in sorted(acc.items(), key=_term_key) if c != 0}

    @classmethod
    def zero(cls, space, table=DEFAULT_TABLE):
        return cls(space, {}, table)

    @classmethod
    def one(cls, space, table=DEFAULT_TABLE):
        return cls(space, {(): 1}, table)

    @classmethod
    def generator(cls, space, gen: Gen, table=DEFAULT_TABLE):
        return cls(space, {(gen,): 1}, table)

    def _compatible(self, other: "ChowElement") -> None:
        if self.space != other.space:
            raise FMCalcError(f"elements live on different spaces: {self.space} vs {other.space}")
        if self.table != other.table:
            raise FMCalcError("elements were built with different intersection tables")

    def _coerce(self, other) -> "ChowElement":
        if isinstance(other, ChowElement):
            self._compatible(other)
            return other
        if isinstance(other, (int, Fraction)):
            return ChowElement(self.space, {(): other}, self.table)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return ChowElement(self.space, terms, self.table)

    __radd__ = __add__

    def __neg__(self):
        return ChowElement(self.space, {m: -c for m, c in self.terms.items()}, self.table)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, k: Number) -> "ChowElement":
        return ChowElement(self.space, {m: k * c for m, c in self.terms.items()}, self.table)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, k: Number):
        return self.scale(Fraction(1) / Fraction(k))

    def __pow__(self, k: int):
        if k < 0:
            raise FMCalcError("negative powers are not defined")
        result = ChowElement.one(self.space, self.table)
        for _ in range(k):
            result = multiply(result, self)
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ChowElement(self.space, {(): other}, self.table)
        if not isinstance(other, ChowElement):
            return NotImplemented
        return (self.space, self.table, self.terms) == (other.space, other.table, other.terms)

    def __hash__(self):
        return hash((self.space, self.table, tuple(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def part(self, k: int) -> "ChowElement":
        return ChowElement(
            self.space, {m: c for m, c in self.terms.items() if codim(m) == k}, self.table
        )

    def graded(self) -> dict[int, "ChowElement"]:
        return {k: self.part(k) for k in sorted({codim(m) for m in self.terms})}

    def degree(self) -> Fraction:
        return degree(self)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.terms.items():
            sign = "-" if c < 0 else "+"
            c = abs(c)
            if not m:
                body = format_number(c)
            elif c == 1:
                body = format_monomial(m)
            else:
                body = f"{format_number(c)}*{format_monomial(m)}"
            pieces.append((sign, body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"ChowElement({self})"


def _term_key(item):
    mono, _ = item
    return (codim(mono), mono)


def multiply(a: ChowElement, b: ChowElement) -> ChowElement:
    a._compatible(b)
    acc: dict[Monomial, Fraction] = {}
    for (m1, c1), (m2, c2) in cartesian(a.terms.items(), b.terms.items()):
        m = tuple(sorted(m1 + m2))
        acc[m] = acc.get(m, Fraction(0)) + c1 * c2
    return ChowElement(a.space, acc, a.table)


def degree(e: ChowElement) -> Fraction:
    """Evaluate the top-codimension part against the fundamental class."""
    top = e.space.dim
    full = e.space.point_class()
    total = Fraction(0)
    for m, c in e.terms.items():
        if codim(m) != top:
            continue
        if m == full:
            total += c
        elif len(m) == 2 and m[1].kind == "T" and m[0].kind == "P" and m[0].idx[0] in m[1].idx:
            total += c
        else:
            raise TableError(f"top-degree class {format_monomial(m)} has no evaluation")
    return total


def exact_integer(x: Fraction, what: str) -> int:
    if Fraction(x).denominator != 1:
        raise TableError(f"{what} = {format_number(x)} is not an integer")
    return int(x)


@dataclass(frozen=True)
class DivisorClass:
    """An integer combination of graph and point divisors on a product space."""

    space: ProductSpace
    coeffs: tuple[tuple[Gen, int], ...] = ()

    def __post_init__(self):
        merged: dict[Gen, int] = {}
        for g, c in self.coeffs:
            if g.kind == "T":
                raise FMCalcError("T classes have codimension 2 and are not divisors")
            self.space.check(g)
            if int(c) != c:
                raise FMCalcError(f"divisor coefficients must be integers, got {c}")
            merged[g] = merged.get(g, 0) + int(c)
        object.__setattr__(
            self, "coeffs", tuple(sorted((g, c) for g, c in merged.items() if c != 0))
        )

    @classmethod
    def of(cls, space: ProductSpace, coeffs: Mapping[Gen, int]) -> "DivisorClass":
        return cls(space, tuple(coeffs.items()))

    @classmethod
    def universal(cls, space: ProductSpace, d: int, i: int = 0, j: int = 1) -> "DivisorClass":
        """``G(i,j) + (d-1) P(j)``, the divisor of the universal degree-``d`` line bundle."""
        return cls.of(space, {Graph(i, j): 1, Point(j): d - 1})

    @property
    def terms(self) -> dict[Gen, int]:
        return dict(self.coeffs)

    def element(self, table: IntersectionTable = DEFAULT_TABLE) -> ChowElement:
        return ChowElement(self.space, {(g,): c for g, c in self.coeffs}, table)

    def pullback(self, space: ProductSpace, positions: tuple[int, ...]) -> "DivisorClass":
        """Pull back along the projection of ``space`` onto the factors at ``positions``."""
        if len(positions) != self.space.dim or list(positions) != sorted(set(positions)):
            raise FMCalcError(f"positions {positions} must be increasing, one per factor")
        moved = {}
        for g, c in self.coeffs:
            moved[Gen(g.kind, tuple(positions[i] for i in g.idx))] = c
        return DivisorClass.of(space, moved)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if self.space != other.space:
            raise FMCalcError("divisors live on different spaces")
        return DivisorClass(self.space, self.coeffs + other.coeffs)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(self.space, tuple((g, -c) for g, c in self.coeffs))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __rmul__(self, k: int) -> "DivisorClass":
        return DivisorClass(self.space, tuple((g, k * c) for g, c in self.coeffs))

    def __str__(self):
        return str(self.element())


def fiber_restrict(
    D: DivisorClass, fixed_factor: int, table: IntersectionTable = DEFAULT_TABLE
) -> int:
    """Degree of ``D`` restricted to a general fiber over ``fixed_factor`` of a pair."""
    if D.space.dim != 2:
        raise FMCalcError("fiber restriction is a number only on a pair of curves")
    e = D.element(table) * ChowElement.generator(D.space, Point(fixed_factor), table)
    return exact_integer(degree(e), "fiber degree")


def power_degree(D: DivisorClass, table: IntersectionTable = DEFAULT_TABLE) -> Fraction:
    """``deg(D^n)`` on an ``n``-fold product."""
    return degree(D.element(table) ** D.space.dim)


def exponential_part(D: DivisorClass, k: int, table: IntersectionTable = DEFAULT_TABLE) -> ChowElement:
    """``D^k / k!``."""
    return (D.element(table) ** k) / factorial(k)


_GEN_RE = re.compile(r"^(?:G(\d)(\d)|P(\d)|T(\d)(\d)(\d))$")
_NUM_RE = re.compile(r"^\d+(?:/\d+)?$")


def parse_gen(token: str) -> Gen:
    m = _GEN_RE.match(token)
    if not m:
        raise FMCalcError(f"cannot parse generator {token!r}")
    if m.group(1) is not None:
        return Graph(int(m.group(1)), int(m.group(2)))
    if m.group(3) is not None:
        return Point(int(m.group(3)))
    return Tridiag(int(m.group(4)), int(m.group(5)), int(m.group(6)))


def parse_element(
    text: str, space: ProductSpace, table: IntersectionTable = DEFAULT_TABLE
) -> ChowElement:
    """Parse the canonical text form, e.g. ``"G01 + 2*P1 - 1/2*P0*P1"``."""
    src = text.replace(" ", "")
    if not src:
        raise FMCalcError("empty expression")
    if src[0] not in "+-":
        src = "+" + src
    parts = re.findall(r"([+-])([^+-]+)", src)
    if "".join(s + b for s, b in parts) != src:
        raise FMCalcError(f"cannot parse expression {text!r}")
    terms: dict[Monomial, Fraction] = {}
    for sign, body in parts:
        coef = Fraction(1)
        gens = []
        for tok in body.split("*"):
            if _NUM_RE.match(tok):
                coef *= Fraction(tok)
            else:
                gens.append(parse_gen(tok))
        if sign == "-":
            coef = -coef
        m = tuple(sorted(gens))
        terms[m] = terms.get(m, Fraction(0)) + coef
    return ChowElement(space, terms, table)


def parse_divisor(text: str, space: ProductSpace) -> DivisorClass:
    e = parse_element(text, space, IntersectionTable())
    coeffs = {}
    for m, c in e.terms.items():
        if codim(m) != 1 or c.denominator != 1:
            raise FMCalcError(f"{text!r} is not an integral divisor")
        coeffs[m[0]] = int(c)
    return DivisorClass.of(space, coeffs)

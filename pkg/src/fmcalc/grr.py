"""Riemann-Roch on gerbey genus 1 curves and pushforwards of line-bundle kernels.

Tangent bundles of gerbey genus 1 curves have trivial Todd class, so GRR for
a projection collapses to ``ch(pi_* L) = pi_*(ch L)``: the degree of a
pushforward is read off from the top part ``c_1^n / n!`` of the Chern
character, while the rank comes from sections along a fiber.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .chow import (
    DEFAULT_TABLE,
    ChowElement,
    DivisorClass,
    IntersectionTable,
    ProductSpace,
    degree,
    exact_integer,
)
from .errors import FMCalcError, KernelError, UnsupportedGenus
from .weights import BrauerClass


@dataclass(frozen=True)
class GerbeyCurve:
    """A G_m-gerbe over a smooth curve of the given genus.

    ``brauer`` is the class of the gerbe, or ``None`` when it is not known
    (e.g. for a moduli gerbe whose class was never computed).
    """

    id: str
    genus: int = 1
    brauer: BrauerClass | None = None
    canonical_trivial: bool | None = field(default=None)

    def __post_init__(self):
        if self.genus < 0:
            raise FMCalcError(f"genus must be nonnegative, got {self.genus}")
        if self.canonical_trivial is None:
            object.__setattr__(self, "canonical_trivial", self.genus == 1)
        elif self.genus == 1 and not self.canonical_trivial:
            raise FMCalcError("a genus 1 curve has trivial canonical bundle")

    @property
    def coarse_dim(self) -> int:
        return 1


@dataclass(frozen=True)
class ChernCharacter:
    rank: int
    c1: DivisorClass
    higher: ChowElement

    def total(self) -> ChowElement:
        return self.rank + self.c1.element(self.higher.table) + self.higher


def todd_class(
    curves: Sequence[GerbeyCurve], table: IntersectionTable = DEFAULT_TABLE
) -> ChowElement:
    """Todd class of a product of gerbey genus 1 curves, which is the unit."""
    for c in curves:
        if c.genus != 1:
            raise UnsupportedGenus(f"{c.id} has genus {c.genus}; Todd class is not trivial")
    return ChowElement.one(ProductSpace(tuple(c.id for c in curves)), table)


def line_bundle_character(
    c1: DivisorClass, table: IntersectionTable = DEFAULT_TABLE
) -> ChernCharacter:
    """``1 + c_1 + c_1^2/2 + ...`` truncated at the dimension of the product."""
    x = c1.element(table)
    higher = ChowElement.zero(c1.space, table)
    power = x
    for k in range(2, c1.space.dim + 1):
        power = power * x
        higher = higher + power / factorial(k)
    return ChernCharacter(1, c1, higher)


def gerbey_rr_h0(genus: int, degree: int, is_trivial: bool = False) -> int:
    """Number of sections of a line bundle of the given degree on a gerbey genus 1 curve."""
    if genus != 1:
        raise UnsupportedGenus(f"section counts are implemented for genus 1 only, got {genus}")
    if degree > 0:
        return degree
    if degree < 0:
        return 0
    return 1 if is_trivial else 0


def euler_char(genus: int, degree: int) -> int:
    return degree - genus + 1


def c1_squared(c1: DivisorClass, table: IntersectionTable = DEFAULT_TABLE) -> Fraction:
    x = c1.element(table)
    return degree(x * x)


def pushforward_invariants(
    c1: DivisorClass, moduli_degree: int, table: IntersectionTable = DEFAULT_TABLE
) -> tuple[int, int]:
    """Rank and degree of ``pi_* L`` along the projection to the second factor.

    The rank is the section count of the degree-``moduli_degree`` restriction
    of ``L`` to a fiber; the degree is ``c_1^2 / 2`` from the intersection
    table.  Negative-degree kernels must be dualized first so that higher
    direct images vanish.
    """
    if c1.space.dim != 2:
        raise KernelError("pushforward invariants are defined for kernels on a pair of curves")
    if moduli_degree <= 0:
        raise KernelError(
            f"moduli degree {moduli_degree} <= 0: R^1 does not vanish, dualize the kernel first"
        )
    rank = gerbey_rr_h0(1, moduli_degree, False)
    top = line_bundle_character(c1, table).higher.part(2)
    return rank, exact_integer(degree(top), "pushforward degree")

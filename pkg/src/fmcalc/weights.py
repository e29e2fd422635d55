"""Weights of sheaves on G_m-gerbes and the twisted-sheaf dictionary.

A sheaf of weight ``t`` on a gerbe ``X -> X`` with Brauer class ``alpha``
is the same thing as a ``t * alpha``-twisted sheaf on the coarse space.
Sheaves are tracked only through their numerical invariants (rank, degree,
weight), which is all the kernel calculus downstream consumes.  A sheaf of
mixed weight is a list of pure-weight pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import FMCalcError, LiftError


@dataclass(frozen=True)
class BrauerClass:
    """A torsion class ``value`` in a cyclic group of order ``order_m``."""

    order_m: int
    value: int = 1

    def __post_init__(self):
        if self.order_m < 1:
            raise FMCalcError(
                f"Brauer classes must have finite positive order, got {self.order_m}"
            )
        object.__setattr__(self, "value", self.value % self.order_m)

    def __mul__(self, t: int) -> "BrauerClass":
        return BrauerClass(self.order_m, t * self.value)

    __rmul__ = __mul__

    def __str__(self):
        return f"{self.value} mod {self.order_m}"


@dataclass(frozen=True)
class WeightedObject:
    rank: int
    degree: int
    weight: int
    base: str = "C"

    def __post_init__(self):
        if self.rank < 0:
            raise FMCalcError(f"rank must be nonnegative, got {self.rank}")
        if self.rank == 0 and self.degree != 0:
            raise FMCalcError("a rank-0 object must have degree 0")


@dataclass(frozen=True)
class TwistedObject:
    """Numerical class of a sheaf in ``Coh(X, twist)``; ``twist`` is a residue."""

    rank: int
    degree: int
    twist: int
    base: str = "C"

    def __post_init__(self):
        if self.rank < 0:
            raise FMCalcError(f"rank must be nonnegative, got {self.rank}")


def tensor_weights(t: int, t2: int) -> int:
    return t + t2


def hom_weight(t: int, t2: int) -> int:
    """Weight of ``Hom(F, H)`` for ``F`` of weight ``t`` and ``H`` of weight ``t2``."""
    return t2 - t


def twist_of_weight(t: int, alpha: BrauerClass) -> int:
    return (t * alpha.value) % alpha.order_m


def section_restrict(obj: WeightedObject, alpha: BrauerClass) -> TwistedObject:
    return TwistedObject(obj.rank, obj.degree, twist_of_weight(obj.weight, alpha), obj.base)


def section_lift(obj: TwistedObject, t: int, alpha: BrauerClass) -> WeightedObject:
    """Inverse of :func:`section_restrict` on weight-``t`` objects.

    Raises :class:`LiftError` when ``obj`` is not ``t * alpha``-twisted.
    """
    expected = twist_of_weight(t, alpha)
    if obj.twist % alpha.order_m != expected:
        raise LiftError(
            f"object is {obj.twist}-twisted but weight {t} needs twist {expected} "
            f"(alpha = {alpha})"
        )
    return WeightedObject(obj.rank, obj.degree, t, obj.base)


def restrict_components(
    parts: Iterable[WeightedObject], alpha: BrauerClass
) -> list[TwistedObject]:
    """Apply :func:`section_restrict` to each weight space of a mixed object."""
    return [section_restrict(p, alpha) for p in parts]


def weight_decomposition(parts: Iterable[WeightedObject]) -> dict[int, list[WeightedObject]]:
    out: dict[int, list[WeightedObject]] = {}
    for p in parts:
        out.setdefault(p.weight, []).append(p)
    return dict(sorted(out.items()))

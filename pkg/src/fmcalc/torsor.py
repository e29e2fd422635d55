"""Cyclic model of the Weil-Chatelet group and the derived-equivalence test.

A genus 1 curve ``C`` with Jacobian ``E`` has a class ``[C]`` in ``H^1(k, E)``.
Everything here happens inside the finite cyclic subgroup generated by the
classes at hand, so a class is just a residue modulo the order ``n`` of that
subgroup.  Two torsors ``C, C'`` are derived equivalent exactly when

    [C] = phi_*(a [C'])

for some automorphism ``phi`` of ``E`` and some integer ``a`` coprime to the
order of ``[C']``.  The action of ``Aut_k(E)`` on ``H^1`` is supplied by the
caller as a set of unit multipliers (see :class:`AutModel`).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .errors import FMCalcError, IncompatibleTorsorClasses


@dataclass(frozen=True)
class TorsorGroup:
    """The cyclic group ``Z/order_n`` generated by a torsor class."""

    order_n: int

    def __post_init__(self):
        if self.order_n < 1:
            raise FMCalcError(f"group order must be positive, got {self.order_n}")

    def cls(self, value: int) -> "TorsorClass":
        return TorsorClass(value % self.order_n, self)

    def generator(self) -> "TorsorClass":
        return self.cls(1)

    def elements(self) -> list["TorsorClass"]:
        return [TorsorClass(v, self) for v in range(self.order_n)]


@dataclass(frozen=True)
class TorsorClass:
    value: int
    group: TorsorGroup

    def __post_init__(self):
        if not 0 <= self.value < self.group.order_n:
            raise FMCalcError(
                f"class value {self.value} not reduced modulo {self.group.order_n}"
            )

    @property
    def n(self) -> int:
        return self.group.order_n

    def scaled(self, k: int) -> "TorsorClass":
        return self.group.cls(k * self.value)

    def __str__(self):
        return f"{self.value} mod {self.n}"


@dataclass(frozen=True)
class AutModel:
    """Action of ``Aut_k(E)`` on ``H^1(k, E)`` as multiplication by units.

    The multiplier set must contain 1 and be closed under inversion modulo
    ``order_n``.  For a generic j-invariant the group is ``{+1, -1}``; use
    :meth:`pm1`.
    """

    order_n: int
    multipliers: frozenset[int]

    def __post_init__(self):
        n = self.order_n
        units = frozenset(m % n for m in self.multipliers)
        object.__setattr__(self, "multipliers", units)
        for m in units:
            if gcd(m, n) != 1:
                raise FMCalcError(f"multiplier {m} is not a unit modulo {n}")
            if pow(m, -1, n) not in units:
                raise FMCalcError(f"multiplier set not closed under inversion: {m}")
        if 1 % n not in units:
            raise FMCalcError("multiplier set must contain 1")

    @classmethod
    def from_list(cls, order_n: int, multipliers: Iterable[int]) -> "AutModel":
        return cls(order_n, frozenset(multipliers))

    @classmethod
    def pm1(cls, order_n: int) -> "AutModel":
        return cls(order_n, frozenset({1, -1}))

    @classmethod
    def trivial(cls, order_n: int) -> "AutModel":
        return cls(order_n, frozenset({1}))


PRESETS = {"pm1": AutModel.pm1, "trivial": AutModel.trivial}


@dataclass(frozen=True)
class EquivalenceDecision:
    equivalent: bool
    witness: tuple[int, int] | None = None

    @property
    def multiplier(self) -> int | None:
        return None if self.witness is None else self.witness[0]

    @property
    def a(self) -> int | None:
        return None if self.witness is None else self.witness[1]


def element_order(c: TorsorClass) -> int:
    return c.n // gcd(c.n, c.value)


def pic_class(c: TorsorClass, d: int) -> TorsorClass:
    """Class of ``Pic^d(C)``, which is ``d`` times the class of ``C``."""
    return c.scaled(d)


def derived_equivalent(
    source: TorsorClass, target: TorsorClass, aut: AutModel | None = None
) -> EquivalenceDecision:
    """Decide whether ``source = s * a * target`` for a unit ``s`` and ``a`` prime to ``ord(target)``.

    The search runs over multipliers in increasing order and ``a`` in
    ``1..ord(target)``, so the reported witness is the lexicographically
    smallest one.  Without ``aut`` the generic ``{+1, -1}`` action is used.
    """
    if source.group != target.group:
        raise IncompatibleTorsorClasses(
            f"classes live in Z/{source.n} and Z/{target.n}"
        )
    n = source.n
    if aut is None:
        aut = AutModel.pm1(n)
    elif aut.order_n != n:
        raise IncompatibleTorsorClasses(
            f"automorphism model is for Z/{aut.order_n}, classes are in Z/{n}"
        )
    order = element_order(target)
    for s in sorted(aut.multipliers):
        for a in range(1, order + 1):
            if gcd(a, order) != 1:
                continue
            if (s * a * target.value - source.value) % n == 0:
                return EquivalenceDecision(True, (s, a))
    return EquivalenceDecision(False)


def check_witness(
    source: TorsorClass, target: TorsorClass, decision: EquivalenceDecision
) -> bool:
    """Re-evaluate a witness; ``True`` if it reproduces ``source`` exactly."""
    if decision.witness is None:
        return False
    s, a = decision.witness
    return (
        gcd(a, element_order(target)) == 1
        and (s * a * target.value - source.value) % source.n == 0
    )

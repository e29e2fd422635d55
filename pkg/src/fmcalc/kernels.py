"""Fourier-Mukai kernels between gerbey genus 1 curves.

A kernel is recorded by its numerical data: the first Chern class on the
product, the degree ``d`` of the Picard component it parameterizes, the
G_m-weight, the rank and a homological shift.  Everything is decided from
that data: strong simplicity from the fiberwise Hom table of genus 1 line
bundles, equivalence from strong simplicity plus triviality of the canonical
bundle, and ranks and degrees of convolutions from intersection numbers on
the triple product.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .chow import (
    DEFAULT_TABLE,
    ChowElement,
    DivisorClass,
    IntersectionTable,
    Point,
    ProductSpace,
    degree,
    exact_integer,
)
from .errors import KernelError
from .grr import GerbeyCurve, euler_char, pushforward_invariants
from .weights import BrauerClass, hom_weight, tensor_weights


@dataclass(frozen=True)
class FMKernel:
    """Numerical shadow of a kernel on ``source x target``.

    ``c1`` is ``None`` for kernels that are not line bundles (convolutions);
    those carry the ``degree`` of their pushforward instead, and
    ``chi_crosscheck`` holds the fiberwise Euler characteristic computed from
    the intersection table.
    """

    source: GerbeyCurve
    target: GerbeyCurve
    c1: DivisorClass | None
    moduli_degree: int
    weight: int = 1
    shift: int = 0
    rank: int = 1
    degree: int | None = None
    chi_crosscheck: int | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise KernelError(f"kernel rank must be positive, got {self.rank}")
        if self.c1 is not None and self.c1.space.dim != 2:
            raise KernelError("a kernel's c1 lives on a pair of curves")

    @property
    def space(self) -> ProductSpace:
        return ProductSpace((self.source.id, self.target.id))

    @property
    def is_line_bundle(self) -> bool:
        return self.rank == 1 and self.c1 is not None


@dataclass(frozen=True)
class HomProfile:
    """Dimensions of ``Hom^i`` between fibers of a kernel; missing degrees are zero."""

    dims: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {i: n for i, n in sorted(self.dims.items()) if n != 0}
        if any(n < 0 for n in clean.values()):
            raise KernelError("Hom dimensions must be nonnegative")
        object.__setattr__(self, "dims", clean)

    def __getitem__(self, i: int) -> int:
        return self.dims.get(i, 0)

    def support(self) -> list[int]:
        return list(self.dims)

    def is_zero(self) -> bool:
        return not self.dims


@dataclass(frozen=True)
class ModuliTag:
    base_curve: str
    rank: int
    degree: int
    weight: int
    note: str = ""

    def label(self) -> str:
        if self.rank == 1:
            return f"Pic^{self.degree}_{self.weight}({self.base_curve})"
        return f"M_{self.weight}({self.base_curve}; rank {self.rank}, degree {self.degree})"


@dataclass(frozen=True)
class TwistedShadow:
    source: tuple[str, BrauerClass | None]
    target: tuple[str, BrauerClass | None]
    valid: bool
    realized_by: str = ""


def pic_curve(C: GerbeyCurve, d: int, weight: int = 1, brauer: BrauerClass | None = None) -> GerbeyCurve:
    return GerbeyCurve(f"Pic^{d}_{weight}({C.id})", genus=C.genus, brauer=brauer)


def universal_pic_kernel(
    C: GerbeyCurve, d: int, target_brauer: BrauerClass | None = None
) -> FMKernel:
    """Universal weight 1, degree ``d`` line bundle on ``C x Pic^d_1(C)``."""
    if d == 0:
        raise KernelError("the universal kernel is only defined for d != 0")
    target = pic_curve(C, d, 1, target_brauer)
    space = ProductSpace((C.id, target.id))
    return FMKernel(C, target, DivisorClass.universal(space, d), d, weight=1)


def _require_line_bundle(k: FMKernel, what: str) -> None:
    if not k.is_line_bundle:
        raise KernelError(f"{what} is implemented for line-bundle kernels only")


def hom_profile(k: FMKernel, same_point: bool) -> HomProfile:
    """``dim Hom^i(K_x, K_y)`` for fibers over equal or distinct points of the target.

    ``Hom(K_x, K_y) = H^*(L_y (x) L_x^v)`` on the source curve, a degree 0
    line bundle of weight zero.  It is trivial when ``x = y`` and otherwise
    trivial only for the degenerate family with ``d = 0``.
    """
    _require_line_bundle(k, "hom_profile")
    g = k.source.genus
    if g < 1:
        raise KernelError("fiberwise Hom table needs a source of genus >= 1")
    assert hom_weight(k.weight, k.weight) == 0
    trivial = same_point or k.moduli_degree == 0
    if trivial:
        return HomProfile({0: 1, 1: g})
    # nontrivial degree 0: h^0 = 0 and h^1 = h^0(dual (x) omega) = g - 1
    return HomProfile({1: g - 1})


def strongly_simple(k: FMKernel) -> bool:
    same = hom_profile(k, True)
    distinct = hom_profile(k, False)
    dim_x = k.source.coarse_dim
    in_range = all(0 <= i <= dim_x for i in same.support())
    return same[0] == 1 and in_range and distinct.is_zero()


def is_equivalence(k: FMKernel) -> bool:
    return strongly_simple(k) and bool(k.target.canonical_trivial)


def dual_kernel(k: FMKernel) -> FMKernel:
    _require_line_bundle(k, "dual_kernel")
    return replace(k, c1=-k.c1, moduli_degree=-k.moduli_degree, weight=-k.weight)


def _canonical_twist(k: FMKernel, curve: GerbeyCurve, factor: int) -> DivisorClass:
    return DivisorClass.of(k.space, {Point(factor): 2 * curve.genus - 2})


def left_adjoint_kernel(k: FMKernel) -> FMKernel:
    """``K^v (x) pi_Y^* omega_Y [dim Y]``; the twist is numerically zero in genus 1."""
    d = dual_kernel(k)
    return replace(d, c1=d.c1 + _canonical_twist(k, k.target, 1), shift=d.shift + k.target.coarse_dim)


def right_adjoint_kernel(k: FMKernel) -> FMKernel:
    """``K^v (x) pi_X^* omega_X [dim X]``."""
    d = dual_kernel(k)
    return replace(d, c1=d.c1 + _canonical_twist(k, k.source, 0), shift=d.shift + k.source.coarse_dim)


def convolution_divisor(k1: FMKernel, k2: FMKernel) -> DivisorClass:
    """``pi_01^* c1(K1) + pi_12^* c1(K2)`` on ``source x middle x target``."""
    _check_composable(k1, k2)
    triple = ProductSpace((k1.source.id, k1.target.id, k2.target.id))
    return k1.c1.pullback(triple, (0, 1)) + k2.c1.pullback(triple, (1, 2))


def _check_composable(k1: FMKernel, k2: FMKernel) -> None:
    _require_line_bundle(k1, "convolve")
    _require_line_bundle(k2, "convolve")
    if k1.target.id != k2.source.id:
        raise KernelError(
            f"cannot compose: first kernel lands on {k1.target.id}, second starts on {k2.source.id}"
        )


def chi_crosscheck(k1: FMKernel, k2: FMKernel, table: IntersectionTable = DEFAULT_TABLE) -> int:
    """Euler characteristic of the tensor product along a fiber of ``pi_02``, from the table."""
    D = convolution_divisor(k1, k2)
    fiber = ChowElement(D.space, {(Point(0), Point(2)): 1}, table)
    fiber_degree = exact_integer(degree(D.element(table) * fiber), "fiber degree")
    return euler_char(k1.target.genus, fiber_degree)


def convolve(k1: FMKernel, k2: FMKernel, table: IntersectionTable = DEFAULT_TABLE) -> FMKernel:
    """Kernel of ``Phi^{K2} o Phi^{K1}`` on ``source(K1) x target(K2)``.

    The degree is ``c_1^3 / 6`` of the pulled-back tensor product, evaluated
    symbolically on the triple product; the rank is taken to be ``d * f``.
    """
    _check_composable(k1, k2)
    d, f = k1.moduli_degree, k2.moduli_degree
    if d <= 0 or f <= 0:
        raise KernelError(f"convolution needs positive moduli degrees, got d={d}, f={f}")
    cubed = c1_cubed(k1, k2, table)
    deg = exact_integer(cubed / 6, "convolution degree")
    w = tensor_weights(k1.weight, k2.weight)
    return FMKernel(
        k1.source,
        k2.target,
        None,
        deg,
        weight=w,
        shift=k1.shift + k2.shift,
        rank=d * f,
        degree=deg,
        chi_crosscheck=chi_crosscheck(k1, k2, table),
    )


def c1_cubed(k1: FMKernel, k2: FMKernel, table: IntersectionTable = DEFAULT_TABLE):
    D = convolution_divisor(k1, k2).element(table)
    return degree(D * D * D)


def composition_moduli(k1: FMKernel, k2: FMKernel, table: IntersectionTable = DEFAULT_TABLE) -> ModuliTag:
    """Identify the outer curve as ``Pic^{deg}_{weight}`` of the source."""
    k = convolve(k1, k2, table)
    return ModuliTag(k1.source.id, 1, k.degree, k.weight)


def inverse_moduli(C: GerbeyCurve, d: int, table: IntersectionTable = DEFAULT_TABLE) -> ModuliTag:
    """Describe ``C`` as a moduli space of bundles on ``Pic^d_1(C)``.

    The pushforward of the universal bundle has rank ``d`` and degree
    ``d - 1``; its dual, the universal family, has degree ``1 - d``.  The
    family is weight 1 for the G_m of the moduli gerbe.
    """
    if d <= 0:
        raise KernelError(f"d = {d} <= 0: use dual_route_moduli for negative degrees")
    k = universal_pic_kernel(C, d)
    rank, deg = pushforward_invariants(k.c1, d, table)
    dual = dual_kernel(k)
    return ModuliTag(k.target.id, rank, -deg, -dual.weight)


def dual_route_moduli(C: GerbeyCurve, d: int, table: IntersectionTable = DEFAULT_TABLE) -> ModuliTag:
    """Moduli description for ``d < 0`` via the dual universal bundle.

    The dual universal bundle is a universal family of degree ``|d|``, so
    its divisor is taken in the same graph-plus-fibers shape as for positive
    degree.  The rank is reported as ``|d|``; the literal signed form
    ``rank d, degree d + 1`` is kept in ``note``.
    """
    if d >= 0:
        raise KernelError(f"dual route is for negative d, got {d}")
    k = universal_pic_kernel(C, d)
    shape = DivisorClass.universal(k.space, -d)
    rank, deg = pushforward_invariants(shape, -d, table)
    return ModuliTag(k.target.id, rank, -deg, 1, note=f"rank {d}, degree {d + 1}")


def determinant_data(rank: int, degree: int, weight: int, base: str = "C") -> ModuliTag:
    """Determinant of a weight-``weight`` bundle: rank 1, same degree, weight ``rank * weight``."""
    if rank < 1:
        raise KernelError(f"rank must be positive, got {rank}")
    return ModuliTag(base, 1, degree, rank * weight)


def twisted_shadow(k: FMKernel) -> TwistedShadow:
    """Twisted equivalence on coarse spaces induced by a weight 1 equivalence kernel."""
    valid = k.weight == 1 and is_equivalence(k)
    note = f"rigidified kernel of {k.source.id} x {k.target.id}" if valid else ""
    return TwistedShadow(
        (k.source.id, k.source.brauer), (k.target.id, k.target.brauer), valid, note
    )


def family_kernel(C: GerbeyCurve, d: int, weight: int = 1) -> FMKernel:
    """Kernel with the universal divisor shape for any ``d``, including the degenerate ``d = 0``."""
    target = pic_curve(C, d, weight)
    space = ProductSpace((C.id, target.id))
    return FMKernel(C, target, DivisorClass.universal(space, d), d, weight=weight)


def _respace(k: FMKernel, source: GerbeyCurve, target: GerbeyCurve) -> FMKernel:
    space = ProductSpace((source.id, target.id))
    c1 = None if k.c1 is None else DivisorClass(space, k.c1.coeffs)
    return replace(k, source=source, target=target, c1=c1)


def with_target(k: FMKernel, target: GerbeyCurve) -> FMKernel:
    return _respace(k, k.source, target)


def with_source(k: FMKernel, source: GerbeyCurve) -> FMKernel:
    return _respace(k, source, k.target)

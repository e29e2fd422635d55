"""Symbolic Fourier-Mukai calculus for G_m-gerbes over genus 1 curves."""

from .chow import (
    DEFAULT_TABLE,
    ChowElement,
    DivisorClass,
    Graph,
    IntersectionTable,
    Point,
    ProductSpace,
    Tridiag,
    degree,
    fiber_restrict,
    multiply,
    rewrite_normal_form,
)
from .errors import FMCalcError
from .grr import (
    ChernCharacter,
    GerbeyCurve,
    euler_char,
    gerbey_rr_h0,
    line_bundle_character,
    pushforward_invariants,
    todd_class,
)
from .kernels import (
    FMKernel,
    HomProfile,
    ModuliTag,
    composition_moduli,
    convolve,
    determinant_data,
    dual_kernel,
    dual_route_moduli,
    hom_profile,
    inverse_moduli,
    is_equivalence,
    left_adjoint_kernel,
    right_adjoint_kernel,
    strongly_simple,
    twisted_shadow,
    universal_pic_kernel,
)
from .torsor import AutModel, TorsorClass, TorsorGroup, derived_equivalent, element_order, pic_class
from .weights import (
    BrauerClass,
    TwistedObject,
    WeightedObject,
    hom_weight,
    section_lift,
    section_restrict,
    tensor_weights,
    twist_of_weight,
)

__version__ = "0.1.0"

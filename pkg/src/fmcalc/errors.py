"""Exception hierarchy shared by every fmcalc module."""


class FMCalcError(ValueError):
    """Base class for all calculator errors."""


class IncompatibleTorsorClasses(FMCalcError):
    """Two torsor classes live in different cyclic groups."""


class LiftError(FMCalcError):
    """A twisted object cannot be lifted at the requested weight."""


class UnsupportedProduct(FMCalcError):
    """The intersection engine has no rule for this product (e.g. three graph classes)."""


class TableError(FMCalcError):
    """The intersection table produced a result that should have been integral."""


class UnsupportedGenus(FMCalcError):
    """The requested shortcut only holds for genus-1 curves."""


class KernelError(FMCalcError):
    """A kernel operation was called outside its domain."""

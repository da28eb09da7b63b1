"""Exception types shared across the package."""


class ParamodError(Exception):
    """Base class for all errors raised by paramod."""


class InvalidAlgebraError(ParamodError, ValueError):
    """Unknown Cartan type or rank outside its valid range."""


class WeylCapExceeded(ParamodError):
    """The Weyl group is larger than the configured enumeration cap."""

    def __init__(self, name: str, order: int, cap: int):
        super().__init__(
            f"Weyl group of {name} has {order} elements, above the cap {cap}; "
            f"set PARAMOD_WEYL_CAP>={order} (or pass cap=) to allow enumeration"
        )
        self.order = order
        self.cap = cap


class ResourceLimitError(ParamodError):
    """A computation would exceed its memory/size budget."""


class LatticeError(ParamodError, ValueError):
    """Degenerate lattice, non-containment, or a parity/definiteness violation."""


class VerificationError(ParamodError):
    """An internal consistency check failed (identification, integrality, ...)."""

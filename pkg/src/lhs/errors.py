"""Exception hierarchy shared across the package."""


class LhsError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(LhsError):
    """Malformed concrete syntax; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ReservedNameError(LhsError):
    """User input used a variable name reserved for the normalizer."""


class SideViolation(LhsError):
    """A substitution value breaks the side-purity requirement."""


class MixedFormula(LhsError):
    """Operation requires a purely white or purely black formula."""


class NotClean(LhsError):
    """Operation requires a clean formula."""


class ContainsI(LhsError):
    """Operation is restricted to the I-free fragment."""


class ModalInput(LhsError):
    """Operation requires a purely propositional formula."""


class UnknownState(LhsError):
    """A state id is not declared in the ambient model."""


class ModelFormatError(LhsError):
    """Model/tile/proof file does not conform to its schema."""


class ResourceGuard(LhsError):
    """A computation was refused because its size exceeds the ceiling."""


class InvalidTiling(LhsError):
    """A periodic tiling breaks its wrap-around color constraints."""

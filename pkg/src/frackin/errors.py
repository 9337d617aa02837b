"""Exception and warning types shared across the package."""


class FrackinError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FrackinError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(FrackinError):
    """Evaluation was requested at (or within 1e-12 of) a pole."""


class ConvergenceError(FrackinError):
    """A series failed its truncation criterion within the term cap."""


class NonFiniteError(FrackinError):
    """An intermediate value left the representable floating range."""


class RangeError(FrackinError):
    """An integer selector is outside its allowed range."""


class InsufficientGrid(FrackinError):
    """A grid operation was asked for a point the grid cannot support."""


class GridTooCoarse(UserWarning):
    """Quadrature error estimate is too large for the requested tolerance."""

"""Error taxonomy shared by every tridos module.

All library errors derive from TridosError so callers (and the CLI) can
distinguish computation failures from genuine bugs. Exceptions carry their
offending location as plain attributes where one exists.
"""

from __future__ import annotations


class TridosError(Exception):
    """Base class for all tridos-specific errors."""


class NonManifold(TridosError):
    """Complex is not a 2-manifold: edge in >2 faces, pinched vertex link,
    disconnected skeleton, or a closed component of nonzero genus."""


class OrientationConflict(TridosError):
    """The same directed edge appears in two faces; face orientations cannot
    be reconciled into a global orientation."""


class DegreeExceeded(TridosError):
    """A vertex degree exceeds the triangulation's degree bound."""


class UnknownVertex(TridosError):
    """A vertex or dart reference does not exist in the triangulation."""


class EmptyEnsemble(TridosError):
    """An ensemble-level operation received no triangulations."""


class ArcMismatch(TridosError):
    """Adjacent faces induce different boundary-arc words under a
    substitution rule."""


class UnexpectedDegree(TridosError):
    """A boundary vertex degree falls outside the two-letter alphabet
    {3, 4} expected by boundary_word."""


class SchemaViolation(TridosError):
    """Decorations violate the operator schema. `darts` lists offenders."""

    def __init__(self, message: str, darts=()):
        super().__init__(message)
        self.darts = tuple(darts)


class MissingBallClass(TridosError):
    """A local rule has no row for a ball class. `code` names it."""

    def __init__(self, message: str, code=None):
        super().__init__(message)
        self.code = code


class NonpositiveWeight(TridosError):
    """A vertex weight is zero or negative where positivity is required."""


class ZeroVector(TridosError):
    """A vector argument that must be nonzero is (numerically) zero."""


class TooLarge(TridosError):
    """Problem size exceeds the dense-path limit; use the windowed path."""


class NotSelfAdjoint(TridosError):
    """An operator fails its weighted self-adjointness check."""


class ConfigError(TridosError):
    """An experiment config is invalid. `field` names the bad entry."""

    def __init__(self, message: str, field=None):
        super().__init__(message)
        self.field = field

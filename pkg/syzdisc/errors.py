"""Exceptions raised by the syzdisc builders.

The command line maps every :class:`SyzdiscError` to exit status 1.
"""

__all__ = [
    "AdmissibilityError",
    "CorpusError",
    "FramingError",
    "GeometryError",
    "SeriesError",
    "SolverError",
    "SpecMismatchError",
    "SyzdiscError",
    "UnknownVariableError",
]


class SyzdiscError(Exception):
    pass


class SeriesError(SyzdiscError):
    pass


class SpecMismatchError(SeriesError):
    """Operands carry different variable specs or truncations."""


class AdmissibilityError(SeriesError):
    """A series leaves the expansion region needed by invert, exp, log or a substitution."""


class UnknownVariableError(SeriesError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class GeometryError(SyzdiscError):
    pass


class FramingError(GeometryError):
    """The chosen frame does not give a slab function the solver can handle."""


class SolverError(SyzdiscError):
    pass


class CorpusError(SyzdiscError):
    pass

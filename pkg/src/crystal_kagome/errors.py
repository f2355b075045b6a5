"""Exception types shared by all modules.

Every exception carries a stable ``code`` (its class name) so the CLI can
echo it in machine-readable error records.
"""


class CrystalKagomeError(Exception):
    """Base class for domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class BeyondBound(CrystalKagomeError):
    """Requested size exceeds a configured enumeration or dimension bound."""


class WindowTooSmall(CrystalKagomeError):
    """A lattice window cannot hold the requested state or hexagon."""


class NotAPartitionState(CrystalKagomeError):
    """An occupation pattern is not reachable from the vacuum by box flips."""


class IllegalFlip(CrystalKagomeError):
    """Hexagon flip requested on a hexagon in the wrong class."""


class MissingWeight(CrystalKagomeError):
    """A weight table lacks one or more hexagon classes."""


class NoSolution(CrystalKagomeError):
    """The commutation relation has no nonzero solution."""


class DimensionMismatch(CrystalKagomeError):
    """Operands have incompatible shapes."""


class SingularParameters(CrystalKagomeError):
    """Parameters hit a pole or a degenerate point of a construction."""


class ConvergenceFailure(CrystalKagomeError):
    """An iterative solver did not converge."""


class NotAdjacent(CrystalKagomeError):
    """Two placed hexagons share no gluing rule."""

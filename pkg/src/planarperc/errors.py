"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`PercolationError`
so the CLI can map it to an exit code.
"""


class PercolationError(Exception):
    exit_code = 4


class PreconditionViolated(PercolationError, ValueError):
    pass


# graph construction / validation

class GraphError(PreconditionViolated):
    pass


class AsymmetricRotation(GraphError):
    def __init__(self, u, v):
        super().__init__(f"vertex {v} is in rotation({u}) but {u} is not in rotation({v})")
        self.u, self.v = u, v


class SelfLoop(GraphError):
    def __init__(self, v):
        super().__init__(f"self-loop at vertex {v}")
        self.v = v


class DuplicateNeighbor(GraphError):
    def __init__(self, v, u):
        super().__init__(f"neighbor {u} repeated in rotation({v})")
        self.v, self.u = v, u


class UnknownVertex(GraphError):
    def __init__(self, v):
        super().__init__(f"unknown vertex {v!r}")
        self.v = v


class MissingCoordinates(GraphError):
    pass


class LabelMismatch(GraphError):
    pass


class GraphFormatError(GraphError):
    exit_code = 2


class SizeOverflow(PercolationError):
    exit_code = 3


# generators

class DigitOutOfRange(PreconditionViolated):
    pass


class WordLengthMismatch(PreconditionViolated):
    pass


class DepthOutOfRange(PreconditionViolated):
    pass


# percolation engine

class BadProbability(PreconditionViolated):
    pass


class UnpairedVertex(PreconditionViolated):
    pass


class RegionTooLargeForExact(PreconditionViolated):
    pass


class EmptyGrid(PreconditionViolated):
    pass


# boundary analysis

class DisconnectedS(PreconditionViolated):
    pass


class FrontierNotInOneComponent(PreconditionViolated):
    pass


class SpecMismatch(PreconditionViolated):
    pass


class EventAbsent(PreconditionViolated):
    pass


class SeparationViolation(PercolationError, AssertionError):
    """Raised when fewer separated open clusters are found than closed arms."""


# phi functional

class VertexNotInS(PreconditionViolated):
    pass


class InteriorTooLargeForExact(PreconditionViolated):
    pass


class BadParameters(PreconditionViolated):
    pass


class EmptyFamily(PreconditionViolated):
    pass


# experiments

class ConfigParse(PercolationError, ValueError):
    exit_code = 2


class AllCensored(PercolationError, ValueError):
    pass

"""Exception hierarchy shared by all modules."""


class SFAttackError(Exception):
    """Base class for every error raised by this package."""


class GraphError(SFAttackError):
    pass


class EdgeExists(GraphError):
    pass


class EdgeMissing(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class GraphComplete(GraphError):
    pass


class NoEdges(GraphError):
    pass


class NoConnectedPairs(GraphError):
    pass


class ParseError(SFAttackError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FitError(SFAttackError):
    pass


class DegenerateSequence(FitError):
    pass


class TailTooSmall(FitError):
    pass


class AlternativeFitFailed(FitError):
    pass


class EmptySequenceSet(SFAttackError):
    pass


class ConfigInvalid(SFAttackError, ValueError):
    pass


class NotGraphical(SFAttackError):
    pass


class RetriesExhausted(SFAttackError):
    pass


class AttackError(SFAttackError):
    pass


class NoHubEdge(AttackError):
    pass


class NoMediumNonEdge(AttackError):
    pass


class NotStrongInitially(AttackError):
    pass


class MaxStepsExceeded(AttackError):
    pass


class UndefinedBaseline(SFAttackError):
    def __init__(self, metric):
        self.metric = metric
        super().__init__(f"baseline value of {metric} is zero")


class EmptyInput(SFAttackError):
    pass


class NoStrongNetworks(SFAttackError):
    pass


class ZeroEdges(SFAttackError):
    pass

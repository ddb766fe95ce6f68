"""Exception hierarchy shared by every stage of the pipeline."""


class ModeClusterError(Exception):
    """Base class for all errors raised by modeclust."""


class InvalidInput(ModeClusterError, ValueError):
    pass


class IoError(ModeClusterError, OSError):
    pass


class EmptyDataset(InvalidInput):
    pass


class DegenerateColumn(InvalidInput):
    def __init__(self, column):
        super().__init__(f"column {column!r} has zero standard deviation")
        self.column = column


class NumericalError(ModeClusterError, ArithmeticError):
    """Base for failures of the numerical routines (exit code 3 in the CLI)."""


class SingularSystem(NumericalError):
    pass


class NonConvergence(NumericalError):
    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class AllClustersInsignificant(ModeClusterError):
    pass


class EmptyCluster(InvalidInput):
    pass

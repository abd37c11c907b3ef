"""Exception hierarchy shared by every ccffs module."""


class CcffsError(Exception):
    """Base class for all library errors."""


class DimensionError(CcffsError, ValueError):
    pass


class NotInRangeError(CcffsError, ValueError):
    """Columns are not spanned by the supplied basis."""


class DegenerateInputError(CcffsError, ValueError):
    """Zero-variance or rank-deficient input to a correlation measure.

    ``block`` names the offending operand (``"X"``, ``"Y"``, ...) when known.
    """

    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class DegenerateDatasetError(CcffsError, ValueError):
    pass


class NoInformativeCandidateError(CcffsError):
    """Every remaining candidate lies in the span of the selected features."""


class InternalConsistencyError(CcffsError, ArithmeticError):
    pass


class DataError(CcffsError, ValueError):
    """Malformed input file or encoding problem."""


class EngineDisagreementError(CcffsError):
    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration

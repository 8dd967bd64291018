"""Exception types raised by the library."""


class TitlesimError(Exception):
    """Domain error: bad input data or an unsatisfiable operation."""


class InputFormatError(TitlesimError):
    """A data file violates its expected format; the message names the offending line."""


class UnrepresentableError(TitlesimError):
    """A document cannot be rendered under the requested strategy.

    Raised for all-OOV token lists, empty documents, missing external
    document vectors, and zero-weight sparse vectors. The evaluation
    harness treats queries failing with this error as skipped rather
    than wrong; everything else escalates.
    """

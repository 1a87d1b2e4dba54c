"""Exception types shared across the package.

Everything raised on purpose derives from FrobtorError so the CLI can catch
one base class and map it to an exit code.
"""


class FrobtorError(Exception):
    """Base class for all deliberate errors raised by this package."""


class RingSyntaxError(FrobtorError):
    """A ring or module declaration failed to parse.

    Carries 1-based line/column of the offending token when known.
    """

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class PresentationError(FrobtorError):
    """The parsed data does not define a legal local algebra or module.

    Examples: non-prime characteristic, duplicate variable names, a relation
    with a nonzero constant term (the quotient would not be local), or a
    quotient that collapses to the zero ring.
    """


class NotArtinian(FrobtorError):
    """An operation that needs a finite-length ring was given an infinite one."""


class CapTooSmall(FrobtorError):
    """The degree cap is too small for the requested computation to be trusted."""


class CapUnstable(FrobtorError):
    """Recomputation at a higher degree cap changed the answer.

    Raised when a value that should have stabilised (syzygies, homology
    dimensions) differs between the working cap and the verification cap.
    """


class ContainmentViolation(FrobtorError):
    """A claimed subspace is not actually contained in the ambient space.

    In practice: the image of one differential is not inside the kernel of
    the previous one, i.e. d.d != 0 for the complex being inspected.
    """


class PositiveDepth(FrobtorError):
    """A depth-zero-only routine was handed a ring with a regular element."""


class NotRegular(FrobtorError):
    """A claimed regular sequence fails to be regular on the ring."""


class NotApplicable(FrobtorError):
    """The statement under test has nothing to say about this input.

    Example: asking for the eventual length ratio of a module whose
    resolution terminates - all high Tor vanish and no ratio exists.
    """

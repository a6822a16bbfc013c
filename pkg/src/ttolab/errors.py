"""Exception hierarchy with stable process exit codes.

Exit code classes: 2 input/parse, 3 precondition, 4 verification failure,
5 internal.  The CLI maps any raised subclass to its class code.
"""


class TTOLabError(Exception):
    exit_code = 5


class ParseFailure(TTOLabError):
    """Input text could not be parsed or lowered."""

    exit_code = 2

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class PreconditionError(TTOLabError):
    """A documented operation precondition does not hold for the input."""

    exit_code = 3


class VerificationError(TTOLabError):
    """A computed result failed its own certificate check."""

    exit_code = 4


class InternalError(TTOLabError):
    exit_code = 5


# -- parse / lowering ------------------------------------------------------

class ExpressionSyntaxError(ParseFailure):
    pass


class LoweringError(ParseFailure):
    pass


# -- preconditions ---------------------------------------------------------

class ZeroDenominator(PreconditionError):
    pass


class ZeroPolynomial(PreconditionError):
    pass


class PoleOnCircle(PreconditionError):
    pass


class ZeroOnCircle(PreconditionError):
    pass


class NotInH2(PreconditionError):
    pass


class ZeroFunction(PreconditionError):
    pass


class NotPositive(PreconditionError):
    pass


class NotConjugateSymmetric(PreconditionError):
    pass


class DegreeZero(PreconditionError):
    pass


class NotInvariant(PreconditionError):
    pass


class EmptyKernel(PreconditionError):
    pass


class NotUnimodular(PreconditionError):
    pass


class BandsNotOrthogonal(PreconditionError):
    pass


class NotInOrthocomplement(PreconditionError):
    pass


class SymbolNotInvertible(PreconditionError):
    pass


class DefectNonzero(PreconditionError):
    pass


class DefectMismatch(PreconditionError):
    pass


class NotNearlyInvariant(PreconditionError):
    pass


class IndexOutOfRange(PreconditionError):
    pass


class RankDeficient(PreconditionError):
    pass


# -- verification-time diagnostics ----------------------------------------

class VerificationFailed(VerificationError):
    pass


class WDimensionUnexpected(VerificationError):
    pass


class DivisionNotInH2(VerificationError):
    pass


class QuotientLeavesH2(VerificationError):
    pass


class DimensionOutOfRange(VerificationError):
    pass


# -- internal --------------------------------------------------------------

class NonConvergence(InternalError):
    pass

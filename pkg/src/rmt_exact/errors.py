"""Exception hierarchy.

Every error carries a short machine-readable ``code`` used by the CLI
(``ERROR:<code>:<message>`` on stderr). Errors that signal a broken
mathematical assertion (as opposed to bad user input) set
``internal = True`` so the CLI can exit with status 2.
"""


class RMTError(Exception):
    code = "RMTError"
    internal = False


class ValidationError(RMTError, ValueError):
    code = "Validation"


class BasisError(RMTError, ArithmeticError):
    """A symbolic product left the supported constant basis."""

    code = "BasisError"
    internal = True


class NotInvertible(RMTError, ArithmeticError):
    code = "NotInvertible"


class UnsupportedTerm(RMTError):
    code = "UnsupportedTerm"
    internal = True


class NonIntegrable(RMTError):
    code = "NonIntegrable"


class TemplateViolation(RMTError):
    code = "TemplateViolation"
    internal = True


class TooLarge(RMTError):
    code = "TooLarge"


class DivisionByZero(RMTError, ZeroDivisionError):
    code = "DivisionByZero"


class UnsupportedInversion(RMTError):
    code = "UnsupportedInversion"
    internal = True


class NonpositiveExponent(RMTError):
    code = "NonpositiveExponent"
    internal = True


class DomainError(RMTError, ValueError):
    code = "DomainError"


class GammaResidue(RMTError):
    code = "GammaResidue"
    internal = True


class PiResidue(RMTError):
    code = "PiResidue"
    internal = True


class NotBoundary(RMTError):
    code = "NotBoundary"


class ZeroDivisor(RMTError, ZeroDivisionError):
    code = "ZeroDivisor"


class OutOfRange(RMTError):
    code = "OutOfRange"


class OddTruncation(RMTError):
    code = "OddTruncation"


class Divergent(RMTError):
    code = "Divergent"


class QuadratureFailure(RMTError):
    code = "QuadratureFailure"
    internal = True


class UnsupportedFamily(RMTError):
    code = "UnsupportedFamily"


class NotHermitian(RMTError, ValueError):
    code = "NotHermitian"


class IllConditioned(RMTError):
    code = "IllConditioned"

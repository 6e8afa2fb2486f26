"""Exception hierarchy shared by every qdet module.

Each class carries a ``code`` string so reports and the CLI can name the
failure without depending on the Python class name.
"""


class QDetError(Exception):
    code = "ERROR"


class NonExactDivision(QDetError, ArithmeticError):
    code = "NON_EXACT_DIVISION"


class ZeroPoint(QDetError, ZeroDivisionError):
    code = "ZERO_POINT"


class BadModulus(QDetError, ValueError):
    code = "BAD_MODULUS"


class NotCoprime(QDetError, ValueError):
    code = "NOT_COPRIME"


class CoprimeInput(QDetError, ValueError):
    code = "COPRIME_INPUT"


class BadSpec(QDetError, ValueError):
    code = "BAD_SPEC"


class TooLarge(QDetError, ValueError):
    code = "TOO_LARGE"


class InternalError(QDetError, RuntimeError):
    code = "INTERNAL_ERROR"


class DegreeViolation(QDetError, ArithmeticError):
    code = "DEGREE_VIOLATION"


class BadQ(QDetError, ValueError):
    code = "BAD_Q"

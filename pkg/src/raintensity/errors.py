"""Exception hierarchy.

Validation problems (bad parameters, malformed input) derive from
``ValueError``; numerical failures (quantities undefined at the requested
point, quadrature or root-finding trouble) derive from ``ArithmeticError``.
The CLI maps the two groups to exit codes 2 and 3.
"""


class RaintensityError(Exception):
    code = "error"


class ValidationError(RaintensityError, ValueError):
    code = "validation_error"


class DomainError(RaintensityError, ArithmeticError):
    """A quantity is undefined (or not representable) at the requested point."""

    code = "domain_error"


class ConditionError(DomainError):
    """An admissibility condition of a characterization is violated."""

    code = "condition_violation"


class QuadratureError(DomainError):
    code = "quadrature_failure"


class RootFindingError(DomainError):
    code = "root_finding_failure"

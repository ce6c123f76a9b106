"""Domain errors.  The CLI maps every subclass of :class:`DomainError` to exit code 1."""


class DomainError(ValueError):
    """An input violates a mathematical precondition of the requested operation."""


class NotSymplectic(DomainError):
    pass


class NotLagrangian(DomainError):
    pass


class ConstraintViolation(DomainError):
    """Computed isotropic-pair invariants violate their admissible ranges."""


class ExceptionalInput(DomainError):
    """The relation lies in the exceptional set ``H`` (``kappa >= 1``)."""


class ExceptionalPoint(ExceptionalInput):
    """A path evaluated to a relation in ``H``."""


class DegenerateResult(DomainError):
    """A computed relation lost or gained rank beyond the tolerance."""


class IllConditioned(DomainError):
    pass


class NonSemisimpleElliptic(DomainError):
    """An elliptic eigenvalue has a nontrivial Jordan block."""


class Undersampled(DomainError):
    """Adjacent samples of a path differ in angle by at least pi/2."""


class RefinementExhausted(DomainError):
    """Adaptive bisection hit its depth limit."""

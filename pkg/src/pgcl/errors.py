"""Exception types shared across the package."""


class PgclError(Exception):
    """Base class for all errors raised by this package."""


class SizeExceeded(PgclError):
    """A construction or computation exceeds a configured size bound."""


class NotAGroup(PgclError):
    """A multiplication table fails the group axioms."""


class NotNormal(PgclError):
    """Quotient requested by a non-normal subgroup."""


class NotAbelian(PgclError):
    """An operation defined only for abelian groups got a non-abelian one."""


class NotPGroup(PgclError):
    """An operation defined only for p-groups got something else."""


class WrongOrder(PgclError):
    """A subgroup argument has the wrong order for the operation."""


class IdentNotCentral(PgclError):
    """Central-product identification touches non-central elements."""


class IdentNotIsomorphism(PgclError):
    """Central-product identification does not extend to an isomorphism."""


class ComplexNotExact(PgclError):
    """Composite of consecutive boundary maps is nonzero."""


class DecompositionFailed(PgclError):
    """Symplectic-lift decomposition failed validation."""


class NotASubgroup(PgclError):
    """A computed element set unexpectedly fails the subgroup axioms."""


class PreconditionViolated(PgclError):
    """An operation's stated precondition does not hold."""


class ParseError(PgclError):
    """Group-expression text is not grammatical."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SemanticError(PgclError):
    """Grammatical expression with an unbuildable meaning."""


class GoldenMismatch(PgclError):
    """Golden data file is corrupt or structurally invalid."""

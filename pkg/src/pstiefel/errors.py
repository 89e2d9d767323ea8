class DomainError(ValueError):
    """Input outside the domain of an operation."""


class UnsupportedIdeal(DomainError):
    """Ideal is not built from (scalar x monomial) terms over Z_(p)."""


class UnsupportedRegime(DomainError):
    """Parameters lie in a regime the builders deliberately do not cover."""

"""Exception hierarchy shared across the package."""


class CohcfgError(Exception):
    """Base class for all package errors."""


class ParseError(CohcfgError):
    """A text input could not be parsed."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class ValidationError(CohcfgError):
    """A parsed object violates an invariant of its type."""

    def __init__(self, invariant: str, detail: str = ""):
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)
        self.invariant = invariant


class DegreeMismatch(CohcfgError):
    """Operands are defined on point sets of different sizes."""


class SizeMismatch(CohcfgError):
    """Relation lists have different lengths."""


class DomainNotInvariant(CohcfgError):
    """A generator maps a point of the requested domain outside it."""


class GroupTooLarge(CohcfgError):
    """Group order exceeds the configured enumeration bound."""


class NotCoherent(CohcfgError):
    """A color matrix violates the intersection-number axiom.

    Carries a witness: a triple of colors (r, s, t) and two pairs in t
    whose (r, s) counts differ.
    """

    def __init__(self, witness=None, detail: str = "not a coherent configuration"):
        super().__init__(detail if witness is None else f"{detail}; witness {witness}")
        self.witness = witness


class DiagonalMixed(CohcfgError):
    """A color used on the diagonal also appears off the diagonal."""


class ColorOutOfRange(CohcfgError):
    """A color id is not in {0..k-1}."""


class NotFiberUnion(CohcfgError):
    """Restriction target is neither a fiber union nor an equivalence class."""


class NotEquivalence(CohcfgError):
    """A color union is not an equivalence relation with full support."""


class NotHomogeneous(CohcfgError):
    """Operation requires a homogeneous configuration (a scheme)."""


class NotAntisymmetric(CohcfgError):
    """Operation requires an antisymmetric configuration."""


class NotATournament(CohcfgError):
    """Arc data does not describe a tournament."""


class NotSchurian(CohcfgError):
    """Isomorphism listing was requested for a non-schurian input."""


class InconsistentPsi(CohcfgError):
    """The family of color bijections between parts is inconsistent."""


class PreconditionViolated(CohcfgError):
    """A constructive builder was called outside its hypotheses."""

    def __init__(self, hypothesis: str):
        super().__init__(f"hypothesis violated: {hypothesis}")
        self.hypothesis = hypothesis


class BudgetExceeded(CohcfgError):
    """A search hit its budget; carries the best known upper bound."""

    def __init__(self, budget, upper_bound=None):
        super().__init__(
            f"search budget {budget} exceeded"
            + ("" if upper_bound is None else f"; best known upper bound {upper_bound}")
        )
        self.budget = budget
        self.upper_bound = upper_bound


class ChainMismatch(CohcfgError):
    """Majorant levels do not match the equivalence chain."""


class InvalidAlgebraicIso(CohcfgError):
    """The supplied color bijection is not an algebraic isomorphism."""

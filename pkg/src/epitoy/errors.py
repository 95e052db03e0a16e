"""Exception types shared across the package.

Every domain error derives from EpitoyError so callers (CLI, HTTP service)
can map them to stable error codes in one place.
"""


class EpitoyError(Exception):
    """Base class for all domain errors."""

    code = "domain-error"


class MixedModulus(EpitoyError):
    """Vectors with different moduli or ambient lengths were combined."""

    code = "mixed-modulus"


class DimensionMismatch(EpitoyError):
    """Operands live in different phase spaces."""

    code = "dimension-mismatch"


class TooLarge(EpitoyError):
    """An enumeration or dense-matrix build would exceed its size guard."""

    code = "too-large"


class ZeroObservable(EpitoyError):
    """The all-zero coefficient vector is not a valid observable."""

    code = "zero-observable"


class NotCoarse(EpitoyError):
    """A coarse-graining operation was applied to a fine observable."""

    code = "not-coarse"


class CoarseGenerator(EpitoyError):
    """A fine-only code path received a coarse generator."""

    code = "coarse-generator"


class NotCommuting(EpitoyError):
    """The commuting-case update was applied to a non-commuting measurement."""

    code = "not-commuting"


class InvalidOutcome(EpitoyError):
    """The requested outcome is not in the observable's spectrum."""

    code = "invalid-outcome"


class ImpossibleOutcome(EpitoyError):
    """The outcome has probability zero for the given state."""

    code = "impossible-outcome"


class EvenDimension(EpitoyError):
    """Stabilizer/Wigner machinery is only defined for odd d."""

    code = "even-dimension"


class Inconsistent(EpitoyError):
    """A stabilizer group would contain a nontrivial phase of the identity."""

    code = "inconsistent-group"


class ObservableSyntaxError(EpitoyError):
    """Parse error in an observable expression; carries the byte offset."""

    code = "syntax-error"

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class IndexOutOfRange(EpitoyError):
    """A system index in an observable expression exceeds n."""

    code = "index-out-of-range"

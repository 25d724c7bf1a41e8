"""Exception types shared across the package."""


class TranspecError(Exception):
    """Base class for all package errors."""


class ValidationError(TranspecError, ValueError):
    """Bad input: parameter out of range, malformed config, failed precondition."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of an operation."""


class ResonanceError(ValidationError):
    """A wavenumber too close to a resonance for the expansion to be valid."""

    def __init__(self, k: float, n: int, k_resonant: float):
        self.k = k
        self.n = n
        self.k_resonant = k_resonant
        super().__init__(
            f"wavenumber k={k:.12g} is within tolerance of the n={n} resonance "
            f"at k={k_resonant:.12g}; the wave expansion is not valid there"
        )


class NumericalError(TranspecError, RuntimeError):
    """A numerical routine failed to converge or produced unusable output."""


class AmplitudeValidityWarning(UserWarning):
    """The requested amplitude is large enough that the truncated expansion degrades."""

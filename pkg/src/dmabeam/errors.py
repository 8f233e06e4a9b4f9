"""Exception types shared across the package."""


class DmaError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DmaError, ValueError):
    """An argument lies outside the physically meaningful domain."""


class SingularityError(DmaError, ValueError):
    """A requested weight angle sits on the tangent singularity of the
    resonance map, where no finite resonant frequency exists."""


class InfeasibleElementError(DmaError, ValueError):
    """The closed-form resonance for some element would be imaginary.

    Carries the zero-based element index in ``index`` when known.
    """

    def __init__(self, index=None, message: str = ""):
        self.index = index
        if not message:
            who = f"element {index}" if index is not None else "element"
            message = f"{who}: resonance outside the reachable set"
        super().__init__(message)


class NoCrossoverError(DmaError, ValueError):
    """No angle exists where the optimal operating frequency equals the
    requested fixed frequency."""


class EnumerationLimitError(DmaError, ValueError):
    """Exhaustive enumeration was requested for an array too large to search."""


class CoverageInfeasibleError(DmaError, ValueError):
    """The codebook recursion cannot cover the requested angular range."""


class InvalidEstimateError(DmaError, ValueError):
    """A training measurement produced an angle estimate outside [-90, 90] deg
    (the pilot grid is misconfigured for the design)."""


class ScenarioError(DmaError, ValueError):
    """A scenario file is missing keys, has bad values, or violates a module
    precondition."""

"""Exception types shared across the toolkit."""


class TubecheckError(Exception):
    """Base class for all toolkit errors."""


class DegenerateInput(TubecheckError):
    """Input points are affinely dependent (no full-dimensional hull)."""


class OutsideDomain(TubecheckError):
    """A point required to be a domain member is not one."""


class InvalidPoint(TubecheckError):
    """A covering-space point violates its coordinate constraints."""


class StencilOutOfDomain(TubecheckError):
    """A finite-difference stencil point left the function's domain."""


class BadRho(TubecheckError):
    """The requested floor radius does not fit inside the imaginary part."""


class ConfigConflict(TubecheckError):
    """A scenario asked for a check outside its validity regime."""


class BadEpsilon(TubecheckError):
    """Blow-up probe offset too large for the configured shell."""


class BranchPrecondition(TubecheckError):
    """Correction-factor argument left the principal-branch region."""


class StepTooLarge(TubecheckError):
    """Requested recentering step exceeds the safe fraction of the radius."""


class AllZero(TubecheckError):
    """Radius estimation is undefined for the identically-zero germ."""


class ContinuationFailure(TubecheckError):
    """Path continuation stalled (radius collapse or step budget)."""


class ConfigError(TubecheckError):
    """Scenario configuration is malformed."""

"""Exception types shared across the toolkit.

Sampling-related errors signal "resample / retry with a fresh stream",
not programmer mistakes; callers in the suites catch them and re-draw.
"""


class ThetaLabError(Exception):
    """Base class for all toolkit errors."""


class DivisionByZero(ThetaLabError, ZeroDivisionError):
    pass


class NoRoot(ThetaLabError):
    """Square root requested of a non-residue, or series sqrt at a zero."""


class InternalRandomnessExhausted(ThetaLabError):
    """Deterministic retry budget of a randomized subroutine ran out."""


class SamplingExhausted(ThetaLabError):
    """A rejection sampler hit its attempt budget."""


class UnsupportedSupport(ThetaLabError):
    """Divisor support outside the generic regime (e.g. Weierstrass point)."""


class IndeterminateAt(ThetaLabError):
    """A rational map was evaluated inside its base locus."""


class DegenerateHyperplane(ThetaLabError):
    pass


class DegeneratePair(ThetaLabError):
    """Point and direction of a line restriction are proportional."""


class RankDeficient(ThetaLabError):
    pass


class LineInSpan(ThetaLabError):
    """A hyperelliptic secant line does not meet the marked span in a point."""


class DegenerateConfiguration(ThetaLabError):
    """Points are not in linearly general position."""


class Unstabilized(ThetaLabError):
    """Kernel dimension still moving after the sampling budget."""


class InclusionViolated(ThetaLabError):
    """A nested linear system failed its inclusion certification."""


class FitAmbiguous(ThetaLabError):
    """Relation fitting found a kernel of unexpected dimension."""


class NoSplitSeed(ThetaLabError):
    """No seed produced fully rational line configurations."""


class NodeCountMismatch(ThetaLabError):
    pass


class UnsupportedCombination(ThetaLabError):
    """Suite/genus combination outside the support matrix."""

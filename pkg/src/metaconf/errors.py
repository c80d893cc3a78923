"""Exception hierarchy shared by all modules."""


class MetaconfError(Exception):
    """Base class for every error raised by this package."""


class SingularInput(MetaconfError, ValueError):
    """Evaluation point lies on a singular locus of a kernel."""


class SingularSeparation(SingularInput):
    pass


class SingularTime(SingularInput):
    pass


class SingularSamplePoint(SingularInput):
    pass


class SelectionRuleViolation(MetaconfError):
    """Kronecker selection rule fails; the correlator vanishes identically."""


class UnsupportedIndex(MetaconfError, ValueError):
    pass


class StepTooLarge(MetaconfError):
    """Richardson extrapolation did not see the residual shrink with h."""


class NonPositiveImaginaryPart(MetaconfError, ValueError):
    pass


class TailNotNegligible(MetaconfError):
    pass


class BoundaryDecayInsufficient(MetaconfError, ValueError):
    pass


class NuOutOfRange(MetaconfError, ValueError):
    pass


class SectorUndefined(MetaconfError, ValueError):
    """The logarithmic dual variable does not exist (argument <= 0)."""


class GridTooCoarse(MetaconfError, ValueError):
    pass

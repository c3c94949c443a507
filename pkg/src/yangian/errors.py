"""Exception types raised by the engine."""


class YangianError(Exception):
    """Base class for all engine errors."""


class NonAffineResidual(YangianError):
    """A substitution left more than one free parameter where one was expected."""


class NonGenericResidual(YangianError):
    """A Gamma argument vanishes identically on the chosen parameter stratum."""


class SiteCollision(YangianError):
    """Two monodromy factors share a variable."""


class CentralityFailure(YangianError):
    """The two orderings of the quantum determinant disagree."""


class NotHighestWeight(YangianError):
    def __init__(self, a: int, b: int, detail: str):
        super().__init__(f"entry ({a},{b}) does not annihilate the vector: {detail}")
        self.a, self.b, self.detail = a, b, detail


class UnsupportedTarget(YangianError):
    """A shift-operator action outside the single-binomial / polynomial calculus."""


class DegenerateArgument(YangianError):
    """Beta weight identically zero: the integral has a pole in its normalization."""


class ParameterMismatch(YangianError):
    """Parameter arrays are not related by a permutation."""


class NotBetaAdmissible(YangianError):
    """Zero or several factors are active under a shift step."""


class NonUnitResidual(YangianError):
    """A sequence expected to map 1 to 1 left a nontrivial factor."""


class RankTooSmall(YangianError):
    """Rank below 2."""


class NonTriangular(YangianError):
    """Constraint system did not have the expected triangular shape."""

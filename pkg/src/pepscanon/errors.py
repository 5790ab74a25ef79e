"""Exception hierarchy shared by every module."""


class TensorNetworkError(Exception):
    """Base class for all library errors."""


class AxisSpecError(TensorNetworkError, ValueError):
    pass


class NotAKroneckerProduct(TensorNetworkError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DeskScaleExceeded(TensorNetworkError):
    def __init__(self, needed, cap):
        super().__init__(f"requires {needed} amplitudes, cap is {cap}")
        self.needed = needed
        self.cap = cap


class NotADensityMatrix(TensorNetworkError, ValueError):
    pass


class NotFoundBelowCap(TensorNetworkError):
    """No injective length found up to the cap; ``best_rank`` is the largest rank seen."""

    def __init__(self, cap, best_rank, target):
        super().__init__(f"no injective region up to length {cap} (best rank {best_rank}/{target})")
        self.cap = cap
        self.best_rank = best_rank
        self.target = target


class ZeroState(TensorNetworkError):
    pass


class NotSameState(TensorNetworkError):
    pass


class NonUniqueGauge(TensorNetworkError):
    def __init__(self, intertwiner_dim):
        super().__init__(f"NonUniqueGauge (intertwiner dim {intertwiner_dim})")
        self.intertwiner_dim = intertwiner_dim


class IllConditionedGauge(TensorNetworkError):
    def __init__(self, condition):
        super().__init__(f"gauge matrix is numerically singular (condition {condition:.3g})")
        self.condition = condition


class NotProductPreserving(TensorNetworkError):
    pass


class RankDeficient(TensorNetworkError):
    pass


class NotFactorizable(TensorNetworkError):
    pass


class NotASymmetry(TensorNetworkError):
    pass


class IncompatibleBonds(TensorNetworkError, ValueError):
    pass

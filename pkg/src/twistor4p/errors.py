"""Exception types shared across the package."""


class Twistor4pError(Exception):
    pass


class SingularSystemError(Twistor4pError):
    """A linear solve hit a (near) singular matrix."""

    def __init__(self, message: str, det: complex):
        super().__init__(f"{message} (det={det!r})")
        self.det = det


class PathSingularityError(Twistor4pError):
    pass


class DepthCapError(Twistor4pError):
    pass


class OrderInconsistencyError(Twistor4pError):
    """Raised when the order-n linear equation leaves a residual."""

    def __init__(self, message: str, order: int, residual: float):
        super().__init__(f"{message} (order={order}, residual={residual:.3e})")
        self.order = order
        self.residual = residual


class DegenerateError(Twistor4pError):
    pass


class StepSizeError(Twistor4pError):
    pass

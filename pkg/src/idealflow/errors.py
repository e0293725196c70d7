"""Exception types raised by the library."""


class IdealFlowError(Exception):
    """Base class for all library errors."""


class ComplexError(IdealFlowError):
    """A cellular decomposition failed validation."""


class EdgeUseCountError(ComplexError):
    """An edge borders the wrong number of face slots (must be exactly two)."""

    def __init__(self, edge: int, count: int):
        self.edge = edge
        self.count = count
        super().__init__(
            f"edge {edge} appears {count} time(s) across face boundaries, expected 2"
        )


class DisconnectedComplexError(ComplexError):
    """The underlying surface is not connected."""


class NonOrientableError(ComplexError):
    """No consistent choice of face orientations exists."""


class WeightRangeError(ComplexError):
    """An edge weight lies outside the open interval (0, pi)."""

    def __init__(self, edge: int, value: float):
        self.edge = edge
        self.value = value
        super().__init__(f"edge {edge} has weight {value!r}, required to lie in (0, pi)")


class StarConditionError(ComplexError):
    """Some face violates the factor-through-a-common-point angle condition."""

    def __init__(self, faces: list[int], residuals: list[float]):
        self.faces = faces
        self.residuals = residuals
        detail = ", ".join(f"{f} (residual {r:.3e})" for f, r in zip(faces, residuals))
        super().__init__(f"star condition fails on face(s): {detail}")


class GeometryMismatchError(IdealFlowError):
    """An operation was invoked with the wrong background geometry."""


class DomainError(IdealFlowError):
    """Radii or coordinates left the valid domain."""


class StepUnderflowError(IdealFlowError):
    """Step-size halving hit the floor without producing an acceptable step."""

    def __init__(self, dt: float, floor: float):
        self.dt = dt
        self.floor = floor
        super().__init__(f"step size {dt:.3e} fell below floor {floor:.3e}")


class InsufficientSamplesError(IdealFlowError):
    """Too few trajectory samples for a meaningful decay-rate fit."""


class NonConvergenceError(IdealFlowError):
    """A flow run exhausted its budget before reaching the target curvature."""


class QuadratureError(IdealFlowError):
    """Line-integral quadrature failed to converge under interval halving."""


class ConvergenceWarning(UserWarning):
    """A solver stopped before reaching its target tolerance."""

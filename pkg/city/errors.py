"""
Exception hierarchy for city generation and scenario handling.
"""


class CityError(Exception):
    """Base exception for city environment errors."""
    pass


class ScenarioValidationError(CityError):
    """Raised when a scenario document or ScenarioSpec violates its invariants."""

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class DensityUnreachableError(CityError):
    """Target footprint coverage not reached within the placement attempt budget."""

    def __init__(self, target: float, reached: float, attempts: int):
        self.target = target
        self.reached = reached
        self.attempts = attempts
        super().__init__(
            f"Obstacle density {target:.3f} unreachable: coverage {reached:.3f} "
            f"after {attempts} placement attempts"
        )


class EndpointBlockedError(CityError):
    """Start or goal lies outside the map or inside an inflated obstacle."""

    def __init__(self, which: str, point):
        self.which = which
        self.point = point
        super().__init__(f"{which} point {point} is not free")


class GridBudgetError(CityError):
    """Voxelization would exceed the configured cell budget."""

    def __init__(self, cells: int, budget: int):
        self.cells = cells
        self.budget = budget
        super().__init__(f"Occupancy grid of {cells} cells exceeds budget of {budget}")

"""Exception types shared across the solver."""


class ShockLabError(Exception):
    """Base class for all solver errors."""


class MeshError(ShockLabError):
    """Invalid mesh input or failed mesh construction."""


class PositivityError(ShockLabError):
    """Non-physical state (density or pressure <= 0)."""

    def __init__(self, message, volume_index=None):
        if volume_index is not None:
            message = f"{message} (control volume {volume_index})"
        super().__init__(message)
        self.volume_index = volume_index


class VacuumError(ShockLabError):
    """Riemann problem generates vacuum; no star state exists."""


class SchemeError(ShockLabError):
    """Failure inside a flux scheme (e.g. invalid intermediate state)."""


class ConfigError(ShockLabError):
    """Invalid or inconsistent case configuration."""


class DivergenceError(ShockLabError):
    """Time marching failed after exhausting all CFL reductions."""

    def __init__(self, message, iteration=None, history=None):
        super().__init__(message)
        self.iteration = iteration
        self.history = history

"""Exception hierarchy for solver, geometry and configuration failures."""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class NotOnBoundary(SimulationError):
    """Point is farther from the level set than the boundary tolerance."""


class NotUniformlyConvex(SimulationError):
    """Sampled Hessian of the level set has a non-positive eigenvalue."""


class NoConvergence(SimulationError):
    """An iterative routine exhausted its step budget."""


class QuadratureFailure(SimulationError):
    """Adaptive quadrature did not converge within its refinement budget."""


class IncompatibleNeumannData(SimulationError):
    """Boundary flux data violates the integral compatibility identity."""


class NeumannConditionViolated(SimulationError):
    """Neumann data fails the sign or total-flux admissibility condition."""


class SolverDivergence(SimulationError):
    """Nonlinear solver failed to reach the residual tolerance."""

    def __init__(self, message, step=None, energy=None, residual=None):
        super().__init__(message)
        self.step = step
        self.energy = energy
        self.residual = residual


class GrazingStall(SimulationError):
    """Kinetic distance dropped below the grazing cutoff; dynamics degenerate."""


class StepLimitExceeded(SimulationError):
    """Trajectory integration exceeded the configured step budget."""


class EmptySupport(SimulationError):
    """Initial profile vanishes on the whole declared support."""


class FlatnessViolated(SimulationError):
    """Sampled profile is not constant below the declared kinetic-distance level."""


class ConfigInvalid(SimulationError):
    """Run configuration failed strict validation."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key

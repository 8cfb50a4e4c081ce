"""
Jacobian smoothing method

Each iteration solves with the Jacobian of the smoothed function
G(., tau_k) against the non-smooth residual, then shrinks tau:
tau_{k+1} = max(beta * tau_k, tau_floor). tau restarts from its initial
value at every time step.
"""
from typing import Optional, Tuple

from assembly.flow import FlowModel
from assembly.state import StateVector
from config.schemas import GmresConfig, NewtonConfig, PreconditionerConfig
from ncp.c_functions import CFunction, CFunctionKind, make_c_function
from solvers.base_solver import NewtonReport, NonlinearSolver


def next_tau(tau: float, reduction: float, floor: float) -> float:
    return max(reduction * tau, floor)


class JacobianSmoothingSolver(NonlinearSolver):
    """Jacobian smoothing with the smoothed Fischer-Burmeister (or smoothed min) function"""

    allowed_methods = (CFunctionKind.SMOOTH_FISCHER_BURMEISTER, CFunctionKind.SMOOTH_MIN)

    def __init__(
        self,
        config: Optional[NewtonConfig] = None,
        gmres_config: Optional[GmresConfig] = None,
        preconditioner_config: Optional[PreconditionerConfig] = None
    ):
        super().__init__("Jacobian smoothing", config, gmres_config, preconditioner_config)

    def initial_tau(self) -> float:
        return self.config.initial_tau

    def next_tau(self, tau: float) -> float:
        return next_tau(tau, self.config.tau_reduction, self.config.tau_floor)

    def jacobian_function(self, tau: float) -> CFunction:
        return make_c_function(self.config.method, tau)

    def get_info(self):
        info = super().get_info()
        info.update({
            'initial_tau': self.config.initial_tau,
            'tau_reduction': self.config.tau_reduction,
            'tau_floor': self.config.tau_floor,
        })
        return info


def solve_step_smoothing(
    model: FlowModel,
    state_old: StateVector,
    dt: float,
    config: NewtonConfig,
    gmres_config: Optional[GmresConfig] = None,
    preconditioner_config: Optional[PreconditionerConfig] = None
) -> Tuple[StateVector, NewtonReport]:
    solver = JacobianSmoothingSolver(config, gmres_config, preconditioner_config)
    return solver.solve_step(model, state_old, dt)

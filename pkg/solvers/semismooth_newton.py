"""
Semi-smooth Newton method
Constraint rows come from an element of the B-subdifferential: the active
set rule for min, the subgradient rule for Fischer-Burmeister.
"""
from typing import Optional, Tuple

from assembly.flow import FlowModel
from assembly.state import StateVector
from config.schemas import GmresConfig, NewtonConfig, PreconditionerConfig
from ncp.c_functions import CFunction, CFunctionKind, make_c_function
from solvers.base_solver import NewtonReport, NonlinearSolver


class SemismoothNewtonSolver(NonlinearSolver):
    """Semi-smooth Newton with the min or Fischer-Burmeister function"""

    allowed_methods = (CFunctionKind.MIN, CFunctionKind.FISCHER_BURMEISTER)

    def __init__(
        self,
        config: Optional[NewtonConfig] = None,
        gmres_config: Optional[GmresConfig] = None,
        preconditioner_config: Optional[PreconditionerConfig] = None
    ):
        super().__init__("Semi-smooth Newton", config, gmres_config, preconditioner_config)
        self._c_function = make_c_function(self.config.method)

    def initial_tau(self) -> float:
        return 0.0

    def next_tau(self, tau: float) -> float:
        return 0.0

    def jacobian_function(self, tau: float) -> CFunction:
        return self._c_function


def solve_step_semismooth(
    model: FlowModel,
    state_old: StateVector,
    dt: float,
    config: NewtonConfig,
    gmres_config: Optional[GmresConfig] = None,
    preconditioner_config: Optional[PreconditionerConfig] = None
) -> Tuple[StateVector, NewtonReport]:
    solver = SemismoothNewtonSolver(config, gmres_config, preconditioner_config)
    return solver.solve_step(model, state_old, dt)

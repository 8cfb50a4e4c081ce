"""
Base Nonlinear Solver
Newton-type solvers for one backward Euler step inherit from this class
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from assembly.flow import FlowModel
from assembly.state import StateVector
from assembly.system import GlobalSystem, assemble_global
from config.schemas import GmresConfig, NewtonConfig, PreconditionerConfig
from linalg.gmres import gmres_solve
from linalg.preconditioner import BlockPreconditioner, PreconditionerError
from linalg.sparse import export_matrix
from ncp.c_functions import CFunction, CFunctionKind
from ncp.constraints import complementarity_violation, constraint_arguments

logger = logging.getLogger(__name__)


@dataclass
class NewtonReport:
    """Telemetry of one nonlinear solve"""
    converged: bool = False
    iterations: int = 0
    residual_history: List[float] = field(default_factory=list)
    linear_iterations: List[int] = field(default_factory=list)
    complementarity_violation: float = float('nan')
    tau_history: List[float] = field(default_factory=list)
    failure_reason: Optional[str] = None

    @property
    def total_linear_iterations(self) -> int:
        return int(sum(self.linear_iterations))

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float('nan')


def residual_norm(H: np.ndarray, theta: np.ndarray, scale: Optional[np.ndarray] = None) -> float:
    """
    Euclidean norm of the stacked residual F = (H; Theta)

    Args:
        H: Mass balance residual
        theta: Constraint residual
        scale: Optional per-row factors (see assembly.system.residual_scaling)
    """
    stacked = np.concatenate([np.ravel(H), np.ravel(theta)])
    if scale is not None:
        stacked = stacked * scale
    return float(np.linalg.norm(stacked))


class NonlinearSolver(ABC):
    """
    Undamped Newton iteration on F = (H; Theta) = 0

    Subclasses choose the C-function providing the constraint Jacobian rows
    and how its smoothing parameter evolves.
    """

    allowed_methods: Tuple[CFunctionKind, ...] = ()

    def __init__(
        self,
        name: str,
        config: Optional[NewtonConfig] = None,
        gmres_config: Optional[GmresConfig] = None,
        preconditioner_config: Optional[PreconditionerConfig] = None
    ):
        self.name = name
        self.config = config or NewtonConfig(method=self.allowed_methods[0])
        self.gmres_config = gmres_config or GmresConfig()
        self.preconditioner_config = preconditioner_config or PreconditionerConfig()
        # MatrixMarket path for the next assembled system, cleared once written
        self.export_path: Optional[str] = None
        if not self.validate_params():
            raise ValueError(f"{self.name} does not support method '{self.config.method.value}'")

    def validate_params(self) -> bool:
        return self.config.method in self.allowed_methods

    def get_info(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'method': self.config.method.value,
            'tolerance': self.config.tolerance,
            'max_iterations': self.config.max_iterations,
            'max_divergent_iterations': self.config.max_divergent_iterations,
            'preconditioned': self.preconditioner_config.enabled,
        }

    @abstractmethod
    def initial_tau(self) -> float:
        """Smoothing parameter of the first iteration"""

    @abstractmethod
    def next_tau(self, tau: float) -> float:
        """Smoothing parameter after one iteration"""

    @abstractmethod
    def jacobian_function(self, tau: float) -> CFunction:
        """C-function used for the constraint rows of the Jacobian"""

    def solve_step(
        self,
        model: FlowModel,
        state_old: StateVector,
        dt: float,
        initial_guess: Optional[StateVector] = None
    ) -> Tuple[StateVector, NewtonReport]:
        """
        Solve one backward Euler step

        Args:
            model: Discrete problem
            state_old: Converged state of the previous time level
            dt: Time step (s)
            initial_guess: Starting iterate (state_old if None)

        Returns:
            (last iterate, report); the iterate is only meaningful when
            report.converged is True
        """
        config = self.config
        state = (initial_guess if initial_guess is not None else state_old).copy()
        report = NewtonReport()
        tau = self.initial_tau()

        system = self._assemble(model, state, state_old, dt, tau)
        norm = system.residual_norm
        report.residual_history.append(norm)

        while True:
            if not np.isfinite(norm):
                report.failure_reason = "non-finite residual"
                break
            if norm <= config.tolerance:
                report.converged = True
                break
            divergence = self.divergence(report.residual_history)
            if divergence is not None:
                report.failure_reason = f"diverged: {divergence}"
                break
            if report.iterations >= config.max_iterations:
                report.failure_reason = f"no convergence in {config.max_iterations} iterations"
                break

            report.tau_history.append(tau)
            delta, linear_iterations, ok = self._solve_linear(system)
            report.iterations += 1
            report.linear_iterations.append(linear_iterations)
            if not ok:
                report.residual_history.append(norm)
                report.failure_reason = "linear solver failure"
                break

            state = StateVector.from_vector(state.to_vector() + delta)
            tau = self.next_tau(tau)
            system = self._assemble(model, state, state_old, dt, tau)
            norm = system.residual_norm
            report.residual_history.append(norm)
            logger.debug(
                f"{self.name} it {report.iterations}: ||F|| = {norm:.3e}, "
                f"GMRES {linear_iterations}, tau = {tau:.1e}"
            )

        if report.converged:
            args = constraint_arguments(state, model.fluid, model.vg)
            report.complementarity_violation = complementarity_violation(
                args.a, args.b * system.row_scale[2 * model.n_cells:]
            )
        return state, report

    def divergence(self, history: List[float]) -> Optional[str]:
        """
        Reason to give up on a step before the iteration cap, None to go on

        A step diverges when its residual exceeds max_residual_growth times
        the first residual, or has grown in max_divergent_iterations
        consecutive iterations.
        """
        config = self.config
        if history[-1] > config.max_residual_growth * history[0]:
            return f"residual grew by more than {config.max_residual_growth:g} times"

        window = config.max_divergent_iterations
        if window and len(history) > window:
            recent = np.asarray(history[-(window + 1):])
            if np.all(np.diff(recent) > 0):
                return f"residual increased in {window} consecutive iterations"
        return None

    def _assemble(self, model, state, state_old, dt, tau) -> GlobalSystem:
        return assemble_global(
            model, state, state_old, dt,
            self.jacobian_function(tau),
            scaled=self.config.residual_scaling
        )

    def _solve_linear(self, system: GlobalSystem) -> Tuple[np.ndarray, int, bool]:
        if self.export_path is not None:
            export_matrix(system.matrix, self.export_path)
            self.export_path = None

        precond = None
        if self.preconditioner_config.enabled:
            try:
                precond = BlockPreconditioner(system, self.preconditioner_config).as_linear_operator()
            except PreconditionerError as e:
                logger.warning(f"{e}; solving unpreconditioned")

        result = gmres_solve(system.matrix, system.rhs, None, precond, self.gmres_config)
        if result.converged:
            return result.x, result.iterations, True

        relative = result.relative_residual(system.rhs)
        if np.isfinite(relative) and relative <= self.config.inexact_linear_tolerance:
            logger.warning(
                f"GMRES stopped at relative residual {relative:.2e} "
                f"(target {self.gmres_config.tolerance:.0e}); accepting the update"
            )
            return result.x, result.iterations, True
        logger.warning(f"GMRES failed: relative residual {relative:.2e} after {result.iterations} iterations")
        return result.x, result.iterations, False

    def __repr__(self) -> str:
        return f"{type(self).__name__}(method={self.config.method.value})"


"""
Solver Registry
Maps method ids used on the command line and in configs to solver classes
"""
from typing import Any, Dict, Optional, Type

from config.schemas import GmresConfig, NewtonConfig, PreconditionerConfig
from ncp.c_functions import CFunctionKind
from solvers.base_solver import NonlinearSolver


class SolverRegistry:
    """
    Centralized registry of nonlinear solution methods.
    """

    def __init__(self):
        self._solvers: Dict[str, Dict[str, Any]] = {}

    def register(
        self,
        method_id: str,
        solver_class: Type[NonlinearSolver],
        name: str,
        description: str,
        kind: CFunctionKind
    ) -> None:
        """
        Register a method.

        Args:
            method_id: Unique identifier
            solver_class: Solver class (must inherit from NonlinearSolver)
            name: Display name
            description: Method description
            kind: C-function the method uses
        """
        if not issubclass(solver_class, NonlinearSolver):
            raise ValueError(f"{solver_class} must inherit from NonlinearSolver")
        if kind not in solver_class.allowed_methods:
            raise ValueError(f"{solver_class.__name__} cannot use C-function '{kind.value}'")

        self._solvers[method_id] = {
            'class': solver_class,
            'name': name,
            'description': description,
            'kind': kind
        }

    def get_solver_info(self, method_id: str) -> Dict[str, Any]:
        """Get method metadata"""
        if method_id not in self._solvers:
            raise KeyError(f"Method '{method_id}' not found")
        return self._solvers[method_id].copy()

    def get_solver_class(self, method_id: str) -> Type[NonlinearSolver]:
        return self.get_solver_info(method_id)['class']

    def list_all(self) -> Dict[str, Dict[str, Any]]:
        """List all registered methods"""
        return {
            method_id: {k: v for k, v in info.items() if k != 'class'}
            for method_id, info in self._solvers.items()
        }

    def exists(self, method_id: str) -> bool:
        return method_id in self._solvers

    def create_solver(
        self,
        method_id: str,
        config: Optional[NewtonConfig] = None,
        gmres_config: Optional[GmresConfig] = None,
        preconditioner_config: Optional[PreconditionerConfig] = None
    ) -> NonlinearSolver:
        """
        Instantiate the solver of a method; the config's method field is
        overridden by the method's C-function.
        """
        info = self.get_solver_info(method_id)
        config = (config or NewtonConfig()).model_copy(update={'method': info['kind']})
        return info['class'](config, gmres_config, preconditioner_config)


# Global registry instance
registry = SolverRegistry()


def register_default_solvers():
    """Register the built-in methods"""
    from solvers.jacobian_smoothing import JacobianSmoothingSolver
    from solvers.semismooth_newton import SemismoothNewtonSolver

    registry.register(
        'min',
        SemismoothNewtonSolver,
        'Semi-smooth Newton (min)',
        'Active-set Jacobian rows of the min function',
        CFunctionKind.MIN
    )
    registry.register(
        'fb',
        SemismoothNewtonSolver,
        'Semi-smooth Newton (FB)',
        'Subgradient Jacobian rows of the Fischer-Burmeister function',
        CFunctionKind.FISCHER_BURMEISTER
    )
    registry.register(
        'sfb',
        JacobianSmoothingSolver,
        'Jacobian smoothing (smooth FB)',
        'Smoothed Fischer-Burmeister Jacobian, non-smooth residual, tau -> 0',
        CFunctionKind.SMOOTH_FISCHER_BURMEISTER
    )
    registry.register(
        'smin',
        JacobianSmoothingSolver,
        'Jacobian smoothing (smooth min)',
        'Chen-Harker-Kanzow-Smale smoothed min; not part of the default comparisons',
        CFunctionKind.SMOOTH_MIN
    )


register_default_solvers()

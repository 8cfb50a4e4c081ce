"""
Nonlinear solvers module
"""
from .base_solver import NewtonReport, NonlinearSolver

__all__ = ['NewtonReport', 'NonlinearSolver']

"""
Discretization and Newton system assembly module
"""
from .state import BoundaryCondition, StateVector

__all__ = ['BoundaryCondition', 'StateVector']

"""
Sparse linear solvers module
"""
from .gmres import GmresResult, gmres_solve

__all__ = ['GmresResult', 'gmres_solve']

"""
Nonlinear complementarity module
"""
from .c_functions import CFunction, CFunctionKind, make_c_function

__all__ = ['CFunction', 'CFunctionKind', 'make_c_function']

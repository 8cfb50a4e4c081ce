"""
Complementarity (C-)functions
Each function vanishes exactly on {a >= 0, b >= 0, a*b = 0} (smooth variants
only in the limit tau -> 0) and provides the coefficients of a generalized
Jacobian row: row = ca * grad(a) + cb * grad(b).
"""
from abc import ABC, abstractmethod
from enum import Enum
from typing import Tuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

# Subgradient picked at the FB kink, alpha^2 + beta^2 = 1
FB_ORIGIN_ALPHA = 1.0 / np.sqrt(2.0)
FB_ORIGIN_BETA = 1.0 / np.sqrt(2.0)


class CFunctionKind(str, Enum):
    """Available C-functions"""
    MIN = "min"
    FISCHER_BURMEISTER = "fb"
    SMOOTH_FISCHER_BURMEISTER = "sfb"
    SMOOTH_MIN = "smin"

    @property
    def is_smooth(self) -> bool:
        return self in (CFunctionKind.SMOOTH_FISCHER_BURMEISTER, CFunctionKind.SMOOTH_MIN)


class CFunction(ABC):
    """
    Base class for C-functions evaluated componentwise on arrays
    """

    kind: CFunctionKind

    def __init__(self, tau: float = 0.0):
        """
        Args:
            tau: Smoothing parameter (ignored by the non-smooth functions)
        """
        if tau < 0:
            raise ValueError(f"Smoothing parameter must be non-negative, got {tau}")
        self.tau = float(tau)

    @abstractmethod
    def value(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        """Evaluate the function componentwise"""

    @abstractmethod
    def coefficients(self, a: ArrayLike, b: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """
        Partial derivatives (or the chosen generalized-gradient element)

        Returns:
            (ca, cb) so that the Jacobian row is ca * da + cb * db
        """

    def reference(self) -> "CFunction":
        """Non-smooth function whose values form the residual"""
        return self

    def __repr__(self) -> str:
        return f"{type(self).__name__}(tau={self.tau:g})"


class MinFunction(CFunction):
    """Phi(a, b) = min(a, b) with the active-set generalized Jacobian"""

    kind = CFunctionKind.MIN

    def value(self, a, b):
        return np.minimum(np.asarray(a, dtype=float), np.asarray(b, dtype=float))

    def coefficients(self, a, b):
        active = np.asarray(a, dtype=float) >= np.asarray(b, dtype=float)
        cb = active.astype(float)
        return 1.0 - cb, cb


class FischerBurmeister(CFunction):
    """Phi(a, b) = sqrt(a^2 + b^2) - (a + b)"""

    kind = CFunctionKind.FISCHER_BURMEISTER

    def value(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return np.hypot(a, b) - (a + b)

    def coefficients(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        r = np.hypot(a, b)
        origin = r == 0.0
        safe = np.where(origin, 1.0, r)
        ca = np.where(origin, FB_ORIGIN_ALPHA, a / safe) - 1.0
        cb = np.where(origin, FB_ORIGIN_BETA, b / safe) - 1.0
        return ca, cb


class SmoothFischerBurmeister(CFunction):
    """G(a, b, tau) = sqrt(a^2 + b^2 + 2 tau) - (a + b)"""

    kind = CFunctionKind.SMOOTH_FISCHER_BURMEISTER

    def value(self, a, b):
        if self.tau == 0.0:
            return FischerBurmeister().value(a, b)
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return np.sqrt(a * a + b * b + 2.0 * self.tau) - (a + b)

    def coefficients(self, a, b):
        if self.tau == 0.0:
            return FischerBurmeister().coefficients(a, b)
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        r = np.sqrt(a * a + b * b + 2.0 * self.tau)
        return a / r - 1.0, b / r - 1.0

    def reference(self):
        return FischerBurmeister()


class SmoothMin(CFunction):
    """
    Chen-Harker-Kanzow-Smale smoothing:
    G(a, b, tau) = (a + b) - sqrt((a - b)^2 + 4 tau)

    At tau = 0 this is 2 * min(a, b), so the residual reference is the
    same expression with tau = 0 rather than min itself.
    """

    kind = CFunctionKind.SMOOTH_MIN

    def value(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        d = a - b
        return (a + b) - np.sqrt(d * d + 4.0 * self.tau)

    def coefficients(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        d = a - b
        r = np.sqrt(d * d + 4.0 * self.tau)
        # r == 0 only for tau == 0 and a == b: ties go to the b-row
        kink = r == 0.0
        ratio = np.where(kink, 1.0, d / np.where(kink, 1.0, r))
        return 1.0 - ratio, 1.0 + ratio

    def reference(self):
        return SmoothMin(0.0)


_C_FUNCTIONS = {
    CFunctionKind.MIN: MinFunction,
    CFunctionKind.FISCHER_BURMEISTER: FischerBurmeister,
    CFunctionKind.SMOOTH_FISCHER_BURMEISTER: SmoothFischerBurmeister,
    CFunctionKind.SMOOTH_MIN: SmoothMin,
}


def make_c_function(kind: Union[CFunctionKind, str], tau: float = 0.0) -> CFunction:
    """
    Create a C-function of the given kind

    Args:
        kind: Function kind (enum member or its string value)
        tau: Smoothing parameter for the smooth kinds

    Returns:
        CFunction instance
    """
    kind = CFunctionKind(kind)
    if not kind.is_smooth:
        if tau < 0:
            raise ValueError(f"Smoothing parameter must be non-negative, got {tau}")
        tau = 0.0
    return _C_FUNCTIONS[kind](tau)


def c_function(kind: Union[CFunctionKind, str], a: ArrayLike, b: ArrayLike, tau: float = 0.0) -> np.ndarray:
    """Evaluate a C-function of the given kind"""
    return make_c_function(kind, tau).value(a, b)


def constraint_jacobian_row(
    kind: Union[CFunctionKind, str],
    a_j: float,
    b_j: float,
    da_du,
    db_du,
    tau: float = 0.0
):
    """
    Generalized Jacobian row of one constraint

    Args:
        kind: Function kind
        a_j, b_j: Constraint arguments of the cell
        da_du, db_du: Gradients of a_j and b_j (dense arrays or sparse rows)
        tau: Smoothing parameter for the smooth kinds

    Returns:
        ca * da_du + cb * db_du, same type as the gradients
    """
    ca, cb = make_c_function(kind, tau).coefficients(a_j, b_j)
    return float(ca) * da_du + float(cb) * db_du

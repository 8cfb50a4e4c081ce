"""
Complementarity constraints of the phase transition

Per cell: a = 1 - S_l >= 0, b = C_h P_g - rho_l^h >= 0, a * b = 0.
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple, Union

import numpy as np

from ncp.c_functions import CFunction, CFunctionKind, make_c_function
from physics.constitutive import capillary_pressure

if TYPE_CHECKING:
    from assembly.state import StateVector
    from config.schemas import FluidParams, VanGenuchtenParams


@dataclass
class ConstraintArgs:
    """
    Constraint arguments and their gradients

    da, db have shape (3, N): derivatives with respect to
    (P_l, S_l, rho_l^h) of the owning cell.
    """
    a: np.ndarray
    b: np.ndarray
    da: np.ndarray
    db: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.a.size


def constraint_arguments(
    state: "StateVector",
    fluid: "FluidParams",
    vg: "VanGenuchtenParams"
) -> ConstraintArgs:
    n = state.n_cells
    pc, dpc = capillary_pressure(state.saturation, vg)
    ch = fluid.henry_coefficient

    a = 1.0 - state.saturation
    b = ch * (state.pressure + pc) - state.concentration

    da = np.zeros((3, n))
    da[1] = -1.0
    db = np.vstack([np.full(n, ch), ch * dpc, -np.ones(n)])
    return ConstraintArgs(a=a, b=b, da=da, db=db)


def _as_function(kind: Union[CFunction, CFunctionKind, str], tau: float) -> CFunction:
    if isinstance(kind, CFunction):
        return kind
    return make_c_function(kind, tau)


def assemble_theta(
    kind: Union[CFunction, CFunctionKind, str],
    state: "StateVector",
    fluid: "FluidParams",
    vg: "VanGenuchtenParams",
    tau: float = 0.0
) -> np.ndarray:
    """Theta_j = Phi(1 - S_l, C_h P_g - rho_l^h) for every cell"""
    args = constraint_arguments(state, fluid, vg)
    return _as_function(kind, tau).value(args.a, args.b)


def active_set_partition(a, b) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns:
        (A, I): cell indices with a >= b, and the rest
    """
    active = np.asarray(a, dtype=float) >= np.asarray(b, dtype=float)
    return np.flatnonzero(active), np.flatnonzero(~active)


def complementarity_violation(a, b) -> float:
    """||min(a, b)||_inf, zero exactly on the complementary set"""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(np.minimum(a, np.asarray(b, dtype=float)))))

"""
Global 3N x 3N Newton system: mass balance rows stacked over
complementarity rows

    [ A_11 A_12 A_13 ] [dP  ]   [ -H_w  ]
    [ A_21 A_22 A_23 ] [dS  ] = [ -H_h  ]
    [ A_31 A_32 A_33 ] [drho]   [ -Theta]
"""
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
import scipy.sparse as sp

from assembly.flow import FlowModel, residual_and_jacobian, residual_pde
from assembly.state import StateVector
from config import settings
from linalg.sparse import as_sparse_matrix
from ncp.c_functions import CFunction, CFunctionKind, make_c_function
from ncp.constraints import constraint_arguments


@dataclass
class GlobalSystem:
    """Scaled Jacobian, right-hand side -F and the row scaling used"""
    matrix: sp.csr_matrix
    rhs: np.ndarray
    n_cells: int
    row_scale: np.ndarray

    @property
    def size(self) -> int:
        return 3 * self.n_cells

    def block(self, i: int, j: int) -> sp.csr_matrix:
        """Block A_ij with 1-based indices as in the layout above"""
        n = self.n_cells
        return self.matrix[(i - 1) * n:i * n, (j - 1) * n:j * n]

    def constraint_diagonal(self) -> np.ndarray:
        """Diagonal of A_33"""
        return self.block(3, 3).diagonal()

    @property
    def residual_norm(self) -> float:
        return float(np.linalg.norm(self.rhs))


def residual_scaling(model: FlowModel, dt: float, scaled: bool = True) -> np.ndarray:
    """
    Row factors: mass balance rows by dt / (V phi rho_w), constraint
    rows by 1 / max(1, C_h P_ref). All ones when scaling is off.
    """
    n = model.n_cells
    if not scaled:
        return np.ones(3 * n)
    pde = dt / (model.pore_volume * model.fluid.water_density)
    constraint = np.full(n, 1.0 / max(1.0, model.fluid.henry_coefficient * settings.REFERENCE_PRESSURE))
    return np.concatenate([pde, pde, constraint])


def _as_function(kind: Union[CFunction, CFunctionKind, str], tau: float) -> CFunction:
    if isinstance(kind, CFunction):
        return kind
    return make_c_function(kind, tau)


def evaluate_residual(
    model: FlowModel,
    state: StateVector,
    state_old: StateVector,
    dt: float,
    kind: Union[CFunction, CFunctionKind, str],
    tau: float = 0.0
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Unscaled (H, Theta); Theta always uses the non-smooth reference
    function of the given kind
    """
    c_function = _as_function(kind, tau).reference()
    args = constraint_arguments(state, model.fluid, model.vg)
    return residual_pde(model, state, state_old, dt), c_function.value(args.a, args.b)


def assemble_global(
    model: FlowModel,
    state: StateVector,
    state_old: StateVector,
    dt: float,
    kind: Union[CFunction, CFunctionKind, str],
    tau: float = 0.0,
    scaled: bool = True
) -> GlobalSystem:
    """
    Assemble the Newton system at the current iterate

    Args:
        model: Discrete problem
        state: Current iterate
        state_old: Previous time level
        dt: Time step (s)
        kind: C-function (instance, or kind plus tau) providing the
            constraint Jacobian rows
        tau: Smoothing parameter when kind is not an instance
        scaled: Apply residual_scaling to rows and right-hand side

    Returns:
        GlobalSystem with rhs = -F
    """
    n = model.n_cells
    c_function = _as_function(kind, tau)

    h, pde_jacobian = residual_and_jacobian(model, state, state_old, dt)
    args = constraint_arguments(state, model.fluid, model.vg)
    theta = c_function.reference().value(args.a, args.b)
    ca, cb = c_function.coefficients(args.a, args.b)

    # constraint rows only touch the owning cell
    constraint_jacobian = sp.hstack(
        [sp.diags(ca * args.da[var] + cb * args.db[var]) for var in range(3)]
    )
    matrix = sp.vstack([pde_jacobian, constraint_jacobian]).tocsr()

    scale = residual_scaling(model, dt, scaled)
    matrix = as_sparse_matrix(sp.diags(scale) @ matrix)
    rhs = -scale * np.concatenate([h, theta])
    return GlobalSystem(matrix=matrix, rhs=rhs, n_cells=n, row_scale=scale)

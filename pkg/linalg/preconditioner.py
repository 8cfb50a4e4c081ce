"""
Block preconditioner for the stacked Newton system

Constraint rows couple only the unknowns of their own cell, so one unknown
per cell can be eliminated exactly. The reduced 2N x 2N system (the Schur
complement of the mass balance rows) is approximated with an incomplete LU
factorization.
"""
import logging
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, spilu

from assembly.system import GlobalSystem
from config.schemas import PreconditionerConfig

logger = logging.getLogger(__name__)

SATURATION_PIVOT, CONCENTRATION_PIVOT = 1, 2


class PreconditionerError(RuntimeError):
    """Incomplete factorization failed"""


class BlockPreconditioner:
    """
    Approximate inverse of a GlobalSystem matrix

    Per cell the eliminated unknown is rho_l^h when the A_33 diagonal is
    usable, otherwise S_l. With a nonzero A_33 diagonal everywhere a single
    reduction step suffices; a mixed pivot needs two.
    """

    def __init__(self, system: GlobalSystem, config: Optional[PreconditionerConfig] = None, pivot_tolerance: float = 1e-10):
        self.config = config or PreconditionerConfig()
        n = system.n_cells
        self.n_cells = n
        matrix = system.matrix.tocsr()

        constraint = matrix[2 * n:, :]
        c_s = constraint[:, n:2 * n].diagonal()
        c_rho = constraint[:, 2 * n:].diagonal()

        use_rho = np.abs(c_rho) > pivot_tolerance * np.abs(c_s)
        use_rho &= c_rho != 0.0
        if np.any(~use_rho & (c_s == 0.0)):
            bad = int(np.flatnonzero(~use_rho & (c_s == 0.0))[0])
            raise PreconditionerError(f"Constraint row of cell {bad} has no usable pivot")

        self.pivot_variable = np.where(use_rho, CONCENTRATION_PIVOT, SATURATION_PIVOT)
        self.reduction_steps = 1 if np.all(use_rho) else 2

        cells = np.arange(n)
        self.eliminated = self.pivot_variable * n + cells
        kept = np.ones(3 * n, dtype=bool)
        kept[self.eliminated] = False
        self.kept = np.flatnonzero(kept)

        self.pivot = np.where(use_rho, c_rho, c_s)
        top = matrix[:2 * n, :]
        self.top_eliminated = top[:, self.eliminated].tocsr()
        self.constraint_kept = constraint[:, self.kept].tocsr()

        schur = top[:, self.kept] - self.top_eliminated @ sp.diags(1.0 / self.pivot) @ self.constraint_kept
        try:
            self.ilu = spilu(
                sp.csc_matrix(schur),
                drop_tol=self.config.drop_tolerance,
                fill_factor=self.config.fill_factor
            )
        except RuntimeError as e:
            raise PreconditionerError(f"Incomplete factorization failed: {e}") from e

        logger.debug(
            f"Block preconditioner: {int(np.sum(use_rho))}/{n} concentration pivots, "
            f"{self.reduction_steps} reduction step(s)"
        )

    def apply(self, f: np.ndarray) -> np.ndarray:
        """y ~= A^{-1} f; exact on the constraint rows"""
        n = self.n_cells
        f = np.asarray(f, dtype=float).ravel()
        f_top = f[:2 * n]
        f_constraint = f[2 * n:]

        reduced = f_top - self.top_eliminated @ (f_constraint / self.pivot)
        y_kept = self.ilu.solve(reduced)
        y_eliminated = (f_constraint - self.constraint_kept @ y_kept) / self.pivot

        y = np.empty(3 * n)
        y[self.kept] = y_kept
        y[self.eliminated] = y_eliminated
        return y

    def as_linear_operator(self) -> LinearOperator:
        size = 3 * self.n_cells
        return LinearOperator((size, size), matvec=self.apply, dtype=float)


def block_preconditioner(system: GlobalSystem, config: Optional[PreconditionerConfig] = None) -> LinearOperator:
    return BlockPreconditioner(system, config).as_linear_operator()

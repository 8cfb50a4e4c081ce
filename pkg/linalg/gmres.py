"""
Restarted GMRES with right preconditioning
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_triangular
from scipy.sparse.linalg import aslinearoperator

from config.schemas import GmresConfig
from linalg.sparse import spmv

logger = logging.getLogger(__name__)

# a restart cycle must reduce the true residual at least this much
STAGNATION_RATIO = 0.999


@dataclass
class GmresResult:
    x: np.ndarray
    iterations: int
    converged: bool
    residual_norm: float

    def relative_residual(self, b: np.ndarray) -> float:
        b_norm = float(np.linalg.norm(b))
        return self.residual_norm / b_norm if b_norm > 0 else self.residual_norm


def gmres_solve(
    A,
    b: np.ndarray,
    x0: Optional[np.ndarray] = None,
    precond=None,
    config: Optional[GmresConfig] = None
) -> GmresResult:
    """
    Solve A x = b with GMRES(m), right preconditioned (A M y = b, x = M y)

    Convergence is decided on the true residual ||b - A x|| <= tol ||b||,
    recomputed at the end of every restart cycle.

    Args:
        A: Square matrix or LinearOperator
        b: Right-hand side
        x0: Initial guess (zero if None)
        precond: Approximate inverse M (matrix, LinearOperator or None)
        config: Restart length, iteration cap and relative tolerance

    Returns:
        GmresResult; converged is False on stagnation or when the
        iteration cap is reached
    """
    config = config or GmresConfig()
    op = aslinearoperator(A)
    m_op = aslinearoperator(precond) if precond is not None else None
    b = np.asarray(b, dtype=float)
    n = b.size
    if op.shape != (n, n):
        raise ValueError(f"Operator shape {op.shape} does not match right-hand side of length {n}")

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return GmresResult(np.zeros(n), 0, True, 0.0)

    target = config.tolerance * b_norm
    r = b - spmv(op, x)
    r_norm = float(np.linalg.norm(r))
    if r_norm <= target:
        return GmresResult(x, 0, True, r_norm)

    total = 0
    while total < config.max_iterations:
        m = min(config.restart, config.max_iterations - total)
        V = np.zeros((m + 1, n))
        Z = np.zeros((m, n))
        H = np.zeros((m + 1, m))
        cs = np.zeros(m)
        sn = np.zeros(m)
        g = np.zeros(m + 1)
        g[0] = r_norm
        V[0] = r / r_norm

        k = 0
        for j in range(m):
            Z[j] = V[j] if m_op is None else m_op.matvec(V[j])
            w = op.matvec(Z[j])
            # modified Gram-Schmidt
            for i in range(j + 1):
                H[i, j] = np.dot(w, V[i])
                w = w - H[i, j] * V[i]
            H[j + 1, j] = np.linalg.norm(w)
            breakdown = H[j + 1, j] <= np.finfo(float).eps * np.linalg.norm(H[:j + 2, j])
            if not breakdown:
                V[j + 1] = w / H[j + 1, j]

            for i in range(j):
                temp = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = temp
            denom = np.hypot(H[j, j], H[j + 1, j])
            if denom == 0.0:
                break
            cs[j] = H[j, j] / denom
            sn[j] = H[j + 1, j] / denom
            H[j, j] = denom
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]

            total += 1
            k = j + 1
            if abs(g[j + 1]) <= target or breakdown:
                break

        if k == 0:
            logger.debug("GMRES: singular Hessenberg column, stopping")
            break

        y = solve_triangular(H[:k, :k], g[:k])
        x = x + Z[:k].T @ y
        r = b - spmv(op, x)
        previous = r_norm
        r_norm = float(np.linalg.norm(r))
        if r_norm <= target:
            return GmresResult(x, total, True, r_norm)
        if not np.isfinite(r_norm) or r_norm >= STAGNATION_RATIO * previous:
            logger.debug(f"GMRES stagnated at relative residual {r_norm / b_norm:.3e}")
            break

    return GmresResult(x, total, False, r_norm)

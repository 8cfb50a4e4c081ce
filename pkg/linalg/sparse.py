"""
Sparse matrix helpers
"""
import logging

import numpy as np
import scipy.io
import scipy.sparse as sp

logger = logging.getLogger(__name__)


def as_sparse_matrix(A) -> sp.csr_matrix:
    """Canonical CSR copy: duplicates summed, column indices sorted per row"""
    matrix = sp.csr_matrix(A, dtype=float, copy=True)
    matrix.sum_duplicates()
    matrix.sort_indices()
    return matrix


def spmv(A, x) -> np.ndarray:
    """y = A x with a dimension check"""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ValueError(f"Cannot multiply matrix of shape {A.shape} with vector of shape {x.shape}")
    return np.asarray(A @ x).ravel()


def export_matrix(A, path: str) -> None:
    """Write A in MatrixMarket coordinate format (1-based row, col, value)"""
    scipy.io.mmwrite(path, sp.coo_matrix(A))
    logger.info(f"Matrix {A.shape} with {sp.coo_matrix(A).nnz} entries written to {path}")

"""
Rock property fields: raster files, constants and seeded synthetic fields
"""
import logging
from typing import Sequence, Tuple

import numpy as np
from scipy.ndimage import gaussian_filter
from scipy.special import ndtr

from config.schemas import RockSpec
from physics.mesh import CartesianMesh, RockField

logger = logging.getLogger(__name__)


def read_raster(path: str, n_cells: int, scale: float = 1.0) -> np.ndarray:
    """
    Read one value per line in lexicographic cell order

    Raises:
        ValueError: if the file does not hold exactly n_cells values
    """
    values = np.loadtxt(path, dtype=float, ndmin=1).ravel()
    if values.size != n_cells:
        raise ValueError(f"Raster {path} has {values.size} values, mesh has {n_cells} cells")
    return values * scale


def _correlated_uniform(dims: Sequence[int], seed: int, correlation_length: float) -> np.ndarray:
    """Smoothed Gaussian noise mapped to (0, 1), lexicographic order"""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(tuple(dims)[::-1])
    if correlation_length > 0:
        noise = gaussian_filter(noise, sigma=correlation_length, mode='reflect')
    std = noise.std()
    z = (noise - noise.mean()) / std if std > 0 else np.zeros_like(noise)
    return ndtr(z).ravel()


def synthetic_field(
    dims: Sequence[int],
    value_range: Tuple[float, float],
    seed: int,
    correlation_length: float = 2.0,
    log_scale: bool = True
) -> np.ndarray:
    """
    Spatially correlated random field clamped into value_range

    With log_scale the field is log-uniformly distributed over the range
    (permeability), otherwise uniformly (porosity).
    """
    low, high = value_range
    u = _correlated_uniform(dims, seed, correlation_length)
    if log_scale:
        values = np.exp(np.log(low) + u * (np.log(high) - np.log(low)))
    else:
        values = low + u * (high - low)
    return np.clip(values, low, high)


def load_rock_field(spec: RockSpec, mesh: CartesianMesh) -> RockField:
    """Build the per-cell rock field described by a RockSpec"""
    n = mesh.n_cells
    synthetic = spec.synthetic

    if spec.permeability_file is not None:
        permeability = read_raster(spec.permeability_file, n, spec.permeability_scale)
    elif spec.permeability is not None:
        permeability = np.full(n, spec.permeability)
    else:
        permeability = synthetic_field(
            mesh.dims, synthetic.permeability_range, synthetic.seed, synthetic.correlation_length
        )

    if spec.porosity_file is not None:
        porosity = read_raster(spec.porosity_file, n)
    elif spec.porosity is not None:
        porosity = np.full(n, spec.porosity)
    else:
        porosity = synthetic_field(
            mesh.dims, synthetic.porosity_range, synthetic.seed, synthetic.correlation_length, log_scale=False
        )

    logger.info(
        f"Rock field: K in [{permeability.min():.3e}, {permeability.max():.3e}] m^2, "
        f"phi in [{porosity.min():.3f}, {porosity.max():.3f}]"
    )
    rock = RockField(permeability, porosity)
    rock.check_mesh(mesh)
    return rock

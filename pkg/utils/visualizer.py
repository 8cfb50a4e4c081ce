"""
Plots of simulation results
"""
import os
from typing import Dict, Optional

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from assembly.state import StateVector
from physics.mesh import CartesianMesh


def gas_saturation_profile(mesh: CartesianMesh, state: StateVector) -> np.ndarray:
    """Gas saturation averaged over y and z, as a function of x"""
    nx, ny, nz = mesh.dims
    return state.gas_saturation.reshape(nz, ny, nx).mean(axis=(0, 1))


def plot_gas_saturation(
    mesh: CartesianMesh,
    profiles: Dict[str, StateVector],
    path: str,
    title: Optional[str] = None
) -> str:
    """
    Plot gas saturation along x for several labelled states

    Args:
        mesh: Mesh of the states
        profiles: Label -> state
        path: Output PNG path
        title: Figure title

    Returns:
        Path of the saved figure
    """
    x = mesh.origin[0] + (np.arange(mesh.dims[0]) + 0.5) * mesh.cell_size[0]
    fig, ax = plt.subplots(figsize=(10, 5))
    for label, state in profiles.items():
        ax.plot(x, gas_saturation_profile(mesh, state), label=label, linewidth=1.5)

    ax.set_xlabel('x (m)')
    ax.set_ylabel('Gas saturation')
    ax.set_title(title or 'Gas saturation profile')
    ax.legend(loc='best')
    ax.grid(True, alpha=0.3)

    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches='tight')
    plt.close(fig)
    return path

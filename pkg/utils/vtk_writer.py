"""
Legacy VTK (ASCII STRUCTURED_GRID) snapshots of the cell fields
"""
import os
from typing import Dict

import numpy as np

from assembly.state import StateVector
from config.schemas import VanGenuchtenParams
from physics.constitutive import gas_pressure
from physics.mesh import CartesianMesh


def snapshot_fields(state: StateVector, vg: VanGenuchtenParams) -> Dict[str, np.ndarray]:
    return {
        'liquid_pressure': state.pressure,
        'liquid_saturation': state.saturation,
        'dissolved_hydrogen': state.concentration,
        'gas_saturation': state.gas_saturation,
        'gas_pressure': gas_pressure(state.pressure, state.saturation, vg),
    }


def write_vtk_snapshot(
    path: str,
    mesh: CartesianMesh,
    state: StateVector,
    vg: VanGenuchtenParams,
    time: float = 0.0
) -> str:
    """
    Write P_l, S_l, rho_l^h, S_g and P_g as CELL_DATA

    Returns:
        Path of the written file
    """
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    nx, ny, nz = mesh.dims
    axes = [mesh.origin[a] + mesh.cell_size[a] * np.arange(mesh.dims[a] + 1) for a in range(3)]
    # x varies fastest
    z, y, x = np.meshgrid(axes[2], axes[1], axes[0], indexing='ij')
    points = np.column_stack([x.ravel(), y.ravel(), z.ravel()])

    with open(path, 'w') as f:
        f.write("# vtk DataFile Version 3.0\n")
        f.write(f"two-phase hydrogen/water state at t = {time:.6e} s\n")
        f.write("ASCII\n")
        f.write("DATASET STRUCTURED_GRID\n")
        f.write(f"DIMENSIONS {nx + 1} {ny + 1} {nz + 1}\n")
        f.write(f"POINTS {points.shape[0]} double\n")
        np.savetxt(f, points, fmt='%.10e')
        f.write(f"CELL_DATA {mesh.n_cells}\n")
        for name, values in snapshot_fields(state, vg).items():
            f.write(f"SCALARS {name} double 1\n")
            f.write("LOOKUP_TABLE default\n")
            np.savetxt(f, np.asarray(values), fmt='%.12e')
    return path

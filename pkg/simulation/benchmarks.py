"""
Benchmark problem definitions

- Quasi-1D hydrogen injection into a water-saturated 200 m x 20 m domain
  (two entry pressures, 200 or 400 cells)
- Heterogeneous-permeability injection cases in 2D (762 m x 15.24 m) and
  3D (50 m x 30 m x 20 m)
"""
import os
from typing import Optional

import numpy as np

from config import settings
from config.schemas import (
    BoundaryConditionSpec, BoundaryKind, BoundaryRegion, FluidParams, FluxUnit,
    InitialStateSpec, MeshSpec, NewtonConfig, OutputSpec, RockSpec, Side,
    SimulationConfig, SyntheticFieldSpec, TimeSpec, TimeUnit, VanGenuchtenParams
)
from ncp.c_functions import CFunctionKind
from solvers.registry import registry

MOMAS_ENTRY_PRESSURES = (2e6, 2e3)
MOMAS_CELL_COUNTS = (200, 400)
MOMAS_LENGTH = 200.0
MOMAS_HEIGHT = 20.0
MOMAS_INJECTION = 5.57e-6  # kg/m^2/year
MOMAS_INITIAL_DT_YEARS = 6e3
# longer steps out of the 1e5-year front fail for min and smoothed FB
MOMAS_MAX_DT_YEARS = 5e4
MOMAS_FRONT_TIME_YEARS = 1e5

HETERO_INJECTION = 5.57e-2  # kg/m^2/year
PERMEABILITY_RANGE = (1.377e-20, 2.117e-15)
POROSITY_RANGE_3D = (0.002, 0.1)
POROSITY_2D = 0.2
RASTER_PERMEABILITY_SCALE = 1e-5

OUTLET = BoundaryConditionSpec(kind=BoundaryKind.DIRICHLET, pressure=1e6, saturation=1.0, concentration=0.0)


def _newton_config(method: str, initial_tau: float) -> NewtonConfig:
    kind: CFunctionKind = registry.get_solver_info(method)['kind']
    return NewtonConfig(method=kind, initial_tau=initial_tau)


def _injection(flux_per_year: float) -> BoundaryConditionSpec:
    return BoundaryConditionSpec(
        kind=BoundaryKind.NEUMANN,
        hydrogen_flux=flux_per_year,
        flux_unit=FluxUnit.PER_YEAR
    )


def benchmark_momas(
    entry_pressure: float,
    mesh_cells: int,
    method: str = 'sfb',
    end_time_years: Optional[float] = None,
    initial_dt_years: float = MOMAS_INITIAL_DT_YEARS,
    max_dt_years: float = MOMAS_MAX_DT_YEARS,
    output_dir: Optional[str] = None
) -> SimulationConfig:
    """
    Quasi-1D hydrogen injection benchmark

    Args:
        entry_pressure: Van Genuchten P_r, 2e6 or 2e3 Pa
        mesh_cells: 200 or 400 cells along x (one cell across)
        method: Registered solver method id
        end_time_years: Horizon (5e5 years for P_r = 2e6, 1e5 otherwise)
        initial_dt_years: First time step
        max_dt_years: Step cap, lowered to a quarter of the horizon on short runs
        output_dir: Output directory (settings.OUTPUT_DIR/<name> if None)

    Returns:
        SimulationConfig
    """
    if entry_pressure not in MOMAS_ENTRY_PRESSURES:
        raise ValueError(f"entry_pressure must be one of {MOMAS_ENTRY_PRESSURES}, got {entry_pressure}")
    if mesh_cells not in MOMAS_CELL_COUNTS:
        raise ValueError(f"mesh_cells must be one of {MOMAS_CELL_COUNTS}, got {mesh_cells}")
    if end_time_years is None:
        end_time_years = 5e5 if entry_pressure == 2e6 else 1e5

    name = f"momas_pr{entry_pressure:.0e}_{mesh_cells}_{method}".replace('+', '')
    snapshots = [MOMAS_FRONT_TIME_YEARS] if MOMAS_FRONT_TIME_YEARS < end_time_years else []

    return SimulationConfig(
        name=name,
        mesh=MeshSpec(dims=(mesh_cells, 1, 1), cell_size=(MOMAS_LENGTH / mesh_cells, MOMAS_HEIGHT, 1.0)),
        rock=RockSpec(permeability=5e-20, porosity=0.15),
        fluid=FluidParams(),
        van_genuchten=VanGenuchtenParams(
            entry_pressure=entry_pressure, n=1.49, residual_liquid=0.4, residual_gas=0.0, epsilon=1e-5
        ),
        boundaries=[
            BoundaryRegion(name="inlet", side=Side.XMIN, condition=_injection(MOMAS_INJECTION)),
            BoundaryRegion(name="outlet", side=Side.XMAX, condition=OUTLET),
        ],
        initial=InitialStateSpec(pressure=1e6, saturation=1.0, concentration=0.0),
        solver=_newton_config(method, 1e-6),
        time=TimeSpec(
            unit=TimeUnit.YEAR,
            initial_dt=initial_dt_years,
            end_time=end_time_years,
            dt_max=min(max_dt_years, settings.DT_MAX_FRACTION * end_time_years)
        ),
        output=OutputSpec(
            directory=output_dir or os.path.join(settings.OUTPUT_DIR, name),
            snapshot_times=snapshots,
            plot=True
        )
    )


def _scaled_dims(dims, scale: int):
    return tuple(max(1, d // scale) for d in dims)


def benchmark_heterogeneous(
    dim: int,
    perm_file: Optional[str] = None,
    seed: Optional[int] = None,
    method: str = 'sfb',
    scale: int = 1,
    output_dir: Optional[str] = None
) -> SimulationConfig:
    """
    Heterogeneous injection case

    2D: 762 m x 15.24 m, 100 x 20 cells, dt0 = 20 days, end 1160 days.
    3D: 50 m x 30 m x 20 m, 50 x 30 x 20 cells, dt0 = 200 days, end 2000
    days, injection on an xmin corner patch and outlet on the opposite
    xmax corner patch.

    Args:
        dim: 2 or 3
        perm_file: Permeability raster (scaled by 1e-5 on ingestion)
        seed: Seed of a synthetic field; a constant field is used when
            neither perm_file nor seed is given
        method: Registered solver method id
        scale: Coarsening factor applied to the cell counts
        output_dir: Output directory

    Returns:
        SimulationConfig
    """
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")

    if dim == 2:
        extent = (762.0, 15.24, 1.0)
        dims = _scaled_dims((100, 20, 1), scale)
        initial_dt, end_time, tau = 20.0, 1160.0, 1e-6
        porosity_range = None
    else:
        extent = (50.0, 30.0, 20.0)
        dims = _scaled_dims((50, 30, 20), scale)
        initial_dt, end_time, tau = 200.0, 2000.0, 1e-4
        porosity_range = POROSITY_RANGE_3D

    if perm_file is not None:
        rock = RockSpec(
            permeability_file=perm_file,
            permeability_scale=RASTER_PERMEABILITY_SCALE,
            porosity=POROSITY_2D if dim == 2 else float(np.mean(POROSITY_RANGE_3D))
        )
        source = "raster"
    elif seed is not None:
        rock = RockSpec(
            porosity=POROSITY_2D if dim == 2 else None,
            synthetic=SyntheticFieldSpec(
                seed=seed, permeability_range=PERMEABILITY_RANGE, porosity_range=porosity_range
            )
        )
        source = f"seed{seed}"
    else:
        log_mean = float(np.exp(np.mean(np.log(PERMEABILITY_RANGE))))
        rock = RockSpec(
            permeability=log_mean,
            porosity=POROSITY_2D if dim == 2 else float(np.mean(POROSITY_RANGE_3D))
        )
        source = "constant"

    if dim == 2:
        inlet = BoundaryRegion(name="inlet", side=Side.XMIN, condition=_injection(HETERO_INJECTION))
        outlet = BoundaryRegion(name="outlet", side=Side.XMAX, condition=OUTLET)
    else:
        # opposite corner patches, one fifth of the face extent each way
        patch_y, patch_z = extent[1] / 5.0, extent[2] / 5.0
        inlet = BoundaryRegion(
            name="inlet", side=Side.XMIN,
            upper=(0.0, patch_y, patch_z),
            condition=_injection(HETERO_INJECTION)
        )
        outlet = BoundaryRegion(
            name="outlet", side=Side.XMAX,
            lower=(extent[0], extent[1] - patch_y, extent[2] - patch_z),
            condition=OUTLET
        )

    name = f"hetero{dim}d_{source}_{method}"
    return SimulationConfig(
        name=name,
        mesh=MeshSpec(dims=dims, cell_size=tuple(e / d for e, d in zip(extent, dims))),
        rock=rock,
        fluid=FluidParams(),
        van_genuchten=VanGenuchtenParams(entry_pressure=2e3, n=1.49, residual_liquid=0.4, residual_gas=0.0),
        boundaries=[inlet, outlet],
        initial=InitialStateSpec(pressure=1e6, saturation=1.0, concentration=0.0),
        solver=_newton_config(method, tau),
        time=TimeSpec(unit=TimeUnit.DAY, initial_dt=initial_dt, end_time=end_time),
        output=OutputSpec(directory=output_dir or os.path.join(settings.OUTPUT_DIR, name))
    )

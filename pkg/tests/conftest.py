"""
Shared fixtures: fluid/capillary parameters and small box models
"""
import numpy as np
import pytest

from assembly.flow import FlowModel
from assembly.state import BoundaryCondition, StateVector
from config.schemas import (
    BoundaryConditionSpec, BoundaryKind, BoundaryRegion, FluidParams, Side, VanGenuchtenParams
)
from physics.constitutive import gas_pressure
from physics.mesh import RockField, assign_boundary_tags, build_mesh


@pytest.fixture
def fluid():
    return FluidParams()


@pytest.fixture
def vg():
    return VanGenuchtenParams()


def injection_region(side: Side, hydrogen_flux: float) -> BoundaryRegion:
    return BoundaryRegion(
        name="inlet",
        side=side,
        condition=BoundaryConditionSpec(kind=BoundaryKind.NEUMANN, hydrogen_flux=hydrogen_flux)
    )


def outlet_region(side: Side) -> BoundaryRegion:
    return BoundaryRegion(
        name="outlet",
        side=side,
        condition=BoundaryConditionSpec(
            kind=BoundaryKind.DIRICHLET, pressure=1e6, saturation=1.0, concentration=0.0
        )
    )


@pytest.fixture
def make_model(fluid, vg):
    """Factory: box model with optional boundary regions"""

    def _make(dims=(4, 1, 1), cell_size=(1.0, 1.0, 1.0), permeability=1e-18, porosity=0.2,
              regions=(), gravity=(0.0, 0.0, 0.0), van_genuchten=None):
        mesh = build_mesh(dims, cell_size)
        rock = RockField.uniform(mesh.n_cells, permeability, porosity)
        tags = assign_boundary_tags(mesh, regions)
        conditions = [BoundaryCondition.from_spec(r.condition) for r in regions]
        return FlowModel(mesh, rock, fluid, van_genuchten or vg, conditions, tags, gravity)

    return _make


def gas_state(model: FlowModel, pressure, saturation) -> StateVector:
    """State with dissolved hydrogen at Henry equilibrium with the gas"""
    n = model.n_cells
    pressure = np.broadcast_to(np.asarray(pressure, dtype=float), (n,)).copy()
    saturation = np.broadcast_to(np.asarray(saturation, dtype=float), (n,)).copy()
    rho = model.fluid.henry_coefficient * gas_pressure(pressure, saturation, model.vg)
    return StateVector(pressure, saturation, rho)

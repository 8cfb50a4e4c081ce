"""
Fully implicit finite-volume discretization of the water and hydrogen mass
balances: backward Euler in time, two-point fluxes with phase-potential
upwinding, Fickian diffusion of dissolved hydrogen.

Residual rows are ordered [water (N), hydrogen (N)]; Jacobian columns
follow the stacked unknowns [P_l (N), S_l (N), rho_l^h (N)].
"""
import logging
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from assembly.state import BoundaryCondition, StateVector
from config.schemas import FluidParams, VanGenuchtenParams
from physics.constitutive import Phase, capillary_pressure, mobility_with_derivative
from physics.mesh import (
    CartesianMesh, RockField, boundary_transmissibilities, transmissibilities
)

logger = logging.getLogger(__name__)

PRESSURE, SATURATION, CONCENTRATION = 0, 1, 2


class CellProps(NamedTuple):
    pressure: np.ndarray
    saturation: np.ndarray
    concentration: np.ndarray
    gas_pressure: np.ndarray
    dpc: np.ndarray
    lam_l: np.ndarray
    dlam_l: np.ndarray
    lam_g: np.ndarray
    dlam_g: np.ndarray

    def take(self, index: np.ndarray) -> "CellProps":
        return CellProps(*(field[index] for field in self))


def cell_props(pressure, saturation, concentration, fluid: FluidParams, vg: VanGenuchtenParams) -> CellProps:
    pc, dpc = capillary_pressure(saturation, vg)
    lam_l, dlam_l = mobility_with_derivative(Phase.LIQUID, saturation, fluid, vg)
    lam_g, dlam_g = mobility_with_derivative(Phase.GAS, saturation, fluid, vg)
    pressure = np.asarray(pressure, dtype=float)
    return CellProps(
        pressure, np.asarray(saturation, dtype=float), np.asarray(concentration, dtype=float),
        pressure + pc, dpc, lam_l, dlam_l, lam_g, dlam_g
    )


class FlowModel:
    """
    Discrete problem definition: mesh, rock, fluid, boundary data.

    Each boundary face carries one condition: ``boundary_tags[b]`` indexes
    ``boundary_conditions`` and -1 means impervious.
    """

    def __init__(
        self,
        mesh: CartesianMesh,
        rock: RockField,
        fluid: FluidParams,
        vg: VanGenuchtenParams,
        boundary_conditions: Sequence[BoundaryCondition] = (),
        boundary_tags: Optional[np.ndarray] = None,
        gravity: Sequence[float] = (0.0, 0.0, 0.0)
    ):
        rock.check_mesh(mesh)
        self.mesh = mesh
        self.rock = rock
        self.fluid = fluid
        self.vg = vg
        self.gravity = np.asarray(gravity, dtype=float)
        self.boundary_conditions = list(boundary_conditions)

        nb = mesh.n_boundary_faces
        tags = np.full(nb, -1, dtype=np.int64) if boundary_tags is None else np.asarray(boundary_tags, dtype=np.int64)
        if tags.size != nb:
            raise ValueError(f"Expected {nb} boundary tags, got {tags.size}")
        if tags.size and tags.max() >= len(self.boundary_conditions):
            raise ValueError("Boundary tag refers to a missing condition")
        self.boundary_tags = tags

        # interior connections
        self.transmissibility = transmissibilities(mesh, rock)
        self.diffusion_geometry = mesh.face_area_values / mesh.face_distance
        self.face_gravity = (mesh.centers[mesh.face_right] - mesh.centers[mesh.face_left]) @ self.gravity

        # boundary data per face
        self.neumann_water = np.zeros(nb)
        self.neumann_hydrogen = np.zeros(nb)
        dirichlet = np.zeros(nb, dtype=bool)
        ghost_values = np.zeros((3, nb))
        for index, bc in enumerate(self.boundary_conditions):
            selected = tags == index
            if bc.is_dirichlet:
                dirichlet[selected] = True
                ghost_values[:, selected] = np.array([[bc.pressure], [bc.saturation], [bc.concentration]])
            else:
                self.neumann_water[selected] = bc.water_flux
                self.neumann_hydrogen[selected] = bc.hydrogen_flux

        self.dirichlet_faces = np.flatnonzero(dirichlet)
        d = self.dirichlet_faces
        self.ghost_cells = mesh.bface_cell[d]
        self.ghost_values = ghost_values[:, d]
        self.ghost_transmissibility = boundary_transmissibilities(mesh, rock)[d]
        self.ghost_diffusion_geometry = mesh.bface_area[d] / mesh.bface_half[d]
        self.ghost_gravity = (mesh.bface_center[d] - mesh.centers[self.ghost_cells]) @ self.gravity
        self.ghost_props = cell_props(*self.ghost_values, fluid, vg)

        n = mesh.n_cells
        self.water_source = np.bincount(mesh.bface_cell, self.neumann_water * mesh.bface_area, minlength=n)
        self.hydrogen_source = np.bincount(mesh.bface_cell, self.neumann_hydrogen * mesh.bface_area, minlength=n)
        # pore volume
        self.pore_volume = mesh.volumes * rock.porosity

        logger.debug(
            f"FlowModel: {n} cells, {mesh.n_interior_faces} interior faces, "
            f"{d.size} Dirichlet faces"
        )

    @property
    def n_cells(self) -> int:
        return self.mesh.n_cells

    def props(self, state: StateVector) -> CellProps:
        return cell_props(state.pressure, state.saturation, state.concentration, self.fluid, self.vg)


def _connection_fluxes(
    fluid: FluidParams,
    left: CellProps,
    right: CellProps,
    phi_left: np.ndarray,
    phi_right: np.ndarray,
    trans: np.ndarray,
    geom: np.ndarray,
    gdx: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Water and hydrogen mass fluxes from left to right over a set of
    connections, with derivatives shaped (side, variable, connection).
    """
    rho_w = fluid.water_density
    cv = fluid.gas_coefficient
    diff_coef = fluid.diffusion_coefficient
    nf = trans.size

    # liquid potential difference
    dphi_l = left.pressure - right.pressure + (rho_w + 0.5 * (left.concentration + right.concentration)) * gdx
    d_dphi_l = np.zeros((2, 3, nf))
    d_dphi_l[0, PRESSURE] = 1.0
    d_dphi_l[1, PRESSURE] = -1.0
    d_dphi_l[0, CONCENTRATION] = 0.5 * gdx
    d_dphi_l[1, CONCENTRATION] = 0.5 * gdx

    # gas potential difference, rho_g = C_v P_g
    dphi_g = left.gas_pressure - right.gas_pressure + 0.5 * cv * (left.gas_pressure + right.gas_pressure) * gdx
    grow_left = 1.0 + 0.5 * cv * gdx
    grow_right = -1.0 + 0.5 * cv * gdx
    d_dphi_g = np.zeros((2, 3, nf))
    d_dphi_g[0, PRESSURE] = grow_left
    d_dphi_g[0, SATURATION] = left.dpc * grow_left
    d_dphi_g[1, PRESSURE] = grow_right
    d_dphi_g[1, SATURATION] = right.dpc * grow_right

    # upwinding, ties to the left cell
    up_l = (dphi_l >= 0.0).astype(float)
    up_g = (dphi_g >= 0.0).astype(float)

    lam_l = up_l * left.lam_l + (1.0 - up_l) * right.lam_l
    d_lam_l = np.zeros((2, 3, nf))
    d_lam_l[0, SATURATION] = up_l * left.dlam_l
    d_lam_l[1, SATURATION] = (1.0 - up_l) * right.dlam_l

    lam_g = up_g * left.lam_g + (1.0 - up_g) * right.lam_g
    d_lam_g = np.zeros((2, 3, nf))
    d_lam_g[0, SATURATION] = up_g * left.dlam_g
    d_lam_g[1, SATURATION] = (1.0 - up_g) * right.dlam_g

    adv_l = trans * lam_l * dphi_l
    d_adv_l = trans * (d_lam_l * dphi_l + lam_l * d_dphi_l)
    adv_g = trans * lam_g * dphi_g
    d_adv_g = trans * (d_lam_g * dphi_g + lam_g * d_dphi_g)

    rho_up = up_l * left.concentration + (1.0 - up_l) * right.concentration
    d_rho_up = np.zeros((2, 3, nf))
    d_rho_up[0, CONCENTRATION] = up_l
    d_rho_up[1, CONCENTRATION] = 1.0 - up_l

    pg_up = up_g * left.gas_pressure + (1.0 - up_g) * right.gas_pressure
    d_pg_up = np.zeros((2, 3, nf))
    d_pg_up[0, PRESSURE] = up_g
    d_pg_up[0, SATURATION] = up_g * left.dpc
    d_pg_up[1, PRESSURE] = 1.0 - up_g
    d_pg_up[1, SATURATION] = (1.0 - up_g) * right.dpc

    # Fick: arithmetic mean of phi * S_l * D at the face
    coef = geom * diff_coef * 0.5 * (phi_left * left.saturation + phi_right * right.saturation)
    dconc = left.concentration - right.concentration
    diffusion = coef * dconc
    d_diffusion = np.zeros((2, 3, nf))
    d_diffusion[0, SATURATION] = geom * diff_coef * 0.5 * phi_left * dconc
    d_diffusion[1, SATURATION] = geom * diff_coef * 0.5 * phi_right * dconc
    d_diffusion[0, CONCENTRATION] = coef
    d_diffusion[1, CONCENTRATION] = -coef

    water = rho_w * adv_l - diffusion
    d_water = rho_w * d_adv_l - d_diffusion

    hydrogen = rho_up * adv_l + cv * pg_up * adv_g + diffusion
    d_hydrogen = (
        d_rho_up * adv_l + rho_up * d_adv_l
        + cv * (d_pg_up * adv_g + pg_up * d_adv_g)
        + d_diffusion
    )
    return water, hydrogen, d_water, d_hydrogen


def _interior_fluxes(model: FlowModel, props: CellProps):
    mesh = model.mesh
    phi = model.rock.porosity
    return _connection_fluxes(
        model.fluid,
        props.take(mesh.face_left), props.take(mesh.face_right),
        phi[mesh.face_left], phi[mesh.face_right],
        model.transmissibility, model.diffusion_geometry, model.face_gravity
    )


def _ghost_fluxes(model: FlowModel, props: CellProps):
    cells = model.ghost_cells
    phi = model.rock.porosity[cells]
    return _connection_fluxes(
        model.fluid,
        props.take(cells), model.ghost_props,
        phi, phi,
        model.ghost_transmissibility, model.ghost_diffusion_geometry, model.ghost_gravity
    )


def hydrogen_content(props: CellProps, fluid: FluidParams) -> np.ndarray:
    """Hydrogen mass per unit pore volume: rho_l^h S_l + C_v P_g (1 - S_l)"""
    s = props.saturation
    return props.concentration * s + fluid.gas_coefficient * props.gas_pressure * (1.0 - s)


def residual_pde(
    model: FlowModel,
    state: StateVector,
    state_old: StateVector,
    dt: float
) -> np.ndarray:
    """
    Mass balance residual H (length 2N) of one backward Euler step

    Args:
        model: Discrete problem
        state: Current iterate of the new time level
        state_old: Converged state of the previous time level
        dt: Time step (s)

    Returns:
        [water residuals, hydrogen residuals] in kg/s
    """
    residual, _ = _evaluate(model, state, state_old, dt, with_jacobian=False)
    return residual


def jacobian_pde(
    model: FlowModel,
    state: StateVector,
    state_old: StateVector,
    dt: float
) -> sp.csr_matrix:
    """Analytic Jacobian (2N x 3N) of residual_pde, upwind directions frozen"""
    _, jacobian = _evaluate(model, state, state_old, dt, with_jacobian=True)
    return jacobian


def residual_and_jacobian(
    model: FlowModel,
    state: StateVector,
    state_old: StateVector,
    dt: float
) -> Tuple[np.ndarray, sp.csr_matrix]:
    return _evaluate(model, state, state_old, dt, with_jacobian=True)


def _evaluate(model: FlowModel, state: StateVector, state_old: StateVector, dt: float, with_jacobian: bool):
    if dt <= 0:
        raise ValueError(f"Time step must be positive, got {dt}")
    n = model.n_cells
    if state.n_cells != n or state_old.n_cells != n:
        raise ValueError(f"State size does not match mesh ({n} cells)")

    fluid = model.fluid
    mesh = model.mesh
    props = model.props(state)
    props_old = model.props(state_old)
    scale = model.pore_volume / dt

    # accumulation
    acc_w = scale * fluid.water_density * (props.saturation - props_old.saturation)
    acc_h = scale * (hydrogen_content(props, fluid) - hydrogen_content(props_old, fluid))

    fw, fh, dfw, dfh = _interior_fluxes(model, props)
    gw, gh, dgw, dgh = _ghost_fluxes(model, props)

    left, right = mesh.face_left, mesh.face_right
    res_w = (
        acc_w
        + np.bincount(left, fw, minlength=n) - np.bincount(right, fw, minlength=n)
        + np.bincount(model.ghost_cells, gw, minlength=n)
        - model.water_source
    )
    res_h = (
        acc_h
        + np.bincount(left, fh, minlength=n) - np.bincount(right, fh, minlength=n)
        + np.bincount(model.ghost_cells, gh, minlength=n)
        - model.hydrogen_source
    )
    residual = np.concatenate([res_w, res_h])
    if not with_jacobian:
        return residual, None

    cells = np.arange(n)
    s = props.saturation
    cv = fluid.gas_coefficient
    rows = [cells, n + cells, n + cells, n + cells]
    cols = [n + cells, cells, n + cells, 2 * n + cells]
    vals = [
        scale * fluid.water_density * np.ones(n),
        scale * cv * (1.0 - s),
        scale * (props.concentration + cv * props.dpc * (1.0 - s) - cv * props.gas_pressure),
        scale * s,
    ]

    sides = (left, right)
    for offset, d_flux in ((0, dfw), (n, dfh)):
        for side, side_cells in enumerate(sides):
            for var in range(3):
                col = var * n + side_cells
                rows += [offset + left, offset + right]
                cols += [col, col]
                vals += [d_flux[side, var], -d_flux[side, var]]
        for var in range(3):
            rows.append(offset + model.ghost_cells)
            cols.append(var * n + model.ghost_cells)
            vals.append((dgw if offset == 0 else dgh)[0, var])

    jacobian = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(2 * n, 3 * n)
    ).tocsr()
    jacobian.sum_duplicates()
    return residual, jacobian


def boundary_fluxes(model: FlowModel, state: StateVector) -> Tuple[np.ndarray, np.ndarray]:
    """
    Water and hydrogen mass flux (kg/s) through every boundary face,
    positive out of the domain
    """
    mesh = model.mesh
    water = -model.neumann_water * mesh.bface_area
    hydrogen = -model.neumann_hydrogen * mesh.bface_area
    gw, gh, _, _ = _ghost_fluxes(model, model.props(state))
    water[model.dirichlet_faces] = gw
    hydrogen[model.dirichlet_faces] = gh
    return water, hydrogen


def mass_inventory(
    state: StateVector,
    mesh: CartesianMesh,
    rock: RockField,
    fluid: FluidParams,
    vg: VanGenuchtenParams
) -> Tuple[float, float]:
    """
    Total water and hydrogen mass (kg) in the domain
    """
    props = cell_props(state.pressure, state.saturation, state.concentration, fluid, vg)
    pore_volume = mesh.volumes * rock.porosity
    water = float(np.sum(pore_volume * fluid.water_density * props.saturation))
    hydrogen = float(np.sum(pore_volume * hydrogen_content(props, fluid)))
    return water, hydrogen

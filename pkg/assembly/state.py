"""
Primary unknowns and boundary conditions
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.schemas import BoundaryConditionSpec, BoundaryKind


@dataclass
class StateVector:
    """
    Per-cell liquid pressure (Pa), liquid saturation and dissolved hydrogen
    mass concentration (kg/m^3). Stacked as all P_l, then all S_l, then all
    rho_l^h.
    """
    pressure: np.ndarray
    saturation: np.ndarray
    concentration: np.ndarray

    def __post_init__(self):
        self.pressure = np.array(self.pressure, dtype=float).ravel()
        self.saturation = np.array(self.saturation, dtype=float).ravel()
        self.concentration = np.array(self.concentration, dtype=float).ravel()
        if not (self.pressure.size == self.saturation.size == self.concentration.size):
            raise ValueError("State arrays must have equal lengths")

    @property
    def n_cells(self) -> int:
        return self.pressure.size

    @property
    def gas_saturation(self) -> np.ndarray:
        return 1.0 - self.saturation

    @classmethod
    def uniform(cls, n_cells: int, pressure: float, saturation: float, concentration: float) -> "StateVector":
        return cls(
            np.full(n_cells, pressure),
            np.full(n_cells, saturation),
            np.full(n_cells, concentration)
        )

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "StateVector":
        x = np.asarray(x, dtype=float)
        if x.size % 3:
            raise ValueError(f"Stacked vector length {x.size} is not a multiple of 3")
        n = x.size // 3
        return cls(x[:n], x[n:2 * n], x[2 * n:])

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.pressure, self.saturation, self.concentration])

    def copy(self) -> "StateVector":
        return StateVector(self.pressure.copy(), self.saturation.copy(), self.concentration.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.to_vector())))


@dataclass(frozen=True)
class BoundaryCondition:
    """
    Condition on a boundary face. Neumann fluxes are SI (kg/m^2/s),
    positive into the domain.
    """
    kind: BoundaryKind = BoundaryKind.NEUMANN
    water_flux: float = 0.0
    hydrogen_flux: float = 0.0
    pressure: Optional[float] = None
    saturation: Optional[float] = None
    concentration: Optional[float] = None

    @classmethod
    def impervious(cls) -> "BoundaryCondition":
        return cls()

    @classmethod
    def neumann(cls, water_flux: float = 0.0, hydrogen_flux: float = 0.0) -> "BoundaryCondition":
        return cls(BoundaryKind.NEUMANN, water_flux=water_flux, hydrogen_flux=hydrogen_flux)

    @classmethod
    def dirichlet(cls, pressure: float, saturation: float, concentration: float) -> "BoundaryCondition":
        return cls(BoundaryKind.DIRICHLET, pressure=pressure, saturation=saturation, concentration=concentration)

    @classmethod
    def from_spec(cls, spec: BoundaryConditionSpec) -> "BoundaryCondition":
        if spec.kind is BoundaryKind.DIRICHLET:
            return cls.dirichlet(spec.pressure, spec.saturation, spec.concentration)
        return cls.neumann(spec.water_flux_si, spec.hydrogen_flux_si)

    @property
    def is_dirichlet(self) -> bool:
        return self.kind is BoundaryKind.DIRICHLET

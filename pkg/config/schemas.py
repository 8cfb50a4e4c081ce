"""
Simulation configuration schemas (Pydantic)
"""
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationInfo, field_validator, model_validator

from config import settings
from ncp.c_functions import CFunctionKind

Vector3 = Tuple[float, float, float]


class TimeUnit(str, Enum):
    """Units accepted for times in config files"""
    SECOND = "s"
    DAY = "day"
    YEAR = "year"

    @property
    def seconds(self) -> float:
        return {
            TimeUnit.SECOND: 1.0,
            TimeUnit.DAY: settings.SECONDS_PER_DAY,
            TimeUnit.YEAR: settings.SECONDS_PER_YEAR,
        }[self]


class FluxUnit(str, Enum):
    """Time base of boundary mass fluxes (kg/m^2 per ...)"""
    PER_SECOND = "per_second"
    PER_YEAR = "per_year"

    @property
    def seconds(self) -> float:
        return 1.0 if self is FluxUnit.PER_SECOND else settings.SECONDS_PER_YEAR


class BoundaryKind(str, Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


class Side(str, Enum):
    """Boundary sides of a box domain"""
    XMIN = "xmin"
    XMAX = "xmax"
    YMIN = "ymin"
    YMAX = "ymax"
    ZMIN = "zmin"
    ZMAX = "zmax"

    @property
    def axis(self) -> int:
        return "xyz".index(self.value[0])

    @property
    def is_upper(self) -> bool:
        return self.value.endswith("max")


class FluidParams(BaseModel):
    """Component and phase constants (SI units)"""
    liquid_viscosity: float = Field(1e-9, gt=0, description="mu_l (Pa s)")
    gas_viscosity: float = Field(9e-6, gt=0, description="mu_g (Pa s)")
    henry_constant: float = Field(7.65e-6, gt=0, description="H (mol/Pa/m^3)")
    hydrogen_molar_mass: float = Field(2e-3, gt=0, description="M_h (kg/mol)")
    water_molar_mass: float = Field(1e-2, gt=0, description="M_w (kg/mol)")
    diffusion_coefficient: float = Field(3e-9, gt=0, description="D (m^2/s)")
    water_density: float = Field(1e3, gt=0, description="rho_w (kg/m^3)")
    gas_constant: float = Field(settings.GAS_CONSTANT, gt=0, description="R (J/mol/K)")
    temperature: float = Field(settings.DEFAULT_TEMPERATURE, gt=0, description="T (K)")

    @property
    def henry_coefficient(self) -> float:
        """C_h = H * M_h (kg/m^3/Pa)"""
        return self.henry_constant * self.hydrogen_molar_mass

    @property
    def gas_coefficient(self) -> float:
        """C_v = M_h / (R T) (kg/m^3/Pa)"""
        return self.hydrogen_molar_mass / (self.gas_constant * self.temperature)


class VanGenuchtenParams(BaseModel):
    """Van Genuchten-Mualem parameters with the epsilon regularization"""
    entry_pressure: float = Field(2e6, gt=0, description="P_r (Pa)")
    n: float = Field(1.49, gt=1, description="Shape exponent")
    residual_liquid: float = Field(0.4, ge=0, lt=1, description="S_lr")
    residual_gas: float = Field(0.0, ge=0, lt=1, description="S_gr")
    epsilon: float = Field(1e-5, gt=0, lt=0.5, description="Regularization width in S_le")

    @model_validator(mode='after')
    def check_residuals(self):
        if self.residual_liquid + self.residual_gas >= 1.0:
            raise ValueError("residual_liquid + residual_gas must be < 1")
        return self

    @property
    def m(self) -> float:
        return 1.0 - 1.0 / self.n


class MeshSpec(BaseModel):
    dims: Tuple[int, int, int] = Field(..., description="Cell counts (nx, ny, nz)")
    cell_size: Vector3 = Field(..., description="Cell edge lengths (m)")
    origin: Vector3 = (0.0, 0.0, 0.0)

    @field_validator('dims')
    @classmethod
    def check_dims(cls, v):
        if any(d < 1 for d in v):
            raise ValueError(f"All mesh dims must be >= 1, got {v}")
        return v

    @field_validator('cell_size')
    @classmethod
    def check_sizes(cls, v):
        if any(h <= 0 for h in v):
            raise ValueError(f"All cell sizes must be > 0, got {v}")
        return v

    @property
    def n_cells(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]


class SyntheticFieldSpec(BaseModel):
    """Seeded, spatially correlated random rock field"""
    seed: int = 0
    permeability_range: Tuple[float, float] = (1.377e-20, 2.117e-15)
    porosity_range: Optional[Tuple[float, float]] = None
    correlation_length: float = Field(2.0, ge=0, description="Gaussian filter width in cells")

    @field_validator('permeability_range', 'porosity_range')
    @classmethod
    def check_range(cls, v):
        if v is not None and not 0 < v[0] <= v[1]:
            raise ValueError(f"Range must satisfy 0 < min <= max, got {v}")
        return v


def _resolve_path(v: Optional[str], info: ValidationInfo) -> Optional[str]:
    if v is None:
        return v
    path = Path(v)
    base_dir = (info.context or {}).get('base_dir')
    if not path.is_absolute() and base_dir is not None:
        path = Path(base_dir) / path
    if not path.exists():
        raise ValueError(f"File not found: {path}")
    return str(path)


class RockSpec(BaseModel):
    """Rock properties: constants, raster files or a synthetic field"""
    permeability: Optional[float] = Field(None, gt=0, description="Constant K (m^2)")
    porosity: Optional[float] = Field(None, gt=0, le=1, description="Constant phi")
    permeability_file: Optional[str] = None
    porosity_file: Optional[str] = None
    permeability_scale: float = Field(1.0, gt=0, description="Factor applied to raster permeability")
    synthetic: Optional[SyntheticFieldSpec] = None

    @field_validator('permeability_file', 'porosity_file')
    @classmethod
    def check_file(cls, v, info: ValidationInfo):
        return _resolve_path(v, info)

    @model_validator(mode='after')
    def check_sources(self):
        if self.permeability is None and self.permeability_file is None and self.synthetic is None:
            raise ValueError("Rock needs permeability, permeability_file or synthetic")
        has_porosity_range = self.synthetic is not None and self.synthetic.porosity_range is not None
        if self.porosity is None and self.porosity_file is None and not has_porosity_range:
            raise ValueError("Rock needs porosity, porosity_file or synthetic.porosity_range")
        return self


class BoundaryConditionSpec(BaseModel):
    """
    Neumann: water/hydrogen mass fluxes, positive into the domain.
    Dirichlet: liquid pressure, liquid saturation, dissolved hydrogen.
    """
    kind: BoundaryKind = BoundaryKind.NEUMANN
    water_flux: float = 0.0
    hydrogen_flux: float = 0.0
    flux_unit: FluxUnit = FluxUnit.PER_SECOND
    pressure: Optional[float] = None
    saturation: Optional[float] = None
    concentration: Optional[float] = Field(None, ge=0)

    @model_validator(mode='after')
    def check_dirichlet(self):
        if self.kind is BoundaryKind.DIRICHLET:
            if None in (self.pressure, self.saturation, self.concentration):
                raise ValueError("Dirichlet condition needs pressure, saturation and concentration")
        return self

    @property
    def water_flux_si(self) -> float:
        return self.water_flux / self.flux_unit.seconds

    @property
    def hydrogen_flux_si(self) -> float:
        return self.hydrogen_flux / self.flux_unit.seconds


class BoundaryRegion(BaseModel):
    """
    Boundary faces on one side, optionally restricted to a box on the face
    centers. Later regions override earlier ones; unmatched faces are
    impervious.
    """
    name: str = ""
    side: Side
    lower: Optional[Vector3] = None
    upper: Optional[Vector3] = None
    condition: BoundaryConditionSpec


class InitialStateSpec(BaseModel):
    pressure: float = 1e6
    saturation: float = 1.0
    concentration: float = Field(0.0, ge=0)


class NewtonConfig(BaseModel):
    """Nonlinear solver controls"""
    method: CFunctionKind = CFunctionKind.SMOOTH_FISCHER_BURMEISTER
    tolerance: float = Field(settings.NONLINEAR_TOLERANCE, gt=0)
    max_iterations: int = Field(settings.MAX_NEWTON_ITERATIONS, ge=1)
    initial_tau: float = Field(1e-6, ge=0, description="Initial smoothing parameter")
    tau_reduction: float = Field(settings.SMOOTHING_REDUCTION, gt=0, lt=1, description="beta")
    tau_floor: float = Field(settings.SMOOTHING_FLOOR, ge=0)
    residual_scaling: bool = True
    inexact_linear_tolerance: float = Field(
        settings.INEXACT_LINEAR_TOLERANCE, gt=0,
        description="Accepted relative residual of a non-converged linear solve"
    )
    max_divergent_iterations: int = Field(
        settings.MAX_DIVERGENT_ITERATIONS, ge=0,
        description="Consecutive residual increases that end a step as diverged (0 disables)"
    )
    max_residual_growth: float = Field(
        settings.MAX_RESIDUAL_GROWTH, gt=1,
        description="Residual growth over the first residual of the step that ends it as diverged"
    )

    @model_validator(mode='after')
    def check_tau(self):
        if self.initial_tau < self.tau_floor:
            raise ValueError("initial_tau must be >= tau_floor")
        return self


class GmresConfig(BaseModel):
    restart: int = Field(settings.GMRES_RESTART, ge=1)
    max_iterations: int = Field(settings.GMRES_MAX_ITERATIONS, ge=1)
    tolerance: float = Field(settings.GMRES_TOLERANCE, gt=0)


class PreconditionerConfig(BaseModel):
    enabled: bool = True
    drop_tolerance: float = Field(settings.ILU_DROP_TOLERANCE, ge=0)
    fill_factor: float = Field(settings.ILU_FILL_FACTOR, ge=1)


class TimeSpec(BaseModel):
    unit: TimeUnit = TimeUnit.SECOND
    initial_dt: float = Field(..., gt=0)
    end_time: float = Field(..., gt=0)
    dt_min: Optional[float] = Field(None, gt=0)
    dt_max: Optional[float] = Field(None, gt=0)

    @model_validator(mode='after')
    def check_bounds(self):
        if self.dt_min is not None and self.dt_max is not None and self.dt_min > self.dt_max:
            raise ValueError("dt_min must not exceed dt_max")
        return self

    def seconds(self, value: float) -> float:
        return value * self.unit.seconds

    @property
    def initial_dt_seconds(self) -> float:
        return self.seconds(self.initial_dt)

    @property
    def end_time_seconds(self) -> float:
        return self.seconds(self.end_time)

    @property
    def dt_min_seconds(self) -> float:
        if self.dt_min is not None:
            return self.seconds(self.dt_min)
        return settings.DT_MIN_FRACTION * self.initial_dt_seconds

    @property
    def dt_max_seconds(self) -> float:
        if self.dt_max is not None:
            return self.seconds(self.dt_max)
        return settings.DT_MAX_FRACTION * self.end_time_seconds


class OutputSpec(BaseModel):
    directory: str = settings.OUTPUT_DIR
    snapshot_times: List[float] = Field(default_factory=list, description="In the time unit")
    write_vtk: bool = True
    write_ledger: bool = True
    plot: bool = False
    export_matrix: bool = Field(False, description="Write the first Newton matrix as MatrixMarket")


class SimulationConfig(BaseModel):
    """Complete description of one simulation run"""
    name: str = "simulation"
    mesh: MeshSpec
    rock: RockSpec
    fluid: FluidParams = Field(default_factory=FluidParams)
    van_genuchten: VanGenuchtenParams = Field(default_factory=VanGenuchtenParams)
    gravity: Vector3 = (0.0, 0.0, 0.0)
    boundaries: List[BoundaryRegion] = Field(default_factory=list)
    initial: InitialStateSpec = Field(default_factory=InitialStateSpec)
    solver: NewtonConfig = Field(default_factory=NewtonConfig)
    gmres: GmresConfig = Field(default_factory=GmresConfig)
    preconditioner: PreconditionerConfig = Field(default_factory=PreconditionerConfig)
    time: TimeSpec
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode='after')
    def check_snapshots(self):
        for t in self.output.snapshot_times:
            if not 0 < t <= self.time.end_time:
                raise ValueError(f"Snapshot time {t} outside (0, end_time]")
        return self


def load_config(path: str) -> SimulationConfig:
    """
    Load and validate a JSON config file

    Relative file paths inside the config are resolved against the
    config file's directory.
    """
    path = Path(path)
    return SimulationConfig.model_validate_json(
        path.read_text(),
        context={'base_dir': str(path.parent)}
    )


def save_config(config: SimulationConfig, path: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(config.model_dump_json(indent=2))

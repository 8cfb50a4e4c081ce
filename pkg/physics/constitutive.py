"""
Constitutive laws
Van Genuchten-Mualem relative permeabilities, regularized capillary
pressure, mobilities, Henry's law and the ideal gas law, each with
analytic derivatives. All functions are vectorized over numpy arrays.
"""
from enum import Enum
from typing import TYPE_CHECKING, Tuple

import numpy as np

if TYPE_CHECKING:
    from config.schemas import FluidParams, VanGenuchtenParams


class Phase(str, Enum):
    LIQUID = "liquid"
    GAS = "gas"


def effective_saturation(S_l, vg: "VanGenuchtenParams"):
    """S_le = (S_l - S_lr) / (1 - S_lr - S_gr); not clipped"""
    return (np.asarray(S_l, dtype=float) - vg.residual_liquid) / (1.0 - vg.residual_liquid - vg.residual_gas)


def effective_saturation_derivative(vg: "VanGenuchtenParams") -> float:
    return 1.0 / (1.0 - vg.residual_liquid - vg.residual_gas)


def rel_perm_liquid(S_le, vg: "VanGenuchtenParams"):
    s = np.clip(np.asarray(S_le, dtype=float), 0.0, 1.0)
    m = vg.m
    return np.sqrt(s) * (1.0 - (1.0 - s ** (1.0 / m)) ** m) ** 2


def rel_perm_gas(S_le, vg: "VanGenuchtenParams"):
    s = np.clip(np.asarray(S_le, dtype=float), 0.0, 1.0)
    m = vg.m
    return np.sqrt(1.0 - s) * (1.0 - s ** (1.0 / m)) ** (2.0 * m)


def rel_perm_derivatives(S_le, vg: "VanGenuchtenParams") -> Tuple[np.ndarray, np.ndarray]:
    """
    (dkr_l/dS_le, dkr_g/dS_le)

    The slopes are frozen at their values at eps and 1 - eps on [0, eps]
    and [1 - eps, 1], while rel_perm_liquid and rel_perm_gas stay exact
    there. dkr_l is unbounded at S_le = 1 and dkr_g drops to zero with an
    infinite second derivative, so the frozen values act as secants
    across the end intervals. Zero outside [0, 1], where kr is clamped.
    """
    raw = np.asarray(S_le, dtype=float)
    s = np.clip(raw, vg.epsilon, 1.0 - vg.epsilon)
    m = vg.m
    u = s ** (1.0 / m)
    du = (1.0 / m) * s ** (1.0 / m - 1.0)

    w = 1.0 - (1.0 - u) ** m
    dw = m * (1.0 - u) ** (m - 1.0) * du
    dkr_l = 0.5 / np.sqrt(s) * w ** 2 + np.sqrt(s) * 2.0 * w * dw

    dkr_g = (
        -0.5 / np.sqrt(1.0 - s) * (1.0 - u) ** (2.0 * m)
        - np.sqrt(1.0 - s) * 2.0 * m * (1.0 - u) ** (2.0 * m - 1.0) * du
    )

    inside = (raw >= 0.0) & (raw <= 1.0)
    return np.where(inside, dkr_l, 0.0), np.where(inside, dkr_g, 0.0)


def _capillary_closed_form(s, vg: "VanGenuchtenParams"):
    m, n = vg.m, vg.n
    x = s ** (-1.0 / m) - 1.0
    value = vg.entry_pressure * x ** (1.0 / n)
    slope = vg.entry_pressure * (1.0 / n) * x ** (1.0 / n - 1.0) * (-1.0 / m) * s ** (-1.0 / m - 1.0)
    return value, slope


def capillary_pressure(S_l, vg: "VanGenuchtenParams") -> Tuple[np.ndarray, np.ndarray]:
    """
    Capillary pressure and its derivative with respect to S_l

    Closed form on S_le in [eps, 1 - eps], linear extrapolation with the
    junction slope outside. Continuous, C^1 and nonincreasing on R.

    Returns:
        (P_c in Pa, dP_c/dS_l in Pa)
    """
    se = effective_saturation(S_l, vg)
    sc = np.clip(se, vg.epsilon, 1.0 - vg.epsilon)
    value, slope = _capillary_closed_form(sc, vg)
    return value + slope * (se - sc), slope * effective_saturation_derivative(vg)


def gas_pressure(P_l, S_l, vg: "VanGenuchtenParams"):
    """P_g = P_l + P_c(S_l)"""
    pc, _ = capillary_pressure(S_l, vg)
    return np.asarray(P_l, dtype=float) + pc


def henry_coefficient(fluid: "FluidParams") -> float:
    """C_h = H * M_h"""
    return fluid.henry_coefficient


def ideal_gas_coefficient(fluid: "FluidParams") -> float:
    """C_v = M_h / (R T)"""
    return fluid.gas_coefficient


def gas_density(P_g, fluid: "FluidParams"):
    return fluid.gas_coefficient * np.asarray(P_g, dtype=float)


def mobility(phase: Phase, S_l, fluid: "FluidParams", vg: "VanGenuchtenParams"):
    """lambda = kr / mu of the given phase"""
    se = effective_saturation(S_l, vg)
    if Phase(phase) is Phase.LIQUID:
        return rel_perm_liquid(se, vg) / fluid.liquid_viscosity
    return rel_perm_gas(se, vg) / fluid.gas_viscosity


def mobility_with_derivative(
    phase: Phase,
    S_l,
    fluid: "FluidParams",
    vg: "VanGenuchtenParams"
) -> Tuple[np.ndarray, np.ndarray]:
    """(lambda, dlambda/dS_l)"""
    se = effective_saturation(S_l, vg)
    dkr_l, dkr_g = rel_perm_derivatives(se, vg)
    dse = effective_saturation_derivative(vg)
    if Phase(phase) is Phase.LIQUID:
        mu = fluid.liquid_viscosity
        return rel_perm_liquid(se, vg) / mu, dkr_l * dse / mu
    mu = fluid.gas_viscosity
    return rel_perm_gas(se, vg) / mu, dkr_g * dse / mu

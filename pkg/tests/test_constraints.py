"""
Tests for the phase-transition complementarity constraints
"""
import numpy as np
import pytest

from assembly.state import StateVector
from ncp.c_functions import CFunctionKind
from ncp.constraints import (
    active_set_partition, assemble_theta, complementarity_violation, constraint_arguments
)
from physics.constitutive import capillary_pressure


def test_constraint_arguments(fluid, vg):
    """a = 1 - S_l, b = C_h (P_l + P_c) - rho_l^h with per-cell gradients"""
    state = StateVector([1e6, 2e6], [1.0, 0.7], [0.0, 0.01])
    args = constraint_arguments(state, fluid, vg)
    pc, dpc = capillary_pressure(state.saturation, vg)
    ch = fluid.henry_coefficient

    np.testing.assert_allclose(args.a, [0.0, 0.3])
    np.testing.assert_allclose(args.b, ch * (state.pressure + pc) - state.concentration)
    np.testing.assert_array_equal(args.da, [[0, 0], [-1, -1], [0, 0]])
    np.testing.assert_allclose(args.db[0], ch)
    np.testing.assert_allclose(args.db[1], ch * dpc)
    np.testing.assert_array_equal(args.db[2], -1.0)
    assert args.n_cells == 2


@pytest.mark.parametrize("kind", list(CFunctionKind))
def test_theta_vanishes_on_saturated_equilibrium(fluid, vg, kind):
    """Liquid-only cells with no dissolved hydrogen satisfy every constraint"""
    state = StateVector.uniform(5, 1e6, 1.0, 0.0)
    theta = assemble_theta(kind, state, fluid, vg, tau=0.0)
    np.testing.assert_allclose(theta, 0.0, atol=1e-15)


def test_theta_vanishes_at_henry_equilibrium(fluid, vg):
    """Two-phase cells with rho_l^h = C_h P_g satisfy the constraint"""
    state = StateVector([1e6, 5e6], [0.6, 0.8], [0.0, 0.0])
    args = constraint_arguments(state, fluid, vg)
    state.concentration = args.b.copy()
    for kind in (CFunctionKind.MIN, CFunctionKind.FISCHER_BURMEISTER):
        np.testing.assert_allclose(assemble_theta(kind, state, fluid, vg), 0.0, atol=1e-15)


def test_theta_detects_supersaturation(fluid, vg):
    """Dissolved hydrogen above Henry's bound in a saturated cell violates b >= 0"""
    state = StateVector([1e6], [1.0], [1.0])
    assert assemble_theta("min", state, fluid, vg)[0] < 0


def test_active_set_partition():
    """A = {a >= b}, I the complement"""
    active, inactive = active_set_partition([0.5, 0.0, 0.2, 0.1], [0.1, 0.3, 0.2, 0.0])
    np.testing.assert_array_equal(active, [0, 2, 3])
    np.testing.assert_array_equal(inactive, [1])


def test_complementarity_violation():
    assert complementarity_violation([0.0, 0.5], [0.3, 0.0]) == 0.0
    assert complementarity_violation([0.1, -0.2], [0.3, 0.4]) == pytest.approx(0.2)
    assert complementarity_violation([], []) == 0.0

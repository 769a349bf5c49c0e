"""Cauchy stress from the energy derivatives, and a finite-difference tangent."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy_net import EnergyEvaluation, evaluate_energy
from .errors import IncompressibilityViolation, MissingPressure, UmatError
from .kinematics import (
    FiberSet,
    compute_invariants,
    invariant_gradients,
    make_deformation_state,
)
from .table import ParameterTable

ASYMMETRY_TOL = 1e-8
INCOMPRESSIBLE_J_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class StressState:
    sigma: np.ndarray
    fibers_current: tuple = ()
    energy: EnergyEvaluation | None = None


@dataclass(frozen=True, eq=False)
class TangentState:
    dsigma_dF: np.ndarray


def energy(table: ParameterTable, F, fibers: FiberSet) -> float:
    """Free energy per reference volume at deformation gradient ``F``."""
    state = make_deformation_state(F)
    inv = compute_invariants(state, fibers, table.mixed)
    return evaluate_energy(table, inv).UA


def stress_from_energy(table: ParameterTable, F, fibers: FiberSet) -> StressState:
    """sigma = (1/J) sum_i dpsi/dI_i dI_i/dF F^T, with no pressure handling.

    Works for any det F > 0, including incompressible tables (which then
    carry only the deviatoric response).
    """
    state = make_deformation_state(F)
    inv = compute_invariants(state, fibers, table.mixed)
    ev = evaluate_energy(table, inv)
    G = invariant_gradients(state, fibers)
    P = np.tensordot(ev.UI1, G, axes=1)
    sigma = (P @ state.F.T) / state.J
    # measured against the size of the terms before cancellation: sigma itself
    # may be pure round-off (e.g. at a rotated reference state)
    norm = np.abs(sigma).max()
    terms = np.abs(ev.UI1).sum() * max(np.abs(state.Cbar).max(), 1.0) * np.abs(state.F).max() ** 2 / state.J
    asym = np.abs(sigma - sigma.T).max()
    if asym > ASYMMETRY_TOL * max(norm, terms, 1e-300):
        raise UmatError(f"internal consistency: stress asymmetry {asym:.3e} (|sigma| = {norm:.3e})")
    sigma = 0.5 * (sigma + sigma.T)
    nbar = tuple(state.Fbar @ n for n in fibers.n0)
    return StressState(sigma, nbar, ev)


def cauchy_stress(table: ParameterTable, F, fibers: FiberSet, pressure: float | None = None) -> StressState:
    """Cauchy stress; for incompressible tables subtracts the supplied pressure."""
    F = np.asarray(F, dtype=float)
    if table.is_incompressible:
        if pressure is None:
            raise MissingPressure("incompressible table needs a hydrostatic pressure")
        J = np.linalg.det(F)
        if J > 0 and abs(J - 1.0) > INCOMPRESSIBLE_J_TOL:
            raise IncompressibilityViolation(f"det F = {J!r} for an incompressible table")
    st = stress_from_energy(table, F, fibers)
    if pressure is not None and pressure != 0.0:
        sigma = st.sigma - pressure * np.eye(3)
        return StressState(sigma, st.fibers_current, st.energy)
    return st


def _sigma(table, F, fibers, pressure, constrained):
    if constrained:
        return cauchy_stress(table, F, fibers, pressure).sigma
    return stress_from_energy(table, F, fibers).sigma


def stress_derivative(table, F, fibers, k, l, pressure=None, step=1e-6, constrained=False):
    """Central difference dsigma/dF_kl (3x3)."""
    F = np.asarray(F, dtype=float)
    E = np.zeros((3, 3))
    E[k, l] = step
    sp = _sigma(table, F + E, fibers, pressure, constrained)
    sm = _sigma(table, F - E, fibers, pressure, constrained)
    return (sp - sm) / (2.0 * step)


def tangent_fd(table: ParameterTable, F, fibers: FiberSet, pressure: float | None = None,
               step: float = 1e-6) -> TangentState:
    """dsigma_ij/dF_kl by central differences.

    Perturbed states of incompressible tables leave det F = 1, so the
    pressure is held fixed and the deviatoric assembly is differenced.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    F = np.asarray(F, dtype=float)
    if table.is_incompressible:
        # validates the unperturbed state and pressure
        cauchy_stress(table, F, fibers, pressure)
    T = np.empty((3, 3, 3, 3))
    for k in range(3):
        for l in range(3):
            T[:, :, k, l] = stress_derivative(table, F, fibers, k, l, step=step)
    return TangentState(T)

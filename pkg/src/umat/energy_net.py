"""Nested activation network: energy and its invariant derivatives.

Each table row is one neuron ``w2 * f2(f1(f0(x)))`` on the offset-corrected
invariant ``x = I - I0``. The energy and its first/second invariant
derivatives are accumulated additively over rows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTable, LogDomain, UnknownInvariantSlot
from .kinematics import MIXED_BASE, NBASE, InvariantState
from .table import NeuronRow, ParameterTable

NPACKED = NBASE * (NBASE + 1) // 2


def packed_index(i: int, j: int) -> int:
    """0-based position of the 1-based pair (i, j) in the packed UI2 array.

    Upper triangle, column-major: position ``i + j(j-1)/2`` counted from 1.
    """
    if i > j:
        i, j = j, i
    return i + j * (j - 1) // 2 - 1


def eval_f0(kf0: int, x: float):
    # df0 at the kink is taken as 0 for both bracket types
    if kf0 == 1:
        return x, 1.0, 0.0
    if kf0 == 2:
        if x > 0.0:
            return x, 1.0, 0.0
        return 0.0, 0.0, 0.0
    if kf0 == 3:
        if x > 0.0:
            return x, 1.0, 0.0
        if x < 0.0:
            return -x, -1.0, 0.0
        return 0.0, 0.0, 0.0
    raise ValueError(f"unknown zeroth-layer activation {kf0}")


def eval_f1(kf1: int, w0: float, x: float):
    m = int(kf1)
    if m < 1:
        raise ValueError(f"power must be >= 1, got {m}")
    wm = w0 ** m
    if m == 1:
        return w0 * x, w0, 0.0
    if m == 2:
        return wm * x * x, 2.0 * wm * x, 2.0 * wm
    return wm * x ** m, m * wm * x ** (m - 1), m * (m - 1) * wm * x ** (m - 2)


def eval_f2(kf2: int, w1: float, x: float):
    if kf2 == 1:
        return w1 * x, w1, 0.0
    if kf2 == 2:
        # expm1/log1p keep the energy accurate for small arguments
        e = math.exp(w1 * x)
        return math.expm1(w1 * x), w1 * e, w1 * w1 * e
    if kf2 == 3:
        arg = 1.0 - w1 * x
        if not arg > 0.0:
            raise LogDomain(f"-ln(1 - w1*x) undefined for w1*x = {w1 * x!r} >= 1")
        return -math.log1p(-w1 * x), w1 / arg, w1 * w1 / (arg * arg)
    raise ValueError(f"unknown second-layer activation {kf2}")


def ucann_neuron(xInv: float, row: NeuronRow):
    """Energy, first and second derivative of a single neuron at ``xInv``."""
    f0, df0, ddf0 = eval_f0(row.kf0, xInv)
    f1, df1, ddf1 = eval_f1(row.kf1, row.w0, f0)
    f2, df2, ddf2 = eval_f2(row.kf2, row.w1, f1)
    w2 = row.w2
    dUA = w2 * f2
    dUI1 = w2 * df2 * df1 * df0
    dUI2 = w2 * ((ddf2 * df1 ** 2 + df2 * ddf1) * df0 ** 2 + df2 * df1 * ddf0)
    return dUA, dUI1, dUI2


@dataclass(frozen=True, eq=False)
class EnergyEvaluation:
    """UA: energy; UI1: dpsi/dI per base slot (15); UI2: packed second derivatives (120)."""

    UA: float
    UI1: np.ndarray
    UI2: np.ndarray

    def hessian(self) -> np.ndarray:
        H = np.zeros((NBASE, NBASE))
        for j in range(1, NBASE + 1):
            for i in range(1, j + 1):
                H[i - 1, j - 1] = H[j - 1, i - 1] = self.UI2[packed_index(i, j)]
        return H

    def ui2(self, i: int, j: int) -> float:
        return float(self.UI2[packed_index(i, j)])


def evaluate_energy(table: ParameterTable, inv: InvariantState) -> EnergyEvaluation:
    """Accumulate every row of ``table``.

    Rows on a mixed slot fold their derivatives back onto the base slots:
    UI1_j += k_j * dpsi, UI2_ij += k_i * k_j * ddpsi.
    """
    UA = 0.0
    UI1 = np.zeros(NBASE)
    UI2 = np.zeros(NPACKED)
    if table.is_incompressible and any(r.kfinv == 3 for r in table.rows):
        raise InvalidTable("incompressible table contains volumetric (slot 3) rows")
    kappas = {m.index: np.asarray(m.kappa) for m in table.mixed}
    for row in table.rows:
        slot = row.kfinv
        if not inv.has_slot(slot):
            raise UnknownInvariantSlot(f"invariant slot {slot} is not defined")
        dA, d1, d2 = ucann_neuron(inv.shifted(slot), row)
        UA += dA
        if slot <= MIXED_BASE:
            UI1[slot - 1] += d1
            UI2[packed_index(slot, slot)] += d2
            continue
        if slot not in kappas:
            raise UnknownInvariantSlot(f"mixed slot {slot} has no coefficient row in the table")
        k = kappas[slot]
        nz = np.flatnonzero(k)
        UI1[nz] += k[nz] * d1
        if d2 != 0.0:
            for a in nz:
                for b in nz:
                    if a <= b:
                        UI2[packed_index(a + 1, b + 1)] += k[a] * k[b] * d2
    return EnergyEvaluation(UA, UI1, UI2)

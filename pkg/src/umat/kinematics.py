"""Deformation measures and the fifteen numbered invariants.

Slot numbering (1-based, as used by the parameter tables)::

    1   I1bar          2   I2bar          3   J
    4   I4(11)         5   I5(11)
    6   I4(12)         7   I5(12)         8   I4(22)      9   I5(22)
    10  I4(13)         11  I5(13)         12  I4(23)      13  I5(23)
    14  I4(33)         15  I5(33)

Arrays in this module are 0-based, so slot ``i`` lives at position ``i - 1``.
Mixed invariants (slots >= 101) are linear forms over the fifteen base slots.

Slot 3 stores J = det F (not J**2); the volumetric energies of the parameter
tables are written in terms of J.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidPair, NonPositiveJacobian

NBASE = 15
MIXED_BASE = 100

_KINDS = ("I1", "I2", "I3", "I4", "I5")


@dataclass(frozen=True, eq=False)
class DeformationState:
    F: np.ndarray
    J: float
    Fbar: np.ndarray
    b: np.ndarray
    C: np.ndarray
    bbar: np.ndarray
    Cbar: np.ndarray


def _sym(A):
    return 0.5 * (A + A.T)


def make_deformation_state(F) -> DeformationState:
    F = np.array(F, dtype=float).reshape(3, 3)
    if not np.all(np.isfinite(F)):
        raise ValueError("deformation gradient has non-finite entries")
    J = float(np.linalg.det(F))
    if not J > 0.0:
        raise NonPositiveJacobian(f"det F = {J!r} <= 0")
    Fbar = J ** (-1.0 / 3.0) * F
    # symmetrize to scrub round-off in the products
    C = _sym(F.T @ F)
    b = _sym(F @ F.T)
    Cbar = _sym(Fbar.T @ Fbar)
    bbar = _sym(Fbar @ Fbar.T)
    for arr in (F, Fbar, b, C, bbar, Cbar):
        arr.setflags(write=False)
    return DeformationState(F=F, J=J, Fbar=Fbar, b=b, C=C, bbar=bbar, Cbar=Cbar)


@dataclass(frozen=True, eq=False)
class FiberSet:
    """Up to three unit reference directions.

    Use :meth:`from_vectors` with ``normalize=True`` to accept non-unit input.
    """

    n0: tuple = ()

    def __post_init__(self):
        vecs = tuple(np.array(v, dtype=float).reshape(3) for v in self.n0)
        if len(vecs) > 3:
            raise ValueError(f"at most three fiber directions, got {len(vecs)}")
        for k, v in enumerate(vecs):
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise ValueError(
                    f"fiber direction {k + 1} is not a unit vector (|n| = {np.linalg.norm(v)!r})"
                )
            v.setflags(write=False)
        object.__setattr__(self, "n0", vecs)

    @classmethod
    def from_vectors(cls, vectors, normalize=False) -> "FiberSet":
        vecs = [np.asarray(v, dtype=float).reshape(3) for v in vectors]
        if normalize:
            vecs = [v / np.linalg.norm(v) for v in vecs]
        return cls(tuple(vecs))

    @classmethod
    def from_frame(cls, Q, ndir=3) -> "FiberSet":
        """First ``ndir`` columns of an orthonormal frame ``Q``."""
        Q = np.asarray(Q, dtype=float)
        return cls(tuple(Q[:, k] / np.linalg.norm(Q[:, k]) for k in range(ndir)))

    @property
    def ndir(self) -> int:
        return len(self.n0)

    @property
    def zeta(self) -> np.ndarray:
        n = self.ndir
        z = np.empty((n, n))
        for a in range(n):
            for b in range(n):
                # computed exactly as the invariants are at F = I, so that the
                # offset-corrected inputs vanish bit-for-bit in the reference state
                z[a, b] = self.n0[a] @ self.n0[b]
        return z

    def rotated(self, Q) -> "FiberSet":
        Q = np.asarray(Q, dtype=float)
        return FiberSet(tuple(Q @ v for v in self.n0))

    def __eq__(self, other):
        if not isinstance(other, FiberSet) or other.ndir != self.ndir:
            return NotImplemented if not isinstance(other, FiberSet) else False
        return all(np.array_equal(a, b) for a, b in zip(self.n0, other.n0))

    __hash__ = None


def invariant_index(kind: str, alpha: int | None = None, beta: int | None = None) -> int:
    """Slot number of an invariant; ``kind`` is one of I1..I5."""
    kind = kind.upper()
    if kind not in _KINDS:
        raise ValueError(f"unknown invariant kind {kind!r}")
    if kind in ("I1", "I2", "I3"):
        return int(kind[1])
    if alpha is None or beta is None:
        raise InvalidPair(f"{kind} needs a fiber pair (alpha, beta)")
    if not (1 <= alpha <= 3 and 1 <= beta <= 3):
        raise InvalidPair(f"fiber indices must lie in 1..3, got ({alpha}, {beta})")
    if beta < alpha:
        raise InvalidPair(f"beta < alpha in ({alpha}, {beta})")
    base = 4 if kind == "I4" else 5
    return base + 2 * (alpha - 1) + beta * (beta - 1)


def _build_slot_table():
    table = {1: ("I1", None, None), 2: ("I2", None, None), 3: ("I3", None, None)}
    for kind in ("I4", "I5"):
        for a in range(1, 4):
            for b in range(a, 4):
                table[invariant_index(kind, a, b)] = (kind, a, b)
    return table


SLOT_TABLE = _build_slot_table()


def slot_pair(slot: int):
    """Inverse of :func:`invariant_index`: ``(kind, alpha, beta)`` of a base slot."""
    return SLOT_TABLE[slot]


def ninv_for(ndir: int) -> int:
    """Number of leading slots touching only fibers 1..ndir."""
    return 3 + ndir * (ndir + 1)


@dataclass(frozen=True)
class MixedInvariantRow:
    index: int
    kappa: tuple

    def __post_init__(self):
        if self.index <= MIXED_BASE:
            raise ValueError(f"mixed invariant index must exceed {MIXED_BASE}, got {self.index}")
        kappa = tuple(float(k) for k in self.kappa)
        if len(kappa) != NBASE:
            raise ValueError(f"mixed invariant needs {NBASE} coefficients, got {len(kappa)}")
        object.__setattr__(self, "kappa", kappa)


@dataclass(frozen=True, eq=False)
class InvariantState:
    values: np.ndarray
    offsets: np.ndarray
    mixed_values: Mapping[int, float] = field(default_factory=dict)
    mixed_offsets: Mapping[int, float] = field(default_factory=dict)

    def value(self, slot: int) -> float:
        if slot > MIXED_BASE:
            return self.mixed_values[slot]
        return float(self.values[slot - 1])

    def offset(self, slot: int) -> float:
        if slot > MIXED_BASE:
            return self.mixed_offsets[slot]
        return float(self.offsets[slot - 1])

    def shifted(self, slot: int) -> float:
        """Offset-corrected invariant, the network input."""
        return self.value(slot) - self.offset(slot)

    def has_slot(self, slot: int) -> bool:
        return 1 <= slot <= NBASE or slot in self.mixed_values


def invariants_from_values(values, offsets, mixed: Sequence[MixedInvariantRow] = ()) -> InvariantState:
    """Assemble an InvariantState from raw base values, evaluating mixed rows."""
    values = np.array(values, dtype=float).reshape(NBASE)
    offsets = np.array(offsets, dtype=float).reshape(NBASE)
    mv, mo = {}, {}
    for row in mixed:
        k = np.asarray(row.kappa)
        mv[row.index] = float(k @ values)
        mo[row.index] = float(k @ offsets)
    values.setflags(write=False)
    offsets.setflags(write=False)
    return InvariantState(values, offsets, mv, mo)


def reference_offsets(fibers: FiberSet) -> np.ndarray:
    """Offsets of all fifteen slots; unused fiber pairs get identity-frame values."""
    off = np.zeros(NBASE)
    off[0] = 3.0
    off[1] = 3.0
    off[2] = 1.0
    zeta = fibers.zeta
    for slot in range(4, NBASE + 1):
        _, a, b = SLOT_TABLE[slot]
        if b <= fibers.ndir:
            off[slot - 1] = zeta[a - 1, b - 1]
        else:
            off[slot - 1] = 1.0 if a == b else 0.0
    return off


def compute_invariants(state: DeformationState, fibers: FiberSet,
                       mixed: Sequence[MixedInvariantRow] = ()) -> InvariantState:
    Cbar = state.Cbar
    Cbar2 = Cbar @ Cbar
    I1 = np.trace(Cbar)
    vals = np.empty(NBASE)
    vals[0] = I1
    vals[1] = 0.5 * (I1 * I1 - np.sum(Cbar * Cbar))
    vals[2] = state.J
    off = reference_offsets(fibers)
    n = fibers.n0
    for slot in range(4, NBASE + 1):
        kind, a, b = SLOT_TABLE[slot]
        if b > fibers.ndir:
            # unused pair: pinned to its offset so it contributes nothing
            vals[slot - 1] = off[slot - 1]
            continue
        M = Cbar if kind == "I4" else Cbar2
        vals[slot - 1] = n[a - 1] @ M @ n[b - 1]
    return invariants_from_values(vals, off, mixed)


def invariant_derivatives_cbar(state: DeformationState, fibers: FiberSet) -> np.ndarray:
    """Symmetric d(Ibar_i)/d(Cbar) for the deviatoric slots (slot 3 left zero)."""
    Cbar = state.Cbar
    I1 = np.trace(Cbar)
    eye = np.eye(3)
    A = np.zeros((NBASE, 3, 3))
    A[0] = eye
    A[1] = I1 * eye - Cbar
    n = fibers.n0
    for slot in range(4, NBASE + 1):
        kind, a, b = SLOT_TABLE[slot]
        if b > fibers.ndir:
            continue
        na, nb = n[a - 1], n[b - 1]
        if kind == "I4":
            A[slot - 1] = _sym(np.outer(na, nb))
        else:
            A[slot - 1] = _sym(np.outer(na, Cbar @ nb) + np.outer(Cbar @ na, nb))
    return A


def invariant_gradients(state: DeformationState, fibers: FiberSet) -> np.ndarray:
    """Analytic dI_i/dF for the fifteen slots, shape (15, 3, 3).

    Deviatoric slots carry the isochoric projection:
    dI/dF = 2 J^(-2/3) F A - (2/3) (A : Cbar) F^-T, with A = dI/dCbar.
    """
    F = state.F
    J = state.J
    FinvT = np.linalg.inv(F).T
    A = invariant_derivatives_cbar(state, fibers)
    G = np.zeros((NBASE, 3, 3))
    scale = 2.0 * J ** (-2.0 / 3.0)
    for i in range(NBASE):
        if i == 2:
            G[i] = J * FinvT
            continue
        if not A[i].any():
            continue
        G[i] = scale * (F @ A[i]) - (2.0 / 3.0) * np.sum(A[i] * state.Cbar) * FinvT
    return G

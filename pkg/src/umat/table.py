"""Parameter-table data types shared by the kernel and the deck parser."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .kinematics import MIXED_BASE, NBASE, MixedInvariantRow

MAX_POWER = 12


class MaterialType(str, Enum):
    INCOMPRESSIBLE = "INCOMPRESSIBLE"
    COMPRESSIBLE = "COMPRESSIBLE"


@dataclass(frozen=True)
class NeuronRow:
    """One additive term ``w2 * f2(f1(f0(I - I0)))`` of the free energy.

    kf0: 1 identity, 2 Macauley bracket, 3 absolute value.
    kf1: integer power m (1..12), first layer scaled by w0.
    kf2: 1 linear, 2 ``exp(.) - 1``, 3 ``-ln(1 - .)``, second layer scaled by w1.
    """

    kfinv: int
    kf0: int
    kf1: int
    kf2: int
    w0: float = 1.0
    w1: float = 1.0
    w2: float = 0.0

    def __post_init__(self):
        for name in ("kfinv", "kf0", "kf1", "kf2"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise ValueError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        for name in ("w0", "w1", "w2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (1 <= self.kfinv <= NBASE or self.kfinv > MIXED_BASE):
            raise ValueError(f"kfinv must be in 1..{NBASE} or > {MIXED_BASE}, got {self.kfinv}")
        if self.kf0 not in (1, 2, 3):
            raise ValueError(f"kf0 must be 1, 2 or 3, got {self.kf0}")
        if not 1 <= self.kf1 <= MAX_POWER:
            raise ValueError(f"kf1 must be in 1..{MAX_POWER}, got {self.kf1}")
        if self.kf2 not in (1, 2, 3):
            raise ValueError(f"kf2 must be 1, 2 or 3, got {self.kf2}")

    def as_tuple(self):
        return (self.kfinv, self.kf0, self.kf1, self.kf2, self.w0, self.w1, self.w2)


@dataclass(frozen=True)
class ParameterTable:
    material_type: MaterialType = MaterialType.COMPRESSIBLE
    ndir: int = 0
    rows: tuple = ()
    mixed: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "material_type", MaterialType(self.material_type))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "mixed", tuple(self.mixed))
        if not 0 <= self.ndir <= 3:
            raise ValueError(f"ndir must be in 0..3, got {self.ndir}")
        seen = set()
        for m in self.mixed:
            if not isinstance(m, MixedInvariantRow):
                raise TypeError("mixed entries must be MixedInvariantRow")
            if m.index in seen:
                raise ValueError(f"duplicate mixed invariant index {m.index}")
            seen.add(m.index)
        for r in self.rows:
            if not isinstance(r, NeuronRow):
                raise TypeError("rows must be NeuronRow instances")
            if r.kfinv > MIXED_BASE and r.kfinv not in seen:
                raise ValueError(f"row addresses undeclared mixed invariant {r.kfinv}")

    @property
    def is_incompressible(self) -> bool:
        return self.material_type is MaterialType.INCOMPRESSIBLE

    def mixed_row(self, index):
        for m in self.mixed:
            if m.index == index:
                return m
        raise KeyError(index)

    def slots(self) -> set:
        """Invariant slots addressed by the rows (mixed slots as declared)."""
        return {r.kfinv for r in self.rows}

    def single_row(self, k) -> "ParameterTable":
        return ParameterTable(self.material_type, self.ndir, (self.rows[k],), self.mixed)

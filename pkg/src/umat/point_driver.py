"""Homogeneous material-point load paths.

Each point builds a deformation gradient from the prescribed control value,
solves for the free stretches (and, for incompressible tables, the
hydrostatic pressure) so that the unloaded stress components vanish, and
records the Cauchy stress.

Modes
-----
uniaxial      F = diag(lam, lam2, lam3), sigma_22 = sigma_33 = 0
equibiaxial   F = diag(lam, lam, lam3), sigma_33 = 0
simple_shear  F = I + gamma e_a (x) e_b, J = 1; incompressible pressure from
              the out-of-plane normal stress sigma_cc = 0
volumetric    F = J^(1/3) I (compressible tables only)

An optional rotation ``frame`` maps the local load axes to the global
frame (F = Q F_loc Q^T); reported stresses are in the local load frame.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import LogDomain, NonPositiveJacobian, NoConvergence, StepFailure
from .input_deck import MaterialSpec
from .kinematics import FiberSet, compute_invariants, make_deformation_state
from .stress_tangent import stress_from_energy

MODES = ("uniaxial", "equibiaxial", "simple_shear", "volumetric")
_MODE_ALIASES = {"shear": "simple_shear"}
_REFERENCE = {"uniaxial": 1.0, "equibiaxial": 1.0, "simple_shear": 0.0, "volumetric": 1.0}

# fiber / sheet / normal axes for the myocardial shear modes
_FSN = {"f": 1, "s": 2, "n": 3}


def shear_mode_plane(mode: str) -> tuple:
    """Plane (a, b) for a two-letter shear mode such as ``"fs"``.

    The first letter is the normal of the sheared face, the second the
    direction of motion, so ``"fs"`` gives F = I + gamma e_s (x) e_f.
    """
    if len(mode) != 2 or mode[0] == mode[1] or any(c not in _FSN for c in mode):
        raise ValueError(f"shear mode must be two distinct letters of 'fsn', got {mode!r}")
    return (_FSN[mode[1]], _FSN[mode[0]])


@dataclass(frozen=True, eq=False)
class LoadPath:
    mode: str
    controls: tuple
    plane: tuple = (1, 2)
    fibers: FiberSet | None = None
    frame: np.ndarray | None = None

    def __post_init__(self):
        mode = _MODE_ALIASES.get(self.mode, self.mode)
        if mode not in MODES:
            raise ValueError(f"unknown load mode {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        ctrl = tuple(float(c) for c in self.controls)
        if not ctrl:
            raise ValueError("load path needs at least one control value")
        if ctrl[0] != _REFERENCE[mode]:
            raise ValueError(f"{mode} path must start at the reference value {_REFERENCE[mode]}")
        d = np.diff(ctrl)
        if len(d) and not (np.all(d > 0) or np.all(d < 0)):
            raise ValueError("control values must be strictly monotone")
        if mode in ("uniaxial", "equibiaxial", "volumetric") and min(ctrl) <= 0.0:
            raise ValueError("stretches and volume ratios must be positive")
        object.__setattr__(self, "controls", ctrl)
        a, b = (int(x) for x in self.plane)
        if a == b or {a, b} - {1, 2, 3}:
            raise ValueError(f"shear plane must be two distinct axes in 1..3, got {self.plane!r}")
        object.__setattr__(self, "plane", (a, b))
        if self.frame is not None:
            Q = np.array(self.frame, dtype=float)
            if Q.shape != (3, 3) or not np.allclose(Q @ Q.T, np.eye(3), atol=1e-12) \
                    or np.linalg.det(Q) <= 0:
                raise ValueError("frame must be a proper rotation")
            Q.setflags(write=False)
            object.__setattr__(self, "frame", Q)

    @classmethod
    def linspace(cls, mode, start, stop, num, **kw):
        return cls(mode, tuple(np.linspace(start, stop, int(num))), **kw)


@dataclass(frozen=True, eq=False)
class CurvePoint:
    control: float
    sigma: np.ndarray
    stretches: tuple
    pressure: float | None
    invariants: tuple
    iterations: int = 0
    residual: float = 0.0
    F: np.ndarray = field(default=None, repr=False)


class _Problem:
    """Residual of one control point as a function of the free unknowns."""

    def __init__(self, spec, path):
        self.table = spec.table
        self.fibers = path.fibers if path.fibers is not None else spec.fiber_set()
        self.Q = path.frame
        self.path = path
        self.inc = spec.table.is_incompressible
        if path.mode == "volumetric" and self.inc:
            raise ValueError("volumetric paths need a compressible table")
        a, b = path.plane
        self.a, self.b, self.c = a - 1, b - 1, 6 - a - b - 1

    def nunknown(self):
        m = self.path.mode
        if m == "uniaxial":
            return 1 if self.inc else 2
        if m == "equibiaxial":
            return 0 if self.inc else 1
        return 0

    def local_F(self, ctrl, x):
        m = self.path.mode
        if m == "uniaxial":
            if self.inc:
                return np.diag([ctrl, x[0], 1.0 / (ctrl * x[0])])
            return np.diag([ctrl, x[0], x[1]])
        if m == "equibiaxial":
            return np.diag([ctrl, ctrl, 1.0 / (ctrl * ctrl) if self.inc else x[0]])
        if m == "simple_shear":
            F = np.eye(3)
            F[self.a, self.b] = ctrl
            return F
        return np.cbrt(ctrl) * np.eye(3)

    def evaluate(self, ctrl, x):
        """(residual vector, local stress, pressure, global F)."""
        Fl = self.local_F(ctrl, x)
        F = Fl if self.Q is None else self.Q @ Fl @ self.Q.T
        s = stress_from_energy(self.table, F, self.fibers).sigma
        if self.Q is not None:
            s = self.Q.T @ s @ self.Q
        p = None
        m = self.path.mode
        if self.inc:
            p = s[self.c, self.c] if m == "simple_shear" else s[2, 2]
            s = s - p * np.eye(3)
        if m == "uniaxial":
            r = np.array([s[1, 1]]) if self.inc else np.array([s[1, 1], s[2, 2]])
        elif m == "equibiaxial" and not self.inc:
            r = np.array([s[2, 2]])
        else:
            r = np.zeros(0)
        return r, 0.5 * (s + s.T), p, F

    def initial_guess(self, ctrl, prev_ctrl, prev_x):
        n = self.nunknown()
        if n == 0:
            return np.zeros(0)
        expo = -0.5 if self.path.mode == "uniaxial" else -2.0
        base = ctrl ** expo
        if prev_x is None:
            return np.full(n, base)
        # carry over the previous deviation from the isotropic guess; for
        # isotropic tables the ratio is exactly one
        return base * (np.asarray(prev_x) / prev_ctrl ** expo)


def _fd_jacobian(prob, ctrl, x, r0):
    n = len(x)
    Jm = np.empty((len(r0), n))
    for k in range(n):
        h = 1e-7 * max(1.0, abs(x[k]))
        xp, xm = x.copy(), x.copy()
        xp[k] += h
        xm[k] -= h
        Jm[:, k] = (prob.evaluate(ctrl, xp)[0] - prob.evaluate(ctrl, xm)[0]) / (2.0 * h)
    return Jm


def _solve_point(prob, ctrl, x0, tol, max_iter):
    x = np.array(x0, dtype=float)
    r, s, p, F = prob.evaluate(ctrl, x)
    it = 0
    while True:
        res = float(np.abs(r).max()) if r.size else 0.0
        if res < tol * (1.0 + np.abs(s).max()):
            return x, s, p, F, it, res
        if it >= max_iter:
            raise NoConvergence(ctrl, res, it)
        it += 1
        Jm = _fd_jacobian(prob, ctrl, x, r)
        try:
            dx = np.linalg.solve(Jm, -r)
        except np.linalg.LinAlgError:
            raise NoConvergence(ctrl, res, it) from None
        step = 1.0
        while True:
            xn = x + step * dx
            if np.all(xn > 0.0):
                try:
                    rn, sn, pn, Fn = prob.evaluate(ctrl, xn)
                    if np.abs(rn).max() < res or step < 1e-3:
                        break
                except (LogDomain, NonPositiveJacobian):
                    pass
            step *= 0.5
            if step < 1e-6:
                raise NoConvergence(ctrl, res, it)
        x, r, s, p, F = xn, rn, sn, pn, Fn


def run_path(spec: MaterialSpec, path: LoadPath, tol: float = 1e-10, max_iter: int = 50) -> list:
    """Drive ``spec`` along ``path``; one CurvePoint per control value."""
    prob = _Problem(spec, path)
    out = []
    prev_ctrl = prev_x = None
    for ctrl in path.controls:
        x0 = prob.initial_guess(ctrl, prev_ctrl, prev_x)
        try:
            x, s, p, F, it, res = _solve_point(prob, ctrl, x0, tol, max_iter)
        except (LogDomain, NonPositiveJacobian) as exc:
            raise StepFailure(ctrl, exc) from exc
        inv = compute_invariants(make_deformation_state(F), prob.fibers, spec.table.mixed)
        Fl = prob.local_F(ctrl, x)
        out.append(CurvePoint(
            control=ctrl,
            sigma=s,
            stretches=(float(Fl[0, 0]), float(Fl[1, 1]), float(Fl[2, 2])),
            pressure=None if p is None else float(p),
            invariants=tuple(float(v) for v in inv.values),
            iterations=it,
            residual=res,
            F=F,
        ))
        prev_ctrl, prev_x = ctrl, x
    return out


_SIG = (("11", 0, 0), ("22", 1, 1), ("33", 2, 2), ("12", 0, 1), ("13", 0, 2), ("23", 1, 2))
_CONTROL_NAME = {"uniaxial": "lambda", "equibiaxial": "lambda", "simple_shear": "gamma",
                 "volumetric": "J"}


def _fmt(v: float) -> str:
    if v == 0.0:
        v = 0.0  # drop negative zero
    return format(v, ".9e")


def csv_header(mode="uniaxial", units="", plane=(1, 2), incompressible=False) -> list:
    mode = _MODE_ALIASES.get(mode, mode)
    u = f"[{units}]" if units else ""
    cols = [_CONTROL_NAME.get(mode, "control")]
    cols += [f"sigma_{k}{u}" for k, _, _ in _SIG]
    cols += ["lambda_1", "lambda_2", "lambda_3"]
    if incompressible:
        axis = 6 - sum(plane) if mode == "simple_shear" else 3
        cols.append(f"pressure{u}(sigma_{axis}{axis}=0)")
    else:
        cols.append(f"pressure{u}")
    cols += [f"I{i}" for i in range(1, 16)]
    return cols


def emit_csv(curve, mode="uniaxial", units="", plane=(1, 2)) -> str:
    """CSV text: control, six stress components (11, 22, 33, 12, 13, 23),
    three stretches, pressure (empty when compressible), invariants 1..15.
    Numbers use scientific notation with nine digits after the point."""
    curve = list(curve)
    if not curve:
        raise ValueError("empty curve")
    inc = curve[0].pressure is not None
    buf = io.StringIO()
    buf.write(",".join(csv_header(mode, units, plane, inc)) + "\n")
    for pt in curve:
        vals = [_fmt(pt.control)]
        vals += [_fmt(float(pt.sigma[i, j])) for _, i, j in _SIG]
        vals += [_fmt(v) for v in pt.stretches]
        vals.append("" if pt.pressure is None else _fmt(pt.pressure))
        vals += [_fmt(v) for v in pt.invariants]
        buf.write(",".join(vals) + "\n")
    return buf.getvalue()


def read_csv(text: str):
    """Parse emit_csv output back into (header, rows of floats or None)."""
    lines = text.splitlines()
    header = lines[0].split(",")
    rows = [[float(t) if t else None for t in ln.split(",")] for ln in lines[1:] if ln]
    return header, rows


def is_monotone_magnitude(values, rtol=1e-12) -> bool:
    """|values| non-decreasing (within a relative slack for roundoff)."""
    mags = np.abs(np.asarray(values, dtype=float))
    slack = rtol * max(float(mags.max(initial=0.0)), 1e-300)
    return bool(np.all(np.diff(mags) >= -slack))


def leading_component(curve, mode, plane=(1, 2)) -> np.ndarray:
    """The loaded stress component along a curve (sigma_11 or sigma_ab)."""
    if _MODE_ALIASES.get(mode, mode) == "simple_shear":
        a, b = plane
        return np.array([pt.sigma[a - 1, b - 1] for pt in curve])
    return np.array([pt.sigma[0, 0] for pt in curve])


__all__ = ["LoadPath", "CurvePoint", "run_path", "emit_csv", "read_csv", "csv_header",
           "shear_mode_plane", "is_monotone_magnitude", "leading_component", "MODES"]


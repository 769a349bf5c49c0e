"""Independent oracles: finite differences, closed forms, symmetry sampling.

Every check is deterministic for a given seed and records its result in a
:class:`CheckReport` instead of raising. Relative errors are measured
against the magnitude of the individual contributions that are summed (the
sum of per-row absolute values), so that legitimate cancellation between
rows does not masquerade as a derivative error.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from .energy_net import eval_f0, eval_f1, eval_f2, evaluate_energy, packed_index
from .errors import LogDomain
from .input_deck import MaterialSpec
from .kinematics import (
    MIXED_BASE,
    NBASE,
    FiberSet,
    compute_invariants,
    invariants_from_values,
    make_deformation_state,
    reference_offsets,
    SLOT_TABLE,
)
from .stress_tangent import energy, stress_from_energy
from .table import ParameterTable

KINK_RADIUS = 1e-3
# powers of two near 1e-6 and 1e-4, so perturbed arguments stay exact
H1 = 2.0 ** -20
H2 = 2.0 ** -13


@dataclass
class CheckEntry:
    name: str
    samples: int
    max_error: float
    tolerance: float
    passed: bool
    skipped: int = 0

    @property
    def status(self) -> str:
        return "pass" if self.passed else "FAIL"


@dataclass
class CheckReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, name, samples, max_error, tolerance, skipped=0):
        e = CheckEntry(name, int(samples), float(max_error), float(tolerance),
                       bool(max_error < tolerance), int(skipped))
        self.entries.append(e)
        return e

    def extend(self, other: "CheckReport"):
        self.entries.extend(other.entries)
        return self

    def __getitem__(self, name) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def records(self):
        out = []
        for e in sorted(self.entries, key=lambda e: e.name):
            d = asdict(e)
            d["status"] = e.status
            del d["passed"]
            out.append(d)
        return out

    def to_json(self) -> str:
        return json.dumps({"status": "pass" if self.passed else "fail", "checks": self.records()},
                          indent=2, sort_keys=True)

    def format_text(self) -> str:
        lines = []
        for e in sorted(self.entries, key=lambda e: e.name):
            skip = f" skipped={e.skipped}" if e.skipped else ""
            lines.append(f"{e.status:4s} {e.name}  samples={e.samples}{skip}  "
                         f"max_error={e.max_error:.3e}  tol={e.tolerance:.0e}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'} "
                     f"({sum(e.passed for e in self.entries)}/{len(self.entries)})")
        return "\n".join(lines)


# --- sampling -----------------------------------------------------------------

def random_deformation(rng, det_range=(0.8, 1.25), scale=0.15, max_cbar=1.5):
    """I + scale*N(0,1), rescaled so det F is uniform in ``det_range``.

    Draws whose isochoric right Cauchy-Green tensor has an eigenvalue above
    ``max_cbar`` are rejected, which keeps every fiber invariant inside the
    same plausible range used for invariant sampling.
    """
    while True:
        F = np.eye(3) + scale * rng.standard_normal((3, 3))
        d = np.linalg.det(F)
        if d <= 0.2:
            continue
        Cbar = d ** (-2.0 / 3.0) * (F.T @ F)
        if np.linalg.eigvalsh(Cbar)[-1] > max_cbar:
            continue
        return F * np.cbrt(rng.uniform(*det_range) / d)


def random_rotation(rng) -> np.ndarray:
    return Rotation.random(random_state=rng).as_matrix()


def _fibers_of(table, fibers):
    if fibers is not None:
        return fibers
    return MaterialSpec(table=table).fiber_set() if table.ndir else FiberSet(())


def _near_kink(table, inv):
    return any(abs(inv.shifted(r.kfinv)) < KINK_RADIUS for r in table.rows)


def _slot_dependents(table):
    """base slot -> indices of rows whose input depends on it."""
    kappas = {m.index: m.kappa for m in table.mixed}
    dep = {}
    for k, r in enumerate(table.rows):
        if r.kfinv <= MIXED_BASE:
            dep.setdefault(r.kfinv, []).append(k)
        else:
            for j, c in enumerate(kappas[r.kfinv]):
                if c != 0.0:
                    dep.setdefault(j + 1, []).append(k)
    return dep


def _sub_table(table, idx):
    return ParameterTable(table.material_type, table.ndir, [table.rows[k] for k in idx], table.mixed)


def _sample_invariants(rng, offsets):
    vals = np.array(offsets, dtype=float)
    vals[0] = rng.uniform(3.0, 5.0)
    vals[1] = rng.uniform(3.0, 5.0)
    vals[2] = rng.uniform(0.9, 1.1)
    for slot in range(4, NBASE + 1):
        _, a, b = SLOT_TABLE[slot]
        if a == b:
            vals[slot - 1] = rng.uniform(0.8, 1.5)
        else:
            vals[slot - 1] = offsets[slot - 1] + rng.uniform(-0.3, 0.3)
    return vals


# --- checks -------------------------------------------------------------------

def _unit_chain(row, x):
    """f2(f1(f0(x))) of one row, without its output weight."""
    f0 = eval_f0(row.kf0, x)[0]
    f1 = eval_f1(row.kf1, row.w0, f0)[0]
    return eval_f2(row.kf2, row.w1, f1)[0]


def _row_step(row, x0, dxdi, h):
    """``h``, shrunk near the pole of a logarithmic row (to 1% of its distance)."""
    if row.kf2 != 3:
        return h
    f0, df0, _ = eval_f0(row.kf0, x0)
    f1, df1, _ = eval_f1(row.kf1, row.w0, f0)
    slope = abs(row.w1 * df1 * df0 * dxdi)
    if slope == 0.0:
        return h
    limit = 0.01 * (1.0 - row.w1 * f1) / slope
    return min(h, 2.0 ** math.floor(math.log2(limit)))


def check_energy_derivatives(table: ParameterTable, samples: int = 200, seed: int = 0,
                             fibers: FiberSet | None = None, name: str = "") -> CheckReport:
    """UI1 and diagonal UI2 against central differences of UA on sampled invariants.

    UA is linear in the output weights, so each row's activation chain is
    differenced separately and scaled by its weight; this keeps large affine
    rows from flooding the second difference with roundoff.
    """
    rng = np.random.default_rng(seed)
    fibers = _fibers_of(table, fibers)
    offsets = reference_offsets(fibers)
    kappas = {m.index: np.asarray(m.kappa) for m in table.mixed}
    dep = _slot_dependents(table)
    singles = [table.single_row(k) for k in range(len(table.rows))]
    e1 = e2 = 0.0
    done = skipped = attempts = 0
    while done < samples and attempts < 20 * max(samples, 1):
        attempts += 1
        vals = _sample_invariants(rng, offsets)
        inv = invariants_from_values(vals, offsets, table.mixed)
        try:
            if _near_kink(table, inv):
                skipped += 1
                continue
            ev = evaluate_energy(table, inv)
            parts = [evaluate_energy(t, inv) for t in singles]
            errs = []
            for slot, rows in dep.items():
                i = slot - 1
                fd1 = fd2 = 0.0
                for k in rows:
                    row = table.rows[k]
                    if row.kfinv <= MIXED_BASE:
                        x0, dxdi = vals[i] - offsets[i], 1.0
                    else:
                        kap = kappas[row.kfinv]
                        x0, dxdi = inv.shifted(row.kfinv), kap[i]

                    def g(d, row=row, x0=x0, dxdi=dxdi):
                        return _unit_chain(row, x0 + dxdi * d)

                    g0 = g(0.0)
                    h1 = _row_step(row, x0, dxdi, H1)
                    h2 = _row_step(row, x0, dxdi, H2)
                    fd1 += row.w2 * _richardson(lambda h: (g(h) - g(-h)) / (2.0 * h), h1)
                    fd2 += row.w2 * _richardson(lambda h: (g(h) - 2.0 * g0 + g(-h)) / (h * h), h2)
                s1 = sum(abs(p.UI1[i]) for p in parts)
                pk = packed_index(slot, slot)
                s2 = sum(abs(p.UI2[pk]) for p in parts)
                errs.append((_rel(fd1, ev.UI1[i], s1), _rel(fd2, ev.UI2[pk], s2)))
        except LogDomain:
            skipped += 1
            continue
        for a, b in errs:
            e1, e2 = max(e1, a), max(e2, b)
        done += 1
    rep = CheckReport()
    tag = f"{name}:" if name else ""
    rep.add(f"{tag}energy_first_derivatives", done, e1, 1e-8, skipped)
    rep.add(f"{tag}energy_second_derivatives", done, e2, 1e-6, skipped)
    return rep


def _richardson(stencil, h):
    """Second-order central stencil extrapolated from steps h and h/2."""
    return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0


def _rel(fd, an, scale):
    den = max(abs(an), scale)
    if den == 0.0:
        return abs(fd - an)
    return abs(fd - an) / den


def _energy_gradient_fd(table, F, fibers, h=H1):
    P = np.empty((3, 3))
    for k in range(3):
        for l in range(3):
            E = np.zeros((3, 3))
            E[k, l] = h
            P[k, l] = (energy(table, F + E, fibers) - energy(table, F - E, fibers)) / (2.0 * h)
    return P


def check_stress_fd(table: ParameterTable, fibers: FiberSet | None = None, samples: int = 100,
                    seed: int = 0, name: str = "") -> CheckReport:
    """Assembled sigma against (1/J) dpsi/dF F^T by central differences."""
    rng = np.random.default_rng(seed)
    fibers = _fibers_of(table, fibers)
    err = 0.0
    done = skipped = attempts = 0
    while done < samples and attempts < 20 * max(samples, 1):
        attempts += 1
        F = random_deformation(rng)
        try:
            inv = compute_invariants(make_deformation_state(F), fibers, table.mixed)
            if _near_kink(table, inv):
                skipped += 1
                continue
            sig = stress_from_energy(table, F, fibers).sigma
            P = _energy_gradient_fd(table, F, fibers)
        except LogDomain:
            skipped += 1
            continue
        sig_fd = P @ F.T / np.linalg.det(F)
        err = max(err, _rel_tensor(sig_fd, sig))
        done += 1
    rep = CheckReport()
    rep.add(f"{name}:stress_fd" if name else "stress_fd", done, err, 1e-6, skipped)
    return rep


def _rel_tensor(A, B):
    den = np.abs(B).max()
    diff = np.abs(A - B).max()
    return diff / den if den > 0 else diff


def check_reference_state(table: ParameterTable, fibers: FiberSet | None = None,
                          seed: int = 0, frames: int = 10, name: str = "") -> CheckReport:
    """psi(I) = 0 and sigma(I) = 0 for the table's fibers and random orthonormal frames."""
    rng = np.random.default_rng(seed)
    fsets = [_fibers_of(table, fibers)]
    fsets += [FiberSet.from_frame(random_rotation(rng), table.ndir) for _ in range(frames)]
    err = 0.0
    for fs in fsets:
        err = max(err, abs(energy(table, np.eye(3), fs)),
                  np.abs(stress_from_energy(table, np.eye(3), fs).sigma).max())
    rep = CheckReport()
    rep.add(f"{name}:reference_state" if name else "reference_state", len(fsets), err, 1e-10)
    return rep


def check_symmetries(table: ParameterTable, fibers: FiberSet | None = None, seed: int = 0,
                     samples: int = 100, name: str = "") -> CheckReport:
    """Objectivity of psi and sigma; coaxiality of sigma and b for isotropic tables."""
    rng = np.random.default_rng(seed)
    fibers = _fibers_of(table, fibers)
    epsi = esig = eiso = 0.0
    done = skipped = 0
    isotropic = not table.mixed and all(r.kfinv <= 3 for r in table.rows)
    for _ in range(samples):
        F = random_deformation(rng)
        Q = random_rotation(rng)
        try:
            s0 = stress_from_energy(table, F, fibers)
            s1 = stress_from_energy(table, Q @ F, fibers)
        except LogDomain:
            skipped += 1
            continue
        epsi = max(epsi, abs(s1.energy.UA - s0.energy.UA))
        esig = max(esig, _rel_tensor(s1.sigma, Q @ s0.sigma @ Q.T))
        if isotropic:
            b = F @ F.T
            sg = s0.sigma
            den = np.linalg.norm(sg) * np.linalg.norm(b)
            if den > 0:
                eiso = max(eiso, np.linalg.norm(sg @ b - b @ sg) / den)
        done += 1
    rep = CheckReport()
    tag = f"{name}:" if name else ""
    rep.add(f"{tag}objectivity_energy", done, epsi, 1e-9, skipped)
    rep.add(f"{tag}objectivity_stress", done, esig, 1e-8, skipped)
    if isotropic:
        rep.add(f"{tag}isotropy_coaxial", done, eiso, 1e-9, skipped)
    return rep


# --- closed forms ---------------------------------------------------------------

def _split(F):
    J = float(np.linalg.det(F))
    bbar = J ** (-2.0 / 3.0) * (F @ F.T)
    I1 = float(np.trace(bbar))
    I2 = 0.5 * (I1 * I1 - float(np.trace(bbar @ bbar)))
    return J, bbar, I1, I2


def _dev(A):
    return A - np.trace(A) / 3.0 * np.eye(3)


def neo_hooke_closed(F, C10, D1):
    J, bbar, I1, _ = _split(F)
    psi = C10 * (I1 - 3.0) + (J - 1.0) ** 2 / D1
    sig = 2.0 * C10 / J * _dev(bbar) + 2.0 * (J - 1.0) / D1 * np.eye(3)
    return psi, sig


def mooney_rivlin_closed(F, C10, C01, D1):
    J, bbar, I1, I2 = _split(F)
    psi = C10 * (I1 - 3.0) + C01 * (I2 - 3.0) + (J - 1.0) ** 2 / D1
    tau = 2.0 * ((C10 + I1 * C01) * bbar - C01 * bbar @ bbar)
    sig = _dev(tau) / J + 2.0 * (J - 1.0) / D1 * np.eye(3)
    return psi, sig


def yeoh_closed(F, C, D):
    J, bbar, I1, _ = _split(F)
    x, v = I1 - 3.0, J - 1.0
    psi = sum(c * x ** (i + 1) for i, c in enumerate(C))
    psi += sum(v ** (2 * (i + 1)) / d for i, d in enumerate(D) if d)
    dpsi1 = sum((i + 1) * c * x ** i for i, c in enumerate(C))
    dpsiJ = sum(2 * (i + 1) * v ** (2 * i + 1) / d for i, d in enumerate(D) if d)
    sig = 2.0 * dpsi1 / J * _dev(bbar) + dpsiJ * np.eye(3)
    return psi, sig


def holzapfel_closed(F, C10, k1, k2, D, directions):
    J, bbar, I1, _ = _split(F)
    Fbar = J ** (-1.0 / 3.0) * F
    psi = C10 * (I1 - 3.0) + ((J * J - 1.0) / 2.0 - math.log(J)) / D
    tau = 2.0 * C10 * bbar
    for a0 in directions:
        a = Fbar @ np.asarray(a0, dtype=float)
        E = max(float(a @ a) - 1.0, 0.0)
        psi += k1 / (2.0 * k2) * (math.exp(k2 * E * E) - 1.0)
        tau = tau + 2.0 * k1 * E * math.exp(k2 * E * E) * np.outer(a, a)
    sig = _dev(tau) / J + (J - 1.0 / J) / D * np.eye(3)
    return psi, sig


def ogden_volumetric_closed(J, K):
    return 0.5 * K * ((J * J - 1.0) / 2.0 - math.log(J))


def _closed_form_case(rep, name, spec, closed, rng, states):
    ep = es = 0.0
    fibers = spec.fiber_set()
    for _ in range(states):
        F = random_deformation(rng)
        psi_ref, sig_ref = closed(F)
        st = stress_from_energy(spec.table, F, fibers)
        ep = max(ep, abs(st.energy.UA - psi_ref) / max(abs(psi_ref), 1e-300))
        es = max(es, _rel_tensor(st.sigma, sig_ref))
    rep.add(f"closed_form:{name}:energy", states, ep, 1e-10)
    rep.add(f"closed_form:{name}:stress", states, es, 1e-10)


def check_closed_forms(seed: int = 0, states: int = 50) -> CheckReport:
    from .presets import build_preset

    rng = np.random.default_rng(seed)
    rep = CheckReport()
    nh = dict(C10=0.5, D1=0.1)
    _closed_form_case(rep, "neo_hooke", build_preset("neo_hooke", **nh),
                      lambda F: neo_hooke_closed(F, **nh), rng, states)
    mr = dict(C10=0.3, C01=0.2, D1=0.1)
    _closed_form_case(rep, "mooney_rivlin", build_preset("mooney_rivlin", **mr),
                      lambda F: mooney_rivlin_closed(F, **mr), rng, states)
    C, D = (0.5, 0.05, 0.005), (0.1, 0.5, 2.0)
    ye = build_preset("yeoh", C10=C[0], C20=C[1], C30=C[2], D1=D[0], D2=D[1], D3=D[2])
    _closed_form_case(rep, "yeoh", ye, lambda F: yeoh_closed(F, C, D), rng, states)
    hz = dict(C10=0.5, k1=1.0, k2=2.0, D=0.1)
    hspec = build_preset("holzapfel_two_fiber", angle=30.0, **hz)
    dirs = hspec.fiber_set().n0
    _closed_form_case(rep, "holzapfel_two_fiber", hspec,
                      lambda F: holzapfel_closed(F, directions=dirs, **hz), rng, states)
    rep.extend(check_goh_limits(seed=seed, states=states))
    rep.extend(check_volumetric_identity())
    return rep


def check_goh_limits(seed: int = 0, states: int = 50) -> CheckReport:
    """kappa = 0 reproduces Holzapfel; kappa = 1/3 is blind to fiber direction."""
    from .presets import build_preset

    rng = np.random.default_rng(seed)
    hz = dict(C10=0.5, k1=1.0, k2=2.0, D=0.1, angle=30.0)
    holz = build_preset("holzapfel_two_fiber", **hz)
    goh0 = build_preset("goh_dispersion", kappa=0.0, **hz)
    goh3 = build_preset("goh_dispersion", kappa=1.0 / 3.0, **hz)
    e0 = e3 = 0.0
    for _ in range(states):
        F = random_deformation(rng)
        a = stress_from_energy(holz.table, F, holz.fiber_set())
        b = stress_from_energy(goh0.table, F, goh0.fiber_set())
        e0 = max(e0, abs(a.energy.UA - b.energy.UA) / max(abs(a.energy.UA), 1e-300),
                 _rel_tensor(b.sigma, a.sigma),
                 _rel_tensor(b.energy.UI1, a.energy.UI1),
                 _rel_tensor(b.energy.UI2, a.energy.UI2))
        other = goh3.fiber_set().rotated(random_rotation(rng))
        c = stress_from_energy(goh3.table, F, goh3.fiber_set())
        d = stress_from_energy(goh3.table, F, other)
        e3 = max(e3, abs(c.energy.UA - d.energy.UA) / max(abs(c.energy.UA), 1e-300),
                 _rel_tensor(d.sigma, c.sigma))
    rep = CheckReport()
    rep.add("goh:kappa0_equals_holzapfel", states, e0, 1e-12)
    rep.add("goh:kappa_third_fiber_independent", states, e3, 1e-12)
    return rep


def check_volumetric_identity(K: float = 1.0, points: int = 91) -> CheckReport:
    """Three-row volumetric table vs K/2((J^2-1)/2 - ln J) on J in [0.8, 1.25].

    Error is relative to the summed magnitude of the three row energies.
    """
    from .presets import build_preset

    table = build_preset("vol_ogden_modified", K=K).table
    fibers = FiberSet(())
    err = 0.0
    for J in np.linspace(0.8, 1.25, points):
        F = np.cbrt(J) * np.eye(3)
        J = float(np.linalg.det(F))
        inv = compute_invariants(make_deformation_state(F), fibers)
        psi = evaluate_energy(table, inv).UA
        scale = sum(abs(evaluate_energy(table.single_row(k), inv).UA) for k in range(3))
        ref = ogden_volumetric_closed(J, K)
        err = max(err, _rel(psi, ref, scale))
    rep = CheckReport()
    rep.add("volumetric_identity", points, err, 1e-12)
    return rep


# --- suites ---------------------------------------------------------------------

def check_spec(spec: MaterialSpec, name: str = "material", samples: int = 100, seed: int = 0) -> CheckReport:
    """Derivative, stress, reference and symmetry checks for one material."""
    table, fibers = spec.table, spec.fiber_set()
    rep = CheckReport()
    rep.extend(check_energy_derivatives(table, samples, seed, fibers, name))
    rep.extend(check_stress_fd(table, fibers, samples, seed, name))
    rep.extend(check_reference_state(table, fibers, seed, name=name))
    rep.extend(check_symmetries(table, fibers, seed, samples, name))
    return rep


def run_all(presets=None, samples: int = 100, seed: int = 0) -> CheckReport:
    """Closed-form suite plus check_spec for each preset (default: all)."""
    from .presets import build_preset, list_presets

    rep = check_closed_forms(seed)
    for n in (list_presets() if presets is None else presets):
        rep.extend(check_spec(build_preset(n), n, samples, seed))
    return rep

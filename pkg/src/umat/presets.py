"""Named constitutive models expressed as parameter tables.

Textbook models (neo-Hooke, Mooney-Rivlin, Yeoh, polynomial, Holzapfel,
Kaliske, fiber-dispersion Holzapfel) are compressible and carry their
volumetric rows; a volumetric modulus of zero (``D = 0``) drops those rows
and marks the material incompressible. The calibrated tissue models are all
incompressible, with weights in kPa (skin: MPa).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MissingParameter, NonPositiveModulus, UnknownPreset
from .input_deck import MaterialSpec
from .kinematics import NBASE, FiberSet, MixedInvariantRow
from .table import MaterialType, NeuronRow, ParameterTable

INC = MaterialType.INCOMPRESSIBLE
COMP = MaterialType.COMPRESSIBLE


@dataclass(frozen=True)
class PresetInfo:
    name: str
    description: str
    units: str
    defaults: dict
    builder: Callable


_CATALOG: dict = {}

_ALIASES = {"mooney_rivlin_brain_gray": "brain_mooney_rivlin_gray",
            "mooney_rivlin_brain_white": "brain_mooney_rivlin_white"}


def _register(name, description, units, **defaults):
    def deco(fn):
        _CATALOG[name] = PresetInfo(name, description, units, dict(defaults), fn)
        return fn
    return deco


def list_presets():
    return sorted(_CATALOG)


def preset_info(name) -> PresetInfo:
    name = _ALIASES.get(name, name)
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}") from None


def build_preset(name, **params) -> MaterialSpec:
    info = preset_info(name)
    unknown = set(params) - set(info.defaults)
    if unknown:
        raise ValueError(f"preset {info.name} has no parameter(s) {sorted(unknown)}")
    p = {**info.defaults, **params}
    for k, v in p.items():
        if v is None:
            raise MissingParameter(f"preset {info.name}: parameter {k!r} is required")
        p[k] = float(v)
    table, fibers = info.builder(p)
    return MaterialSpec(name=info.name, table=table, fibers=fibers, units=info.units)


# --- helpers ----------------------------------------------------------------

def _row(kfinv, kf0, kf1, kf2, w1, w2, w0=1.0):
    return NeuronRow(kfinv, kf0, kf1, kf2, w0, w1, w2)


def _positive(p, *names):
    for n in names:
        if not p[n] > 0.0:
            raise NonPositiveModulus(f"{n} must be positive, got {p[n]!r}")


def _nonneg(p, *names):
    for n in names:
        if p[n] < 0.0:
            raise NonPositiveModulus(f"{n} must be non-negative, got {p[n]!r}")


def _exp_row(kfinv, kf0, kf1, a, b):
    """``a/2b (exp(b x^m) - 1)``."""
    return _row(kfinv, kf0, kf1, 2, b, a / (2.0 * b))


def _ogden_vol_rows(weight):
    # weight * [(J-1) + (J-1)^2/2 - ln J] = weight * [(J^2-1)/2 - ln J]
    return [
        _row(3, 1, 1, 1, 1.0, weight),
        _row(3, 1, 2, 1, 0.5, weight),
        _row(3, 1, 1, 3, -1.0, weight),
    ]


def _type_for(D):
    return COMP if D != 0.0 else INC


def _two_fibers(angle_deg):
    a = math.radians(angle_deg)
    c, s = math.cos(a), math.sin(a)
    return FiberSet(((c, s, 0.0), (c, -s, 0.0)))


def _orthotropic():
    return FiberSet(((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)))


def _one_fiber():
    return FiberSet(((1.0, 0.0, 0.0),))


def _goh_mixed(kappa):
    k1 = [0.0] * NBASE
    k1[0], k1[3] = kappa, 1.0 - 3.0 * kappa
    k2 = [0.0] * NBASE
    k2[0], k2[7] = kappa, 1.0 - 3.0 * kappa
    return (MixedInvariantRow(101, tuple(k1)), MixedInvariantRow(102, tuple(k2)))


# --- textbook models --------------------------------------------------------

@_register("neo_hooke", "C10 (I1-3) + 1/D1 (J-1)^2", "MPa", C10=0.5, D1=0.1)
def _neo_hooke(p):
    _nonneg(p, "D1")
    rows = [_row(1, 1, 1, 1, 1.0, p["C10"])]
    if p["D1"]:
        rows.append(_row(3, 1, 2, 1, 1.0, 1.0 / p["D1"]))
    return ParameterTable(_type_for(p["D1"]), 0, rows), None


@_register("mooney_rivlin", "C10 (I1-3) + C01 (I2-3) + 1/D1 (J-1)^2", "MPa",
           C10=0.3, C01=0.2, D1=0.1)
def _mooney_rivlin(p):
    _nonneg(p, "D1")
    rows = [_row(1, 1, 1, 1, 1.0, p["C10"]), _row(2, 1, 1, 1, 1.0, p["C01"])]
    if p["D1"]:
        rows.append(_row(3, 1, 2, 1, 1.0, 1.0 / p["D1"]))
    return ParameterTable(_type_for(p["D1"]), 0, rows), None


def _poly_rows(p, n):
    rows = [_row(1, 1, i, 1, 1.0, p[f"C{i}0"]) for i in range(1, n + 1) if p[f"C{i}0"] != 0.0]
    ds = [p[f"D{i}"] for i in range(1, n + 1)]
    for i, D in enumerate(ds, start=1):
        if D < 0.0:
            raise NonPositiveModulus(f"D{i} must be non-negative, got {D!r}")
        if D:
            rows.append(_row(3, 1, 2 * i, 1, 1.0, 1.0 / D))
    mtype = COMP if any(ds) else INC
    return ParameterTable(mtype, 0, rows)


@_register("yeoh", "sum_i Ci0 (I1-3)^i + sum_i 1/Di (J-1)^2i, i = 1..3", "MPa",
           C10=0.5, C20=0.05, C30=0.005, D1=0.1, D2=0.0, D3=0.0)
def _yeoh(p):
    return _poly_rows(p, 3), None


_POLY_MAX = 6


@_register("polynomial", "sum_i Ci0 (I1-3)^i + sum_i 1/Di (J-1)^2i, i = 1..N (N <= 6)", "MPa",
           N=2, **{f"C{i}0": (0.5 if i == 1 else 0.0) for i in range(1, _POLY_MAX + 1)},
           **{f"D{i}": (0.1 if i == 1 else 0.0) for i in range(1, _POLY_MAX + 1)})
def _polynomial(p):
    n = p["N"]
    if n != int(n) or not 1 <= n <= _POLY_MAX:
        raise ValueError(f"polynomial order N must be an integer in 1..{_POLY_MAX}, got {n!r}")
    n = int(n)
    for i in range(n + 1, _POLY_MAX + 1):
        if p[f"C{i}0"] or p[f"D{i}"]:
            raise ValueError(f"coefficient of order {i} given for N = {n}")
    return _poly_rows(p, n), None


@_register("holzapfel_two_fiber",
           "C10 (I1-3) + 1/D ((J^2-1)/2 - ln J) + sum_a k1/2k2 (exp(k2 <I4(aa)-1>^2) - 1); "
           "fibers at +-angle (deg) in the 1-2 plane", "MPa",
           C10=0.5, k1=1.0, k2=2.0, D=0.1, angle=30.0)
def _holzapfel(p):
    _positive(p, "k2")
    _nonneg(p, "D")
    rows = [
        _row(1, 1, 1, 1, 1.0, p["C10"]),
        _exp_row(4, 2, 2, p["k1"], p["k2"]),
        _exp_row(8, 2, 2, p["k1"], p["k2"]),
    ]
    if p["D"]:
        rows += _ogden_vol_rows(1.0 / p["D"])
    return ParameterTable(_type_for(p["D"]), 2, rows), _two_fibers(p["angle"])


_KALISKE_TERMS = (
    ("a", 1, range(1, 4)),
    ("b", 2, range(1, 4)),
    ("c", 4, range(2, 7)),
    ("d", 5, range(2, 7)),
    ("e", 8, range(2, 7)),
    ("f", 9, range(2, 7)),
)


@_register("kaliske",
           "sum a_i (I1-3)^i + b_j (I2-3)^j + c_k (I4(11)-1)^k + d_l (I5(11)-1)^l "
           "+ e_m (I4(22)-1)^m + f_n (I5(22)-1)^n + 1/D ((J^2-1)/2 - ln J)", "MPa",
           D=0.1, angle=30.0,
           **{f"{c}{i}": 0.0 for c, _, rng in _KALISKE_TERMS for i in rng})
def _kaliske(p):
    _nonneg(p, "D")
    rows = []
    for c, slot, rng in _KALISKE_TERMS:
        for i in rng:
            w = p[f"{c}{i}"]
            if w != 0.0:
                rows.append(_row(slot, 1, i, 1, 1.0, w))
    if p["D"]:
        rows += _ogden_vol_rows(1.0 / p["D"])
    return ParameterTable(_type_for(p["D"]), 2, rows), _two_fibers(p["angle"])


@_register("goh_dispersion",
           "Holzapfel model on mixed invariants kappa (I1-3) + (1-3 kappa)(I4(aa)-1)", "MPa",
           C10=0.5, k1=1.0, k2=2.0, kappa=0.1, D=0.1, angle=30.0)
def _goh(p):
    _positive(p, "k2")
    _nonneg(p, "D")
    if not 0.0 <= p["kappa"] <= 1.0 / 3.0:
        raise ValueError(f"kappa must lie in [0, 1/3], got {p['kappa']!r}")
    rows = [
        _row(1, 1, 1, 1, 1.0, p["C10"]),
        _exp_row(101, 2, 2, p["k1"], p["k2"]),
        _exp_row(102, 2, 2, p["k1"], p["k2"]),
    ]
    if p["D"]:
        rows += _ogden_vol_rows(1.0 / p["D"])
    return ParameterTable(_type_for(p["D"]), 2, rows, _goh_mixed(p["kappa"])), _two_fibers(p["angle"])


@_register("vol_simo", "K/2 (J-1)^2", "MPa", K=1.0)
def _vol_simo(p):
    _positive(p, "K")
    return ParameterTable(COMP, 0, [_row(3, 1, 2, 1, 1.0, p["K"] / 2.0)]), None


@_register("vol_ogden_modified", "K/2 ((J^2-1)/2 - ln J) as three rows", "MPa", K=1.0)
def _vol_ogden(p):
    _positive(p, "K")
    return ParameterTable(COMP, 0, _ogden_vol_rows(p["K"] / 2.0)), None


# --- brain (gray matter cortex / white matter corona radiata) ----------------

def _brain_mr(p):
    rows = [_row(1, 1, 1, 1, 1.0, p["mu1"] / 2.0), _row(2, 1, 1, 1, 1.0, p["mu2"] / 2.0)]
    return ParameterTable(INC, 0, rows), None


_register("brain_mooney_rivlin_gray", "mu1/2 (I1-3) + mu2/2 (I2-3), gray matter", "kPa",
          mu1=0.0021, mu2=1.8817)(_brain_mr)
_register("brain_mooney_rivlin_white", "mu1/2 (I1-3) + mu2/2 (I2-3), white matter", "kPa",
          mu1=0.0168, mu2=0.9697)(_brain_mr)


def _brain_bk(p):
    return ParameterTable(INC, 0, [_row(2, 1, 1, 1, 1.0, p["mu"] / 2.0)]), None


_register("brain_blatz_ko_gray", "mu/2 (I2-3), gray matter", "kPa", mu=1.9043)(_brain_bk)
_register("brain_blatz_ko_white", "mu/2 (I2-3), white matter", "kPa", mu=0.9556)(_brain_bk)


def _brain_six(p):
    rows = []
    if p["mu1"]:
        rows.append(_row(2, 1, 1, 1, 1.0, p["mu1"]))
    if p["a1"]:
        _positive(p, "b1")
        rows.append(_exp_row(2, 1, 1, p["a1"], p["b1"]))
    if p["alpha1"]:
        _positive(p, "beta1")
        rows.append(_row(2, 1, 1, 3, p["beta1"], p["alpha1"] / (2.0 * p["beta1"])))
    if p["mu2"]:
        rows.append(_row(2, 1, 2, 1, 1.0, p["mu2"]))
    if p["a2"]:
        _positive(p, "b2")
        rows.append(_exp_row(2, 1, 2, p["a2"], p["b2"]))
    if p["alpha2"]:
        _positive(p, "beta2")
        rows.append(_row(2, 1, 2, 3, p["beta2"], p["alpha2"] / (2.0 * p["beta2"])))
    return ParameterTable(INC, 0, rows), None


_SIX = "linear/exp/log terms in (I2-3) and (I2-3)^2; zero-amplitude terms omitted"
_register("brain_discovered_six_term_gray", _SIX + ", gray matter", "kPa",
          mu1=0.0, a1=0.0, b1=0.0, alpha1=1.2520, beta1=0.9875,
          mu2=3.8007, a2=6.2285, b2=1.6495, alpha2=4.6743, beta2=1.6663)(_brain_six)
_register("brain_discovered_six_term_white", _SIX + ", white matter", "kPa",
          mu1=0.2215, a1=0.2350, b1=0.2398, alpha1=0.0, beta1=0.0,
          mu2=0.0, a2=6.3703, b2=1.8893, alpha2=4.5065, beta2=1.1789)(_brain_six)


# --- skin ---------------------------------------------------------------------

@_register("skin_neohooke_holzapfel", "mu (I1-3) + a4/2b4 (exp(b4 <I4(11)-1>^2) - 1)", "MPa",
           mu=0.2492, a4=0.1054, b4=10.7914)
def _skin_nh(p):
    _positive(p, "b4")
    rows = [_row(1, 1, 1, 1, 1.0, p["mu"]), _exp_row(4, 2, 2, p["a4"], p["b4"])]
    return ParameterTable(INC, 1, rows), _one_fiber()


@_register("skin_discovered", "a1/2b1 (exp(b1 (I1-3)^2) - 1) + a4/2b4 (exp(b4 <I4(11)-1>^2) - 1)", "MPa",
           a1=1.3291, b1=0.8207, a4=0.2656, b4=0.3921)
def _skin_disc(p):
    _positive(p, "b1", "b4")
    rows = [_exp_row(1, 1, 2, p["a1"], p["b1"]), _exp_row(4, 2, 2, p["a4"], p["b4"])]
    return ParameterTable(INC, 1, rows), _one_fiber()


# --- arteries -----------------------------------------------------------------

def _artery_disc(p):
    _positive(p, "b")
    rows = [
        _row(1, 1, 1, 1, 1.0, p["mu1"] / 2.0),
        _exp_row(1, 1, 1, p["a"], p["b"]),
        _row(5, 2, 2, 1, 1.0, p["mu5"] / 2.0),
        _row(9, 2, 2, 1, 1.0, p["mu5"] / 2.0),
    ]
    return ParameterTable(INC, 2, rows), _two_fibers(p["angle"])


_AD = "mu1/2 (I1-3) + a/2b (exp(b (I1-3)) - 1) + sum mu5/2 <I5(ii)-1>^2"
_register("artery_discovered_media", _AD + ", media", "kPa",
          mu1=33.45, a=3.74, b=6.66, mu5=2.17, angle=7.00)(_artery_disc)
_register("artery_discovered_adventitia", _AD + ", adventitia", "kPa",
          mu1=8.30, a=1.42, b=6.34, mu5=0.49, angle=66.78)(_artery_disc)


def _artery_goh(p):
    _positive(p, "b")
    if not 0.0 <= p["kappa"] <= 1.0 / 3.0:
        raise ValueError(f"kappa must lie in [0, 1/3], got {p['kappa']!r}")
    rows = [
        _row(1, 1, 1, 1, 1.0, p["mu"] / 2.0),
        _exp_row(101, 2, 2, p["a"], p["b"]),
        _exp_row(102, 2, 2, p["a"], p["b"]),
    ]
    return ParameterTable(INC, 2, rows, _goh_mixed(p["kappa"])), _two_fibers(p["angle"])


_AG = "mu/2 (I1-3) + sum a/2b (exp(b <I*(ii)-1>^2) - 1), dispersed fibers"
_register("artery_goh_media", _AG + ", media", "kPa",
          mu=48.68, a=6.67, b=23.17, kappa=0.074, angle=7.00)(_artery_goh)
_register("artery_goh_adventitia", _AG + ", adventitia", "kPa",
          mu=13.22, a=0.93, b=12.06, kappa=0.091, angle=66.78)(_artery_goh)


# --- tricuspid valve leaflets ---------------------------------------------------

def _valve(p):
    _positive(p, "c2")
    rows = [_row(1, 1, 1, 1, 1.0, p["c0"] / 2.0), _row(1, 1, 2, 2, p["c2"], p["c1"] / 2.0)]
    return ParameterTable(INC, 0, rows), None


_FUNG = "c0/2 (I1-3) + c1/2 (exp(c2 (I1-3)^2) - 1)"
_register("valve_fung_anterior", _FUNG + ", anterior leaflet", "kPa", c0=1.0, c1=0.124, c2=4.57)(_valve)
_register("valve_fung_posterior", _FUNG + ", posterior leaflet", "kPa", c0=1.0, c1=0.188, c2=14.86)(_valve)
_register("valve_fung_septal", _FUNG + ", septal leaflet", "kPa", c0=1.0, c1=0.191, c2=17.75)(_valve)


# --- myocardium (fiber f = n1, sheet s = n2, normal n = n3) ----------------------

@_register("heart_guan", "exp-linear I1, exp-quadratic <I4f>, <I4n>, exp-quadratic I8fs", "kPa",
           a=0.782, b=7.248, af=4.488, bf=14.571, an=2.513, bn=10.929, afs=0.436, bfs=4.959)
def _heart_guan(p):
    _positive(p, "b", "bf", "bn", "bfs")
    rows = [
        _exp_row(1, 1, 1, p["a"], p["b"]),
        _exp_row(4, 2, 2, p["af"], p["bf"]),
        _exp_row(14, 2, 2, p["an"], p["bn"]),
        _exp_row(6, 1, 2, p["afs"], p["bfs"]),
    ]
    return ParameterTable(INC, 3, rows), _orthotropic()


@_register("heart_generalized_holzapfel",
           "exp-linear I1, exp-quadratic <I4f>, <I4s>, <I4n>, exp-quadratic I8fs, I8sn", "kPa",
           a=0.950, b=5.457, af=3.318, bf=23.701, as_=1.405, bs=20.067, an=2.037, bn=16.976,
           afs=0.586, bfs=1.081, asn=0.047, bsn=11.842)
def _heart_gh(p):
    _positive(p, "b", "bf", "bs", "bn", "bfs", "bsn")
    rows = [
        _exp_row(1, 1, 1, p["a"], p["b"]),
        _exp_row(4, 2, 2, p["af"], p["bf"]),
        _exp_row(8, 2, 2, p["as_"], p["bs"]),
        _exp_row(14, 2, 2, p["an"], p["bn"]),
        _exp_row(6, 1, 2, p["afs"], p["bfs"]),
        _exp_row(12, 1, 2, p["asn"], p["bsn"]),
    ]
    return ParameterTable(INC, 3, rows), _orthotropic()


@_register("heart_discovered", "mu/2 (exp(I2-3) - 1), exp-quadratic <I4f>, <I4n>, exp-quadratic I8fs", "kPa",
           mu=5.162, af=3.426, bf=21.151, an=2.754, bn=4.371, afs=0.494, bfs=0.508)
def _heart_disc(p):
    _positive(p, "bf", "bn", "bfs")
    rows = [
        _row(2, 1, 1, 2, 1.0, p["mu"] / 2.0),
        _exp_row(4, 2, 2, p["af"], p["bf"]),
        _exp_row(14, 2, 2, p["an"], p["bn"]),
        _exp_row(6, 1, 2, p["afs"], p["bfs"]),
    ]
    return ParameterTable(INC, 3, rows), _orthotropic()


TISSUE_PRESETS = tuple(n for n in _CATALOG if n.split("_")[0] in ("brain", "skin", "artery", "valve", "heart"))

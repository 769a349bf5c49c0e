import numpy as np
import pytest

from umat import (
    FiberSet,
    MaterialType,
    MissingParameter,
    NonPositiveModulus,
    UnknownPreset,
    build_preset,
    cauchy_stress,
    list_presets,
    preset_info,
)
from umat.presets import TISSUE_PRESETS
from umat.verify import random_deformation, random_rotation

CATALOG = [
    "neo_hooke", "mooney_rivlin", "yeoh", "polynomial", "holzapfel_two_fiber", "kaliske",
    "goh_dispersion", "vol_simo", "vol_ogden_modified",
    "brain_mooney_rivlin_gray", "brain_mooney_rivlin_white", "brain_blatz_ko_gray", "brain_blatz_ko_white",
    "brain_discovered_six_term_gray", "brain_discovered_six_term_white",
    "skin_neohooke_holzapfel", "skin_discovered",
    "artery_discovered_media", "artery_discovered_adventitia", "artery_goh_media", "artery_goh_adventitia",
    "valve_fung_anterior", "valve_fung_posterior", "valve_fung_septal",
    "heart_guan", "heart_generalized_holzapfel", "heart_discovered",
]


def rows(name, **kw):
    return [r.as_tuple() for r in build_preset(name, **kw).table.rows]


def test_catalog_complete():
    assert sorted(list_presets()) == sorted(CATALOG)
    assert len(TISSUE_PRESETS) == 18
    assert all(n in CATALOG for n in TISSUE_PRESETS)


def test_units_recorded():
    for n in CATALOG:
        unit = preset_info(n).units
        if n.startswith("skin") or n in CATALOG[:9]:
            assert unit == "MPa", n
        else:
            assert unit == "kPa", n
        assert build_preset(n).units == unit


@pytest.mark.parametrize("name", TISSUE_PRESETS)
def test_tissue_presets_incompressible(name):
    t = build_preset(name).table
    assert t.material_type is MaterialType.INCOMPRESSIBLE
    assert 3 not in t.slots()


def test_brain_mooney_rivlin_gray_rows():
    assert rows("mooney_rivlin_brain_gray") == [(1, 1, 1, 1, 1.0, 1.0, 0.00105), (2, 1, 1, 1, 1.0, 1.0, 0.94085)]
    assert build_preset("mooney_rivlin_brain_gray").units == "kPa"


def test_brain_mooney_rivlin_white_rows():
    assert rows("brain_mooney_rivlin_white") == [(1, 1, 1, 1, 1.0, 1.0, 0.0084), (2, 1, 1, 1, 1.0, 1.0, 0.48485)]


def test_brain_blatz_ko_is_single_second_invariant_row():
    assert rows("brain_blatz_ko_gray") == [(2, 1, 1, 1, 1.0, 1.0, 1.9043 / 2)]
    assert rows("brain_blatz_ko_white") == [(2, 1, 1, 1, 1.0, 1.0, 0.9556 / 2)]


def test_brain_six_term_gray_rows():
    got = rows("brain_discovered_six_term_gray")
    assert got == [
        (2, 1, 1, 3, 1.0, 0.9875, 1.2520 / (2 * 0.9875)),
        (2, 1, 2, 1, 1.0, 1.0, 3.8007),
        (2, 1, 2, 2, 1.0, 1.6495, 6.2285 / (2 * 1.6495)),
        (2, 1, 2, 3, 1.0, 1.6663, 4.6743 / (2 * 1.6663)),
    ]


def test_brain_six_term_white_rows():
    got = rows("brain_discovered_six_term_white")
    assert got == [
        (2, 1, 1, 1, 1.0, 1.0, 0.2215),
        (2, 1, 1, 2, 1.0, 0.2398, 0.2350 / (2 * 0.2398)),
        (2, 1, 2, 2, 1.0, 1.8893, 6.3703 / (2 * 1.8893)),
        (2, 1, 2, 3, 1.0, 1.1789, 4.5065 / (2 * 1.1789)),
    ]


def test_skin_discovered_rows():
    got = rows("skin_discovered", a1=1.3291, b1=0.8207, a4=0.2656, b4=0.3921)
    assert got == [(1, 1, 2, 2, 1.0, 0.8207, 1.3291 / (2 * 0.8207)),
                   (4, 2, 2, 2, 1.0, 0.3921, 0.2656 / (2 * 0.3921))]
    assert build_preset("skin_discovered").units == "MPa"


def test_skin_neohooke_holzapfel_rows():
    assert rows("skin_neohooke_holzapfel") == [(1, 1, 1, 1, 1.0, 1.0, 0.2492),
                                               (4, 2, 2, 2, 1.0, 10.7914, 0.1054 / (2 * 10.7914))]


@pytest.mark.parametrize("name,slots", [
    ("heart_guan", {1, 4, 14, 6}),
    ("heart_generalized_holzapfel", {1, 4, 8, 14, 6, 12}),
    ("heart_discovered", {2, 4, 14, 6}),
])
def test_heart_slot_sets(name, slots):
    spec = build_preset(name)
    assert spec.table.slots() == slots
    assert spec.table.ndir == 3


def test_heart_discovered_values():
    got = rows("heart_discovered")
    assert got[0] == (2, 1, 1, 2, 1.0, 1.0, 5.162 / 2)
    assert got[1] == (4, 2, 2, 2, 1.0, 21.151, 3.426 / (2 * 21.151))
    assert got[2] == (14, 2, 2, 2, 1.0, 4.371, 2.754 / (2 * 4.371))
    assert got[3] == (6, 1, 2, 2, 1.0, 0.508, 0.494 / (2 * 0.508))


@pytest.mark.parametrize("name,c1,c2", [
    ("valve_fung_anterior", 0.124, 4.57), ("valve_fung_posterior", 0.188, 14.86), ("valve_fung_septal", 0.191, 17.75)])
def test_valve_rows(name, c1, c2):
    assert rows(name) == [(1, 1, 1, 1, 1.0, 1.0, 0.5), (1, 1, 2, 2, 1.0, c2, c1 / 2)]


@pytest.mark.parametrize("layer,angle", [("media", 7.0), ("adventitia", 66.78)])
def test_artery_fibers_symmetric(layer, angle):
    for kind in ("discovered", "goh"):
        fib = build_preset(f"artery_{kind}_{layer}").fibers
        a = np.radians(angle)
        np.testing.assert_allclose(fib.n0[0], [np.cos(a), np.sin(a), 0.0])
        np.testing.assert_allclose(fib.n0[1], [np.cos(a), -np.sin(a), 0.0])


def test_artery_goh_media_mixed_rows():
    t = build_preset("artery_goh_media").table
    k1, k2 = (m.kappa for m in t.mixed)
    assert k1[0] == k2[0] == 0.074
    assert k1[3] == pytest.approx(1 - 3 * 0.074) and k2[7] == pytest.approx(1 - 3 * 0.074)
    assert [r.kfinv for r in t.rows] == [1, 101, 102]


def test_textbook_volumetric_rows():
    assert rows("vol_simo", K=4.0) == [(3, 1, 2, 1, 1.0, 1.0, 2.0)]
    assert rows("vol_ogden_modified", K=4.0) == [
        (3, 1, 1, 1, 1.0, 1.0, 2.0), (3, 1, 2, 1, 1.0, 0.5, 2.0), (3, 1, 1, 3, 1.0, -1.0, 2.0)]
    hz = rows("holzapfel_two_fiber", D=0.5)
    assert hz[-3:] == [(3, 1, 1, 1, 1.0, 1.0, 2.0), (3, 1, 2, 1, 1.0, 0.5, 2.0), (3, 1, 1, 3, 1.0, -1.0, 2.0)]


def test_yeoh_six_rows():
    got = rows("yeoh", C10=1.0, C20=2.0, C30=3.0, D1=0.5, D2=0.25, D3=0.125)
    assert got == [(1, 1, 1, 1, 1.0, 1.0, 1.0), (1, 1, 2, 1, 1.0, 1.0, 2.0), (1, 1, 3, 1, 1.0, 1.0, 3.0),
                   (3, 1, 2, 1, 1.0, 1.0, 2.0), (3, 1, 4, 1, 1.0, 1.0, 4.0), (3, 1, 6, 1, 1.0, 1.0, 8.0)]


def test_polynomial_order():
    got = rows("polynomial", N=3, C10=0.5, C30=0.2, D1=0.1, D3=0.5)
    assert got == [(1, 1, 1, 1, 1.0, 1.0, 0.5), (1, 1, 3, 1, 1.0, 1.0, 0.2),
                   (3, 1, 2, 1, 1.0, 1.0, 10.0), (3, 1, 6, 1, 1.0, 1.0, 2.0)]
    with pytest.raises(ValueError):
        build_preset("polynomial", N=2, C30=1.0)
    for bad in (0, 7, 2.5):
        with pytest.raises(ValueError):
            build_preset("polynomial", N=bad)


def test_kaliske_pattern():
    got = rows("kaliske", a2=1.0, f6=2.0, D=0.1)
    assert got[:2] == [(1, 1, 2, 1, 1.0, 1.0, 1.0), (9, 1, 6, 1, 1.0, 1.0, 2.0)]
    assert len(got) == 5


def test_incompressible_textbook_variant():
    spec = build_preset("neo_hooke", D1=0.0)
    assert spec.table.material_type is MaterialType.INCOMPRESSIBLE
    assert spec.table.slots() == {1}


def test_goh_isotropic_limit_ignores_fibers():
    spec = build_preset("goh_dispersion", kappa=1 / 3)
    F = np.array([[1.15, 0.1, 0.0], [0.05, 0.92, 0.02], [0.0, -0.03, 1.01]])
    s0 = cauchy_stress(spec.table, F, spec.fiber_set()).sigma
    rng = np.random.default_rng(5)
    for _ in range(5):
        fib = spec.fiber_set().rotated(random_rotation(rng))
        np.testing.assert_allclose(cauchy_stress(spec.table, F, fib).sigma, s0, rtol=1e-12, atol=1e-14)


def test_goh_zero_dispersion_matches_holzapfel():
    goh = build_preset("goh_dispersion", kappa=0.0)
    hz = build_preset("holzapfel_two_fiber")
    rng = np.random.default_rng(2)
    for _ in range(5):
        F = random_deformation(rng)
        a = cauchy_stress(goh.table, F, goh.fiber_set())
        b = cauchy_stress(hz.table, F, hz.fiber_set())
        assert a.energy.UA == pytest.approx(b.energy.UA, rel=1e-12)
        np.testing.assert_allclose(a.sigma, b.sigma, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("name,kw,exc", [
    ("holzapfel_two_fiber", dict(k2=0.0), NonPositiveModulus),
    ("goh_dispersion", dict(k2=-1.0), NonPositiveModulus),
    ("skin_discovered", dict(b1=-1.0), NonPositiveModulus),
    ("heart_guan", dict(bf=0.0), NonPositiveModulus),
    ("neo_hooke", dict(D1=-1.0), NonPositiveModulus),
    ("vol_simo", dict(K=0.0), NonPositiveModulus),
    ("neo_hooke", dict(C10=None), MissingParameter),
    ("neo_hooke", dict(bogus=1.0), ValueError),
    ("goh_dispersion", dict(kappa=0.4), ValueError),
])
def test_parameter_errors(name, kw, exc):
    with pytest.raises(exc):
        build_preset(name, **kw)


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        build_preset("ogden")
    with pytest.raises(UnknownPreset):
        preset_info("nope")


def test_builders_are_pure():
    a = build_preset("heart_guan")
    b = build_preset("heart_guan")
    assert a.table == b.table and a is not b
    assert preset_info("heart_guan").defaults["a"] == 0.782


@pytest.mark.parametrize("name", CATALOG)
def test_default_fibers_are_unit(name):
    fib = build_preset(name).fiber_set()
    assert isinstance(fib, FiberSet)
    for v in fib.n0:
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-15)

import numpy as np
import pytest

from umat import (
    FiberSet,
    InvalidPair,
    MixedInvariantRow,
    NonPositiveJacobian,
    compute_invariants,
    invariant_gradients,
    invariant_index,
    make_deformation_state,
)
from umat.kinematics import SLOT_TABLE, ninv_for, reference_offsets, slot_pair

AXES = FiberSet.from_vectors(np.eye(3))


def test_identity_state():
    st = make_deformation_state(np.eye(3))
    assert st.J == 1.0
    for m in (st.Fbar, st.b, st.C, st.bbar, st.Cbar):
        np.testing.assert_array_equal(m, np.eye(3))


def test_isochoric_uniaxial_state():
    s = 2 ** -0.5
    st = make_deformation_state(np.diag([2.0, s, s]))
    assert st.J == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(st.C, np.diag([4.0, 0.5, 0.5]), atol=1e-15)


def test_dilatation_has_identity_fbar():
    st = make_deformation_state(np.diag([1.1, 1.1, 1.1]))
    assert st.J == pytest.approx(1.331, rel=1e-14)
    np.testing.assert_allclose(st.Fbar, np.eye(3), atol=1e-15)


def test_b_and_c_are_distinct_for_shear():
    F = np.eye(3)
    F[0, 1] = 0.5
    st = make_deformation_state(F)
    np.testing.assert_allclose(st.C, F.T @ F)
    np.testing.assert_allclose(st.b, F @ F.T)
    assert st.C[1, 1] == pytest.approx(1.25)
    assert st.b[0, 0] == pytest.approx(1.25)


@pytest.mark.parametrize("F", [np.diag([1.0, 1.0, -1.0]), np.zeros((3, 3)), np.diag([1.0, 1.0, 0.0])])
def test_nonpositive_jacobian_rejected(F):
    with pytest.raises(NonPositiveJacobian):
        make_deformation_state(F)


def test_non_finite_rejected():
    F = np.eye(3)
    F[0, 0] = np.nan
    with pytest.raises(ValueError):
        make_deformation_state(F)


@pytest.mark.parametrize("kind,a,b,slot", [
    ("I4", 1, 1, 4), ("I5", 1, 1, 5), ("I4", 1, 2, 6), ("I5", 1, 2, 7),
    ("I4", 2, 2, 8), ("I5", 2, 2, 9), ("I4", 1, 3, 10), ("I5", 1, 3, 11),
    ("I4", 2, 3, 12), ("I5", 2, 3, 13), ("I4", 3, 3, 14), ("I5", 3, 3, 15),
])
def test_invariant_index_table(kind, a, b, slot):
    assert invariant_index(kind, a, b) == slot
    assert slot_pair(slot) == (kind, a, b)


def test_isotropic_indices():
    assert invariant_index("I1") == 1
    assert invariant_index("i2") == 2
    assert invariant_index("I3", None, None) == 3


def test_index_map_is_a_bijection():
    slots = [invariant_index(k) for k in ("I1", "I2", "I3")]
    slots += [invariant_index(k, a, b) for k in ("I4", "I5") for a in (1, 2, 3) for b in (1, 2, 3) if b >= a]
    assert sorted(slots) == list(range(1, 16))
    assert set(SLOT_TABLE) == set(range(1, 16))


@pytest.mark.parametrize("args", [("I4", 2, 1), ("I4", 0, 1), ("I5", 1, 4), ("I4", None, None)])
def test_invalid_pairs(args):
    with pytest.raises(InvalidPair):
        invariant_index(*args)


def test_unknown_kind():
    with pytest.raises(ValueError):
        invariant_index("I6", 1, 1)


def test_ninv_for():
    assert [ninv_for(n) for n in range(4)] == [3, 5, 9, 15]


def test_reference_invariants():
    inv = compute_invariants(make_deformation_state(np.eye(3)), AXES)
    expected = [3, 3, 1, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1]
    np.testing.assert_array_equal(inv.values, expected)
    np.testing.assert_array_equal(inv.offsets, expected)


def test_simple_shear_invariants():
    F = np.eye(3)
    F[0, 1] = 0.5
    inv = compute_invariants(make_deformation_state(F), AXES)
    assert inv.value(1) == pytest.approx(3.25, rel=1e-15)
    assert inv.value(2) == pytest.approx(3.25, rel=1e-15)
    assert inv.value(3) == pytest.approx(1.0, rel=1e-15)
    assert inv.value(4) == pytest.approx(1.0, rel=1e-15)
    assert inv.value(8) == pytest.approx(1.25, rel=1e-15)
    assert inv.value(6) == pytest.approx(0.5, rel=1e-15)


def test_goh_isotropic_mixed_row():
    kappa = 1.0 / 3.0
    k = [0.0] * 15
    k[0], k[3] = kappa, 1.0 - 3.0 * kappa
    row = MixedInvariantRow(101, k)
    F = np.diag([1.2, 0.95, 1.0 / (1.2 * 0.95)])
    inv = compute_invariants(make_deformation_state(F), FiberSet.from_vectors([[1, 0, 0]]), [row])
    assert inv.value(101) == pytest.approx(inv.value(1) / 3.0, rel=1e-15)
    assert inv.offset(101) == pytest.approx(1.0, rel=1e-15)
    assert inv.shifted(101) == pytest.approx((inv.value(1) - 3.0) / 3.0, rel=1e-12)


def test_unused_pairs_pinned_to_offsets():
    F = np.array([[1.1, 0.2, 0.0], [0.0, 0.9, 0.1], [0.05, 0.0, 1.0]])
    fib = FiberSet.from_vectors([[1, 0, 0]])
    inv = compute_invariants(make_deformation_state(F), fib)
    for slot in range(6, 16):
        assert inv.shifted(slot) == 0.0


def test_reference_offsets_follow_fiber_geometry():
    c, s = np.cos(0.3), np.sin(0.3)
    fib = FiberSet.from_vectors([[c, s, 0], [c, -s, 0]])
    off = reference_offsets(fib)
    assert off[5] == pytest.approx(c * c - s * s)
    assert off[4] == pytest.approx(1.0)
    assert off[13] == 1.0


def test_nonunit_fiber_rejected_unless_normalized():
    with pytest.raises(ValueError):
        FiberSet.from_vectors([[2.0, 0.0, 0.0]])
    fib = FiberSet.from_vectors([[2.0, 0.0, 0.0]], normalize=True)
    np.testing.assert_array_equal(fib.n0[0], [1.0, 0.0, 0.0])


def test_too_many_fibers():
    with pytest.raises(ValueError):
        FiberSet.from_vectors(np.eye(4)[:, :3].tolist() + [[1, 0, 0]])


def test_gradient_of_j_at_identity():
    G = invariant_gradients(make_deformation_state(np.eye(3)), AXES)
    np.testing.assert_allclose(G[2], np.eye(3), atol=1e-15)


def test_gradient_of_i1bar_at_identity():
    G = invariant_gradients(make_deformation_state(np.eye(3)), AXES)
    np.testing.assert_allclose(G[0], np.zeros((3, 3)), atol=1e-15)


def test_gradient_of_i4_at_identity():
    G = invariant_gradients(make_deformation_state(np.eye(3)), AXES)
    np.testing.assert_allclose(G[3], np.diag([4 / 3, -2 / 3, -2 / 3]), atol=1e-15)
    assert np.trace(G[3]) == pytest.approx(0.0, abs=1e-15)


def _fd_gradients(F, fib, h=1e-6):
    out = np.zeros((15, 3, 3))
    for k in range(3):
        for l in range(3):
            E = np.zeros((3, 3))
            E[k, l] = h
            vp = compute_invariants(make_deformation_state(F + E), fib).values
            vm = compute_invariants(make_deformation_state(F - E), fib).values
            out[:, k, l] = (vp - vm) / (2 * h)
    return out


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(3)
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    fib = FiberSet.from_frame(Q)
    for _ in range(5):
        F = np.eye(3) + 0.2 * rng.normal(size=(3, 3))
        G = invariant_gradients(make_deformation_state(F), fib)
        np.testing.assert_allclose(G, _fd_gradients(F, fib), atol=1e-8)

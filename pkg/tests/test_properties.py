import math

import numpy as np
from hypothesis import given, settings, strategies as st

from cavityfield.classical import (FieldSnapshot, ModeState, h2_terms, q_dot_of_t, q_of_t, q_prime_of_t,
                                   synthesize_first_solution)
from cavityfield.duality import canonical_angle, duality_rotate
from cavityfield.fock import (FockContext, canonical_ops, commutator, field_operators, hermiticity_error,
                              ladder_ops)
from cavityfield.modes import CavityConfig, ZGrid

NAT = CavityConfig()
GRID = ZGrid(33, NAT.L)

finite = st.floats(-5, 5, allow_nan=False)
angles = st.floats(-20, 20, allow_nan=False)
complexes = st.builds(complex, finite, finite)


@st.composite
def snapshots(draw):
    re = draw(st.lists(finite, min_size=66, max_size=66))
    im = draw(st.lists(finite, min_size=66, max_size=66))
    vals = np.array(re) + 1j * np.array(im)
    return FieldSnapshot(GRID, vals[:33], vals[33:], 0.0)


@given(snapshots(), angles)
def test_rotation_preserves_pointwise_norm(snap, theta):
    out = duality_rotate(snap, theta, NAT)
    before = np.abs(snap.E_x) ** 2 + np.abs(snap.H_y) ** 2
    after = np.abs(out.E_x) ** 2 + np.abs(out.H_y) ** 2
    assert np.all(np.abs(after - before) <= 1e-13 * np.maximum(before, 1e-300) + 1e-300)


@given(snapshots(), angles, angles)
def test_rotation_group_law(snap, t1, t2):
    composed = duality_rotate(duality_rotate(snap, t2, NAT), t1, NAT)
    direct = duality_rotate(snap, (t1 + t2) % (2 * math.pi), NAT)
    scale = max(1.0, np.abs(snap.E_x).max(), np.abs(snap.H_y).max())
    assert np.max(np.abs(composed.E_x - direct.E_x)) <= 1e-13 * scale
    assert np.max(np.abs(composed.H_y - direct.H_y)) <= 1e-13 * scale


@given(snapshots())
def test_quarter_turn_inverse(snap):
    back = duality_rotate(duality_rotate(snap, math.pi / 2, NAT), -math.pi / 2, NAT)
    scale = max(1.0, np.abs(snap.E_x).max(), np.abs(snap.H_y).max())
    assert np.max(np.abs(back.E_x - snap.E_x)) <= 1e-14 * scale
    assert np.max(np.abs(back.H_y - snap.H_y)) <= 1e-14 * scale


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_canonical_angle_in_range(theta):
    value = canonical_angle(theta)
    assert 0.0 <= value < 2 * math.pi
    assert math.isclose(math.cos(value), math.cos(theta), abs_tol=1e-9)


@given(complexes, complexes, st.floats(0.1, 10), st.floats(-50, 50))
def test_q_satisfies_oscillator_relations(c1, c2, nu, t):
    s = ModeState(1, c1, c2)
    q, qd, qp = q_of_t(s, nu, t), q_dot_of_t(s, nu, t), q_prime_of_t(s, nu, t)
    scale = abs(c1) + abs(c2) + 1e-300
    # q' = -dq/dt / nu^2 when the integration constant is zero
    assert abs(qp + qd / nu**2) <= 1e-13 * scale / nu
    assert abs(q) <= scale * (1 + 1e-15)


@given(complexes, st.integers(1, 6), st.floats(-30, 30))
def test_h2_identity_property(c1, alpha, t):
    modes = [ModeState.real(alpha, c1)]
    direct, canonical = h2_terms(modes, NAT, t)
    assert abs(direct - canonical) <= 1e-13 * max(abs(direct), 1e-300)


@given(st.integers(2, 40))
def test_ladder_commutator_structure(dim):
    a, ad = ladder_ops(FockContext(dim))
    comm = commutator(a, ad)
    n = dim - 1
    assert np.max(np.abs(comm[:n, :n] - np.eye(n))) <= 1e-13
    assert abs(comm[n, n] + n) <= 4 * math.ulp(float(n))


@given(st.integers(2, 24), st.floats(0.1, 10), st.floats(0.1, 10))
def test_canonical_hermitian(dim, nu, mass):
    q, p = canonical_ops(FockContext(dim, nu=nu, mass=mass))
    assert hermiticity_error(q) <= 1e-14 * max(1.0, np.abs(q).max())
    assert hermiticity_error(p) <= 1e-14 * max(1.0, np.abs(p).max())


@settings(max_examples=50)
@given(st.integers(1, 4), st.sampled_from([1, 2]), st.floats(0, 1), st.floats(-10, 10))
def test_field_operators_hermitian(alpha, family, zfrac, t):
    ctx = FockContext.for_mode(NAT, alpha, 10)
    E, H = field_operators(family, ctx, NAT, alpha, zfrac * NAT.L, t)
    assert hermiticity_error(E) <= 1e-14 * max(1.0, np.abs(E).max())
    assert hermiticity_error(H) <= 1e-14 * max(1.0, np.abs(H).max())


@settings(max_examples=30)
@given(st.lists(complexes, min_size=1, max_size=4), st.floats(-10, 10))
def test_physical_snapshots_real(amps, t):
    modes = [ModeState.real(i + 1, c) for i, c in enumerate(amps)]
    snap = synthesize_first_solution(modes, NAT, GRID, t)
    scale = max(np.abs(snap.E_x).max(), np.abs(snap.H_y).max(), 1e-300)
    assert max(np.abs(snap.E_x.imag).max(), np.abs(snap.H_y.imag).max()) <= 1e-12 * scale

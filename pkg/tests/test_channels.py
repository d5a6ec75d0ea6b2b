import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import jacobi_eigh, partial_trace_loops
from qent import channels, entangle, linalg, states
from qent.errors import (
    BadParam,
    DimensionMismatch,
    IncompleteKraus,
    ShapeMismatch,
    UnknownChannel,
)

seeds = st.integers(0, 2**32 - 1)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0])


def bell():
    return entangle.standard_compound(states.maximally_mixed(2))


def test_identity_channel():
    ch = channels.make_channel([np.eye(2)])
    assert (ch.dim_in, ch.dim_out, len(ch)) == (2, 2, 1)


@pytest.mark.parametrize("p", [0.0, 0.1, 0.5, 0.9, 1.0])
def test_pauli_kraus_set_complete(p):
    ks = [np.sqrt(1 - p) * np.eye(2)] + [np.sqrt(p / 3) * s for s in (X, Y, Z)]
    assert channels.completeness_residual(ks) < 1e-12
    channels.make_channel(ks)


def test_incomplete_and_shape_errors():
    with pytest.raises(IncompleteKraus):
        channels.make_channel([np.diag([1, 0.5])])
    with pytest.raises(ShapeMismatch):
        channels.make_channel([np.eye(2), np.eye(3)])
    with pytest.raises(ShapeMismatch):
        channels.make_channel([])


def test_apply_examples():
    rho = states.random_density(2, seed=7)
    out = channels.apply_state(channels.identity_channel(2), rho)
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-14)
    out = channels.apply_state(channels.depolarizing(1.0), rho)
    np.testing.assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-14)
    g = 0.3
    out = channels.apply_state(channels.amplitude_damping(g), np.diag([0.0, 1.0]))
    np.testing.assert_allclose(out.matrix, np.diag([g, 1 - g]), atol=1e-14)
    with pytest.raises(DimensionMismatch):
        channels.apply_state(channels.identity_channel(3), rho)


def test_output_factor_examples():
    w = bell()
    same = channels.apply_to_output_factor(channels.identity_channel(2), w)
    np.testing.assert_allclose(same.omega, w.omega, atol=1e-14)
    full = channels.apply_to_output_factor(channels.depolarizing(1.0), w)
    np.testing.assert_allclose(full.omega, np.eye(4) / 4, atol=1e-14)


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.8, 1.0])
def test_depolarized_bell_spectrum(p):
    out = channels.apply_to_output_factor(channels.depolarizing(p), bell())
    lam = np.sort(jacobi_eigh(out.omega)[0])
    np.testing.assert_allclose(lam, np.sort([1 - 3 * p / 4] + [p / 4] * 3), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_output_factor_marginals(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    w = entangle.compound_from_amplitude(entangle.make_amplitude(m / np.linalg.norm(m), 2, 3))
    ch = channels.random_channel(3, 2, int(rng.integers(2, 5)), seed=rng)
    out = channels.apply_to_output_factor(ch, w)
    np.testing.assert_allclose(
        partial_trace_loops(out.omega, 2, 2, keep="G"),
        partial_trace_loops(w.omega, 2, 3, keep="G"),
        atol=1e-10,
    )
    expected = channels.apply_matrix(ch, partial_trace_loops(w.omega, 2, 3, keep="H"))
    np.testing.assert_allclose(partial_trace_loops(out.omega, 2, 2, keep="H"), expected, atol=1e-10)


def test_probe_factor_dimension_check():
    with pytest.raises(DimensionMismatch):
        channels.apply_to_probe_factor(channels.identity_channel(3), bell())


def test_dilate_identity_and_two_kraus():
    iso = channels.dilate(channels.identity_channel(2))
    np.testing.assert_allclose(iso.matrix, np.eye(2), atol=0)
    iso = channels.dilate(channels.amplitude_damping(0.4))
    assert iso.matrix.shape == (2, 4)
    assert channels.isometry_normalization_residual(iso) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4), seeds)
def test_dilate_round_trip(d_in, d_out, n, seed):
    if d_out * n < d_in:
        return
    ch = channels.random_channel(d_in, d_out, n, seed=seed)
    rho = states.random_density(d_in, seed=seed)
    iso = channels.dilate(ch)
    assert channels.isometry_normalization_residual(iso) < 1e-10
    via_y = channels.apply_isometry(iso, rho)
    np.testing.assert_allclose(via_y, channels.apply_matrix(ch, rho.matrix), atol=1e-10)


def test_zoo():
    ch = channels.channel_zoo("identity", 3)
    assert len(ch) == 1
    np.testing.assert_allclose(ch.kraus[0], np.eye(3))
    rho = states.random_density(2, seed=2)
    out = channels.apply_state(channels.channel_zoo("depolarizing", 0.0), rho)
    np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-14)
    r1 = channels.channel_zoo("random", 2, 2, 3, 11)
    r2 = channels.channel_zoo("random", 2, 2, 3, 11)
    assert channels.completeness_residual(r1.kraus) < 1e-9
    np.testing.assert_array_equal(r1.stacked, r2.stacked)
    h = np.array([[0, 1], [1, 0]])
    channels.channel_zoo("unitary", h)
    with pytest.raises(UnknownChannel):
        channels.channel_zoo("erasure", 0.1)
    for name in channels.FAMILIES:
        with pytest.raises(BadParam):
            channels.channel_zoo(name, 1.5)
        with pytest.raises(BadParam):
            channels.channel_zoo(name, -0.1)
    with pytest.raises(BadParam):
        channels.channel_zoo("unitary", np.diag([1.0, 2.0]))


def test_qutrit_depolarizing_mixes():
    rho = states.random_density(3, seed=4)
    out = channels.apply_state(channels.depolarizing(0.3, dim=3), rho)
    np.testing.assert_allclose(out.matrix, 0.7 * rho.matrix + 0.3 * np.eye(3) / 3, atol=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), seeds)
def test_trace_preservation(d_in, d_out, n, seed):
    if d_out * n < d_in:
        return
    ch = channels.random_channel(d_in, d_out, n, seed=seed)
    out = channels.apply_state(ch, states.random_density(d_in, seed=seed + 1))
    assert abs(np.trace(out.matrix) - 1) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), seeds)
def test_heisenberg_duality(d, seed):
    rng = np.random.default_rng(seed)
    ch = channels.random_channel(d, d, 2, seed=rng)
    rho = states.random_density(d, seed=rng).matrix
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    lhs = np.trace(channels.apply_matrix(ch, rho) @ a)
    rhs = np.trace(rho @ channels.heisenberg(ch, a))
    assert abs(lhs - rhs) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), seeds)
def test_deterministic_channel_preserves_spectrum(d, seed):
    u = linalg.polar_isometry(np.random.default_rng(seed).standard_normal((d, d)) + 0j)
    rho = states.random_density(d, seed=seed)
    out = channels.apply_state(channels.unitary_channel(u), rho)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(rho.matrix), atol=1e-9
    )


def test_json_round_trip():
    ch = channels.random_channel(2, 3, 2, seed=5)
    back = channels.channel_from_json(channels.channel_to_json(ch))
    np.testing.assert_allclose(back.stacked, ch.stacked, atol=0)
    bad = channels.channel_to_json(ch) | {"dim_in": 3}
    with pytest.raises(ShapeMismatch):
        channels.channel_from_json(bad)

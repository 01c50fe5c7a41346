import json
import math

import numpy as np
import pytest

from conftest import random_spectral, random_xstate, random_xstate_raw
from xsim.errors import ContractError, ShapeError
from xsim.xstate import (
    XSpectral,
    XState,
    bell_coherence,
    bell_coherence_block,
    canonicalize_spectral,
    concurrence_wootters_oracle,
    concurrence_x,
    from_spectral,
    leakage,
    strip_phases,
    to_spectral,
    xstate_from_matrix,
)

SQ3 = math.sqrt(3.0)


def test_shape_map_frozen_point():
    s = XSpectral(0.4, 0.3, 0.2, 0.1, math.pi / 6, math.pi / 6)
    x = from_spectral(s)
    np.testing.assert_allclose([x.a, x.b, x.c, x.d], [0.35, 0.15, 0.25, 0.25], atol=1e-15)
    assert x.w == pytest.approx(0.05 * SQ3, abs=1e-15)
    assert x.z == pytest.approx(0.05 * SQ3, abs=1e-15)
    # both concurrence branches negative here
    assert concurrence_x(x) == 0.0
    assert concurrence_wootters_oracle(x.matrix()) == pytest.approx(0.0, abs=1e-12)


def test_concurrence_pure_vertex():
    x = from_spectral(XSpectral(1.0, 0.0, 0.0, 0.0, math.pi / 6, 0.0))
    assert concurrence_x(x) == pytest.approx(SQ3 / 2.0, abs=1e-14)
    x = from_spectral(XSpectral(1.0, 0.0, 0.0, 0.0, math.pi / 4, 0.0))
    assert concurrence_x(x) == pytest.approx(1.0, abs=1e-14)
    assert concurrence_x(from_spectral(XSpectral(0.25, 0.25, 0.25, 0.25, 0.3, 1.1))) == 0.0


def test_concurrence_matches_oracle_on_random_states():
    rng = np.random.default_rng(17)
    for _ in range(200):
        x = random_xstate_raw(rng)
        assert concurrence_x(x) == pytest.approx(
            concurrence_wootters_oracle(x.matrix()), abs=1e-12
        )


def test_matrix_layout_and_validate():
    x = XState(0.4, 0.1, 0.15, 0.35, 0.2 + 0.1j, -0.05j)
    m = x.matrix()
    assert m[0, 3] == 0.2 + 0.1j and m[3, 0] == 0.2 - 0.1j
    assert m[1, 2] == -0.05j and m[2, 1] == 0.05j
    x.validate()
    with pytest.raises(ContractError):
        XState(0.5, 0.5, 0.0, 0.0, 0.3, 0.0).validate()  # |w| > sqrt(a d)
    with pytest.raises(ContractError):
        XState(0.6, 0.1, 0.1, 0.1, 0.0, 0.0).validate()  # trace != 1


def test_round_trip_spectral():
    rng = np.random.default_rng(23)
    for _ in range(300):
        s = random_spectral(rng)
        x = from_spectral(s)
        back = from_spectral(to_spectral(x))
        np.testing.assert_allclose(back.matrix(), x.matrix(), atol=1e-10)


def test_round_trip_degenerate_sectors():
    rng = np.random.default_rng(29)
    for _ in range(60):
        p0 = rng.uniform(0.1, 0.4)
        p1 = rng.uniform(0.05, 0.3)
        rest = 1.0 - 2 * p0 - p1
        if rest < 0.01:
            continue
        # p00 == p10 makes a == d regardless of theta
        s = XSpectral(p0, p1, p0, rest, rng.uniform(0, np.pi / 2), rng.uniform(0, np.pi / 2))
        x = from_spectral(s)
        back = from_spectral(to_spectral(x))
        np.testing.assert_allclose(back.matrix(), x.matrix(), atol=1e-10)


def test_maximally_mixed_inverts_through_degenerate_branch():
    s = to_spectral(XState(0.25, 0.25, 0.25, 0.25, 0.0, 0.0))
    assert s.theta == pytest.approx(math.pi / 4)
    assert s.phi == pytest.approx(math.pi / 4)
    np.testing.assert_allclose(s.probs, [0.25, 0.25, 0.25, 0.25], atol=1e-15)


def test_to_spectral_rejects_complex_corners():
    x = XState(0.4, 0.1, 0.15, 0.35, 0.1j, 0.0)
    with pytest.raises(ContractError):
        to_spectral(x)


def test_canonicalize_folds_angles_and_swaps_weights():
    p = (0.4, 0.3, 0.2, 0.1)
    s = canonicalize_spectral(p, math.pi / 6, math.pi / 6)
    assert (s.p00, s.p01, s.p10, s.p11) == p
    # pi periodicity leaves everything alone
    s2 = canonicalize_spectral(p, math.pi / 6 + math.pi, math.pi / 6 - math.pi)
    assert s2.theta == pytest.approx(math.pi / 6)
    assert s2.phi == pytest.approx(math.pi / 6)
    assert (s2.p00, s2.p01, s2.p10, s2.p11) == p
    # a pi/2 shift swaps that sector's weights
    s3 = canonicalize_spectral(p, math.pi / 6 + math.pi / 2, math.pi / 6)
    assert (s3.p00, s3.p10) == (p[2], p[0])
    assert (s3.p01, s3.p11) == (p[1], p[3])
    rng = np.random.default_rng(31)
    for _ in range(100):
        raw_theta = rng.uniform(-10, 10)
        raw_phi = rng.uniform(-10, 10)
        probs = rng.dirichlet(np.ones(4))
        folded = canonicalize_spectral(probs, raw_theta, raw_phi).validate()
        a = from_spectral(folded)
        b = from_spectral(XSpectral(probs[0], probs[1], probs[2], probs[3], raw_theta, raw_phi))
        np.testing.assert_allclose(a.matrix(), b.matrix(), atol=1e-12)


def test_leakage_and_xstate_from_matrix():
    x = random_xstate(np.random.default_rng(37))
    assert leakage(x.matrix()) == 0.0
    got = xstate_from_matrix(x.matrix())
    np.testing.assert_allclose(got.matrix(), x.matrix(), atol=0)
    # |+><+| x |0><0| has four off-X entries of 0.25 each
    plus = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    zero = np.diag([1.0, 0.0]).astype(complex)
    rho = np.kron(plus, zero)
    assert leakage(rho) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(ShapeError) as err:
        xstate_from_matrix(rho)
    assert err.value.leakage == pytest.approx(1.0, abs=1e-14)


def test_strip_phases_round_trip():
    rng = np.random.default_rng(41)
    for _ in range(100):
        x = random_xstate_raw(rng)
        real_x, (alpha, beta) = strip_phases(x.matrix())
        assert complex(real_x.w).imag == 0.0 and complex(real_x.z).imag == 0.0
        assert complex(real_x.w).real >= 0.0 and complex(real_x.z).real >= 0.0
        # populations untouched, concurrence invariant
        np.testing.assert_allclose(
            [real_x.a, real_x.b, real_x.c, real_x.d], [x.a, x.b, x.c, x.d], atol=0
        )
        assert concurrence_x(real_x) == pytest.approx(concurrence_x(x), abs=1e-14)
        # conjugating by the negated phases undoes the strip
        rot = np.diag([1.0, np.exp(-1j * alpha)]).astype(complex)
        rot = np.kron(rot, np.diag([1.0, np.exp(-1j * beta)]))
        restored = rot @ real_x.matrix() @ rot.conj().T
        np.testing.assert_allclose(restored, x.matrix(), atol=1e-13)


def test_strip_phases_preserves_spectrum():
    rng = np.random.default_rng(43)
    x = random_xstate_raw(rng)
    real_x, _ = strip_phases(x.matrix())
    np.testing.assert_allclose(
        np.linalg.eigvalsh(real_x.matrix()), np.linalg.eigvalsh(x.matrix()), atol=1e-12
    )


def test_bell_coherence():
    assert bell_coherence(0.6) == pytest.approx(0.6)
    assert bell_coherence(-0.25) == pytest.approx(0.25)
    with pytest.raises(ContractError):
        bell_coherence(1.5)
    block = np.diag([0.8, 0.2]).astype(complex)
    # diag(n0, n1) has Bell-basis coherence |n0 - n1|
    assert bell_coherence_block(block) == pytest.approx(0.6, abs=1e-14)


def test_json_round_trips():
    x = XState(0.4, 0.1, 0.15, 0.35, 0.2 + 0.1j, -0.05j)
    assert XState.from_json(json.loads(json.dumps(x.to_json()))) == x
    s = XSpectral(0.4, 0.3, 0.2, 0.1, 0.5, 0.7)
    assert XSpectral.from_json(json.loads(json.dumps(s.to_json()))) == s

"""Two-qubit X-states: spectral parameterization, concurrence, phase stripping.

An X-state has nonzero entries only on the main diagonal (a, b, c, d) and the
anti-diagonal corners w = <00|rho|11> and z = <01|rho|10>:

    [[a, 0, 0, w],
     [0, b, z, 0],
     [0, z*, c, 0],
     [w*, 0, 0, d]]

Every real X-state is a mixture of the four orthonormal entangled basis states

    |e00> = cos(theta)|00> + sin(theta)|11>
    |e01> = sin(phi)|01> + cos(phi)|10>
    |e10> = cos(phi)|01> - sin(phi)|10>
    |e11> = -sin(theta)|00> + cos(theta)|11>

with mixing weights carried by XSpectral. The weight labels follow the
preparation circuit's basis map |i,j> -> |e_{i, i xor j}>: p00 weights |e00>,
p01 weights |e01>, p10 weights |e11>, and p11 weights |e10>. With that
labeling the shape map reads

    a = p00 cos^2(theta) + p10 sin^2(theta)
    d = p00 sin^2(theta) + p10 cos^2(theta)
    b = p01 sin^2(phi) + p11 cos^2(phi)
    c = p01 cos^2(phi) + p11 sin^2(phi)
    w = (p00 - p10) cos(theta) sin(theta)
    z = (p01 - p11) cos(phi) sin(phi)

and the concurrence of any X-state (complex corners included) is

    C = 2 max{0, |w| - sqrt(b c), |z| - sqrt(a d)}.

Complex corner phases are local: a diagonal unitary
diag(1, e^{i alpha}) x diag(1, e^{i beta}) removes them without touching
populations or entanglement (``strip_phases``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InfeasibleStateError, ShapeError
from .linalg import SY, herm_eig, kron

_DEGENERATE_ATOL = 1e-12

# Row/column index pairs that must vanish for a matrix to be X-shaped.
NON_X_INDICES = ((0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2))


@dataclass(frozen=True)
class XState:
    """X-shaped two-qubit density matrix, stored by its six free entries."""

    a: float
    b: float
    c: float
    d: float
    w: complex
    z: complex

    def validate(self) -> "XState":
        diag = (self.a, self.b, self.c, self.d)
        if any(p < -1e-12 for p in diag):
            raise ContractError(f"X-state has negative population: {diag}")
        if abs(sum(diag) - 1.0) > 1e-12:
            raise ContractError(f"X-state populations sum to {sum(diag)!r}, not 1")
        if abs(self.w) > math.sqrt(max(self.a * self.d, 0.0)) + 1e-10:
            raise ContractError("X-state corner |w| exceeds sqrt(a d)")
        if abs(self.z) > math.sqrt(max(self.b * self.c, 0.0)) + 1e-10:
            raise ContractError("X-state corner |z| exceeds sqrt(b c)")
        return self

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.a, self.b, self.c, self.d
        m[0, 3], m[3, 0] = self.w, np.conj(self.w)
        m[1, 2], m[2, 1] = self.z, np.conj(self.z)
        return m

    def is_real(self, atol: float = 1e-12) -> bool:
        return abs(complex(self.w).imag) <= atol and abs(complex(self.z).imag) <= atol

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "d": self.d,
            "w_re": complex(self.w).real,
            "w_im": complex(self.w).imag,
            "z_re": complex(self.z).real,
            "z_im": complex(self.z).imag,
        }

    @staticmethod
    def from_json(obj: dict) -> "XState":
        return XState(
            a=float(obj["a"]),
            b=float(obj["b"]),
            c=float(obj["c"]),
            d=float(obj["d"]),
            w=complex(float(obj["w_re"]), float(obj["w_im"])),
            z=complex(float(obj["z_re"]), float(obj["z_im"])),
        )


@dataclass(frozen=True)
class XSpectral:
    """Spectral parameters of a real X-state: four weights and two angles."""

    p00: float
    p01: float
    p10: float
    p11: float
    theta: float
    phi: float

    @property
    def probs(self) -> np.ndarray:
        return np.array([self.p00, self.p01, self.p10, self.p11])

    def validate(self) -> "XSpectral":
        p = self.probs
        if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-12:
            raise ContractError(f"spectral weights invalid: {p}")
        if not (-1e-12 <= self.theta <= math.pi / 2 + 1e-12):
            raise ContractError(f"theta {self.theta} outside [0, pi/2]")
        if not (-1e-12 <= self.phi <= math.pi / 2 + 1e-12):
            raise ContractError(f"phi {self.phi} outside [0, pi/2]")
        return self

    def to_json(self) -> dict:
        return {"p": [self.p00, self.p01, self.p10, self.p11], "theta": self.theta, "phi": self.phi}

    @staticmethod
    def from_json(obj: dict) -> "XSpectral":
        p = [float(x) for x in obj["p"]]
        if len(p) != 4:
            raise ContractError("spectral weights must have four entries")
        return XSpectral(p[0], p[1], p[2], p[3], float(obj["theta"]), float(obj["phi"]))


def from_spectral(s: XSpectral) -> XState:
    """Shape map from spectral parameters to the six X-state entries."""
    ct, st = math.cos(s.theta), math.sin(s.theta)
    cf, sf = math.cos(s.phi), math.sin(s.phi)
    return XState(
        a=s.p00 * ct * ct + s.p10 * st * st,
        d=s.p00 * st * st + s.p10 * ct * ct,
        b=s.p01 * sf * sf + s.p11 * cf * cf,
        c=s.p01 * cf * cf + s.p11 * sf * sf,
        w=complex((s.p00 - s.p10) * ct * st),
        z=complex((s.p01 - s.p11) * cf * sf),
    )


def _invert_pair(big: float, small: float, corner: float):
    """Solve one 2x2 sector: populations (big, small) and real corner.

    Returns (angle, weight_plus, weight_minus) such that
    big = w+ cos^2 + w- sin^2, small = w+ sin^2 + w- cos^2,
    corner = (w+ - w-) cos sin.
    """
    if abs(big - small) < _DEGENERATE_ATOL:
        ang = math.pi / 4
        return ang, big + corner, big - corner
    ang = 0.5 * math.atan2(2.0 * corner, big - small)
    if ang < 0:
        ang += math.pi / 2
    c2, s2 = math.cos(ang) ** 2, math.sin(ang) ** 2
    cos2 = math.cos(2.0 * ang)
    wp = (big * c2 - small * s2) / cos2
    wm = (-big * s2 + small * c2) / cos2
    return ang, wp, wm


def to_spectral(x: XState) -> XSpectral:
    """Invert the shape map for a real X-state.

    Raises InfeasibleStateError if the recovered weights fall outside [0, 1]
    beyond 1e-10, and ContractError on complex corners.
    """
    if not x.is_real(atol=1e-10):
        raise ContractError("to_spectral needs a real X-state; strip phases first")
    theta, p00, p10 = _invert_pair(x.a, x.d, complex(x.w).real)
    phi, p01, p11 = _invert_pair(x.c, x.b, complex(x.z).real)
    weights = (p00, p01, p10, p11)
    if min(weights) < -1e-10 or max(weights) > 1.0 + 1e-10:
        raise InfeasibleStateError(f"recovered weights outside [0, 1]: {weights}")
    return XSpectral(p00, p01, p10, p11, theta, phi)


def canonicalize_spectral(p, theta: float, phi: float) -> XSpectral:
    """Fold arbitrary angles into [0, pi/2) by permuting weights.

    The shape map is pi-periodic in each angle, and a shift by pi/2 swaps the
    two weights of that angle's sector. Evolution sweeps use this to hand
    XSpectral values that satisfy the canonical range contract.
    """
    p00, p01, p10, p11 = (float(v) for v in p)
    theta = math.fmod(theta, math.pi)
    if theta < 0:
        theta += math.pi
    if theta >= math.pi / 2:
        theta -= math.pi / 2
        p00, p10 = p10, p00
    phi = math.fmod(phi, math.pi)
    if phi < 0:
        phi += math.pi
    if phi >= math.pi / 2:
        phi -= math.pi / 2
        p01, p11 = p11, p01
    return XSpectral(p00, p01, p10, p11, theta, phi)


def concurrence_x(x: XState) -> float:
    """Closed-form concurrence of an X-state."""
    t1 = abs(x.w) - math.sqrt(max(x.b * x.c, 0.0))
    t2 = abs(x.z) - math.sqrt(max(x.a * x.d, 0.0))
    return 2.0 * max(0.0, t1, t2)


def concurrence_wootters_oracle(rho: np.ndarray) -> float:
    """Spectral concurrence of an arbitrary two-qubit density matrix.

    Oracle route: with Y = sy x sy and the spin-flipped state
    rho~ = Y conj(rho) Y, the concurrence is max(0, l1 - l2 - l3 - l4)
    where l_i are the decreasing square roots of the eigenvalues of
    rho rho~. Factoring rho = L L+ turns them into the singular values of
    L+ Y conj(L), which stay accurate at machine precision even when rho
    is rank deficient (a direct sqrt of near-zero eigenvalues would
    amplify roundoff to ~1e-8). The singular values come from the
    Hermitian embedding [[0, A], [A+, 0]], whose spectrum is {+/- s_i}.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ContractError("concurrence_wootters_oracle expects a 4x4 density matrix")
    yy = kron(SY, SY).real
    w, v = herm_eig((rho + rho.conj().T) / 2.0)
    factor = v * np.sqrt(np.clip(w, 0.0, None))
    a = factor.conj().T @ yy @ factor.conj()
    emb = np.zeros((8, 8), dtype=complex)
    emb[:4, 4:] = a
    emb[4:, :4] = a.conj().T
    sing, _ = herm_eig(emb)
    lam = sing[:4]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def leakage(rho: np.ndarray) -> float:
    """Sum of absolute values of the eight entries outside the X shape."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ContractError("leakage expects a 4x4 matrix")
    return float(sum(abs(rho[i, j]) for i, j in NON_X_INDICES))


def xstate_from_matrix(rho: np.ndarray, atol: float = 1e-9) -> XState:
    """Read the six X entries off a matrix, rejecting non-X input."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ContractError("xstate_from_matrix expects a 4x4 matrix")
    leak = leakage(rho)
    if leak > atol:
        raise ShapeError(f"matrix is not X-shaped (leakage {leak:.3e})", leak)
    return XState(
        a=rho[0, 0].real,
        b=rho[1, 1].real,
        c=rho[2, 2].real,
        d=rho[3, 3].real,
        w=complex(rho[0, 3]),
        z=complex(rho[1, 2]),
    )


def strip_phases(rho: np.ndarray, atol: float = 1e-9):
    """Remove the corner phases of an X-shaped density matrix.

    Conjugation by diag(1, e^{i alpha}) x diag(1, e^{i beta}) multiplies
    w by e^{-i(alpha+beta)} and z by e^{i(beta-alpha)}; solving for the
    corner arguments makes both real and nonnegative.

    Returns (real XState, (alpha, beta)). Applying the inverse rotation,
    angles (-alpha, -beta), restores the original corners.
    """
    x = xstate_from_matrix(rho, atol=atol)
    mu = math.atan2(complex(x.w).imag, complex(x.w).real) if abs(x.w) > 0 else 0.0
    nu = math.atan2(complex(x.z).imag, complex(x.z).real) if abs(x.z) > 0 else 0.0
    alpha = (mu + nu) / 2.0
    beta = (mu - nu) / 2.0
    real_x = XState(x.a, x.b, x.c, x.d, complex(abs(x.w)), complex(abs(x.z)))
    return real_x, (alpha, beta)


def bell_coherence(lam: float) -> float:
    """l1 coherence of diag((1+lam)/2, (1-lam)/2) in its Bell-pair basis."""
    if not -1.0 - 1e-12 <= lam <= 1.0 + 1e-12:
        raise ContractError(f"sector coherence parameter {lam} outside [-1, 1]")
    return abs(float(lam))


def bell_coherence_block(block: np.ndarray) -> float:
    """l1 coherence of a 2x2 sector state in the Bell basis of that sector.

    The Bell pair of either parity sector is (|u> +/- |v>)/sqrt(2) for the
    sector's computational pair (u, v); rotating by the corresponding
    Hadamard and doubling the off-diagonal magnitude gives the coherence.
    """
    block = np.asarray(block, dtype=complex)
    if block.shape != (2, 2):
        raise ContractError("bell_coherence_block expects a 2x2 block")
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)
    rotated = h @ block @ h
    return float(2.0 * abs(rotated[0, 1]))


def xstate_json_dumps(x: XState) -> str:
    return json.dumps(x.to_json(), sort_keys=True)

"""Two-spin XYZ exchange dynamics with an inhomogeneous z-field.

The Hamiltonian, in units with hbar = 1 and the computational basis
(|00>, |01>, |10>, |11>),

    H = [[Jz/2 + B,  0,         0,        Jk],
         [0,         -Jz/2 + b, J,        0 ],
         [0,         J,         -Jz/2 - b, 0],
         [Jk,        0,         0,        Jz/2 - B]]

with J = (Jx+Jy)/2 and Jk = (Jx-Jy)/2. The local z-fields on the two sites
are (B+b)/2 and (B-b)/2, so B is their sum and b their difference. H
commutes with sz x sz, so the even span{|00>, |11>} and odd span{|01>, |10>}
parity sectors evolve independently. Writing xi = sqrt(B^2 + (Jk)^2) and
eta = sqrt(b^2 + J^2), the energies are Jz/2 +/- xi and -Jz/2 +/- eta, and
the propagator factors into two 2x2 rotors

    u = cos(xi t) - i (B/xi) sin(xi t),    c = -i (Jk/xi) sin(xi t)

on the even pair (primed analogs with (b, J, eta) on the odd pair), the even
block carrying phase e^{-i Jz t/2} and the odd block e^{+i Jz t/2}. The
sin(xi t)/xi ratio is evaluated through a sinc so xi = 0 and eta = 0 are
exact, not special cases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import XUnitaryParams
from .errors import ContractError
from .xstate import XState

SECTORS = ("even", "odd")


@dataclass(frozen=True)
class HeisenbergParams:
    """Exchange couplings and z-field parameters."""

    Jx: float
    Jy: float
    Jz: float
    B: float = 0.0
    b: float = 0.0

    @classmethod
    def from_j_kappa(cls, j: float, kappa: float, jz: float, B: float = 0.0, b: float = 0.0):
        return cls(Jx=j * (1.0 + kappa), Jy=j * (1.0 - kappa), Jz=jz, B=B, b=b)

    @property
    def j(self) -> float:
        return 0.5 * (self.Jx + self.Jy)

    @property
    def j_kappa(self) -> float:
        return 0.5 * (self.Jx - self.Jy)

    @property
    def kappa(self) -> float:
        if self.Jx + self.Jy == 0.0:
            raise ContractError("anisotropy undefined when Jx + Jy = 0")
        return (self.Jx - self.Jy) / (self.Jx + self.Jy)

    @property
    def xi(self) -> float:
        return math.hypot(self.B, self.j_kappa)

    @property
    def eta(self) -> float:
        return math.hypot(self.b, self.j)

    def to_json(self) -> dict:
        return {"Jx": self.Jx, "Jy": self.Jy, "Jz": self.Jz, "B": self.B, "b": self.b}

    @staticmethod
    def from_json(obj: dict) -> "HeisenbergParams":
        extra = set(obj) - {"Jx", "Jy", "Jz", "B", "b"}
        if extra:
            raise ContractError(f"unknown coupling fields {sorted(extra)}")
        return HeisenbergParams(
            Jx=float(obj["Jx"]),
            Jy=float(obj["Jy"]),
            Jz=float(obj["Jz"]),
            B=float(obj.get("B", 0.0)),
            b=float(obj.get("b", 0.0)),
        )


@dataclass(frozen=True)
class SectorState:
    """A 2x2 density block confined to one parity sector."""

    sector: str
    block: np.ndarray

    def validate(self) -> "SectorState":
        if self.sector not in SECTORS:
            raise ContractError(f"unknown sector {self.sector!r}")
        m = np.asarray(self.block, dtype=complex)
        if m.shape != (2, 2):
            raise ContractError("sector block must be 2x2")
        if np.max(np.abs(m - m.conj().T)) > 1e-12 or abs(np.trace(m).real - 1.0) > 1e-12:
            raise ContractError("sector block must be Hermitian with unit trace")
        # 2x2 PSD check: both trace and determinant nonnegative.
        det = np.linalg.det(m).real
        if det < -1e-10 or m[0, 0].real < -1e-10:
            raise ContractError("sector block is not positive semidefinite")
        return self


def hamiltonian(p: HeisenbergParams) -> np.ndarray:
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = 0.5 * p.Jz + p.B
    h[1, 1] = -0.5 * p.Jz + p.b
    h[2, 2] = -0.5 * p.Jz - p.b
    h[3, 3] = 0.5 * p.Jz - p.B
    h[0, 3] = h[3, 0] = p.j_kappa
    h[1, 2] = h[2, 1] = p.j
    return h


def _sector_basis(delta: float, coupling: float) -> tuple:
    """Orthonormal eigenvector pair of [[delta, coupling], [coupling, -delta]].

    Returns (v_plus, v_minus) for eigenvalues +r and -r, r = hypot(delta,
    coupling). Of the two algebraically equivalent eigenvector formulas the
    one without cancellation in its dominant component is used; r = 0 falls
    back to the computational pair.
    """
    r = math.hypot(delta, coupling)
    if r == 0.0:
        return (1.0, 0.0), (0.0, 1.0)
    if delta >= 0.0:
        v = (delta + r, coupling)
    else:
        v = (coupling, r - delta)
    n = math.hypot(v[0], v[1])
    v_plus = (v[0] / n, v[1] / n)
    return v_plus, (-v_plus[1], v_plus[0])


def spectrum(p: HeisenbergParams) -> tuple:
    """Closed-form energies and eigenvectors.

    Order: (even +xi, even -xi, odd +eta, odd -eta). Eigenvectors are the
    columns of the returned 4x4 array, embedded into the full space.
    """
    energies = np.array(
        [0.5 * p.Jz + p.xi, 0.5 * p.Jz - p.xi, -0.5 * p.Jz + p.eta, -0.5 * p.Jz - p.eta]
    )
    vectors = np.zeros((4, 4), dtype=complex)
    (e0, e1), (f0, f1) = _sector_basis(p.B, p.j_kappa)
    vectors[0, 0], vectors[3, 0] = e0, e1
    vectors[0, 1], vectors[3, 1] = f0, f1
    (g0, g1), (h0, h1) = _sector_basis(p.b, p.j)
    vectors[1, 2], vectors[2, 2] = g0, g1
    vectors[1, 3], vectors[2, 3] = h0, h1
    return energies, vectors


def _rotor(delta: float, coupling: float, t: float) -> tuple:
    """(u, c) of the block propagator exp(-i t [[delta, coupling], [coupling, -delta]])."""
    r = math.hypot(delta, coupling)
    sin_over_r = t * float(np.sinc(r * t / math.pi))
    u = complex(math.cos(r * t), -delta * sin_over_r)
    c = complex(0.0, -coupling * sin_over_r)
    return u, c


def block_amplitudes(p: HeisenbergParams, t: float, sector: str) -> tuple:
    """Sector rotor (u, c); the Jz sector phase is dropped (it cancels in
    every sector-diagonal density matrix)."""
    if sector == "even":
        return _rotor(p.B, p.j_kappa, t)
    if sector == "odd":
        return _rotor(p.b, p.j, t)
    raise ContractError(f"unknown sector {sector!r}")


def propagator(p: HeisenbergParams, t: float) -> np.ndarray:
    """Closed-form U(t) = exp(-i H t), X-shaped for all parameters."""
    u, c = _rotor(p.B, p.j_kappa, t)
    up, cp = _rotor(p.b, p.j, t)
    even_phase = np.exp(-0.5j * p.Jz * t)
    odd_phase = np.exp(0.5j * p.Jz * t)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = even_phase * u
    m[0, 3] = even_phase * c
    m[3, 0] = even_phase * (-np.conj(c))
    m[3, 3] = even_phase * np.conj(u)
    m[1, 1] = odd_phase * up
    m[1, 2] = odd_phase * cp
    m[2, 1] = odd_phase * (-np.conj(cp))
    m[2, 2] = odd_phase * np.conj(up)
    return m


def evolve_even(lam: float, p: HeisenbergParams, t: float) -> SectorState:
    """Evolve diag((1+lam)/2, (1-lam)/2) on span{|00>, |11>}.

    lam is the initial population imbalance; it equals the l1 coherence of
    the initial state in the sector's Bell basis, and scales the whole
    off-diagonal history: the evolved block is

        [[n0|u|^2 + n1|c|^2,  -lam u c ],
         [conj(-lam u c),     n0|c|^2 + n1|u|^2]].
    """
    if not -1.0 <= lam <= 1.0:
        raise ContractError(f"imbalance {lam} outside [-1, 1]")
    u, c = block_amplitudes(p, t, "even")
    return _evolved_block("even", lam, u, c)


def evolve_odd(mu: float, p: HeisenbergParams, t: float) -> SectorState:
    """Same construction on span{|01>, |10>} with the odd rotor."""
    if not -1.0 <= mu <= 1.0:
        raise ContractError(f"imbalance {mu} outside [-1, 1]")
    u, c = block_amplitudes(p, t, "odd")
    return _evolved_block("odd", mu, u, c)


def _evolved_block(sector: str, imbalance: float, u: complex, c: complex) -> SectorState:
    n0 = 0.5 * (1.0 + imbalance)
    n1 = 0.5 * (1.0 - imbalance)
    off = -imbalance * u * c
    block = np.array(
        [
            [n0 * abs(u) ** 2 + n1 * abs(c) ** 2, off],
            [np.conj(off), n0 * abs(c) ** 2 + n1 * abs(u) ** 2],
        ],
        dtype=complex,
    )
    return SectorState(sector, block)


def concurrence_analytic(sector: str, imbalance: float, p: HeisenbergParams, t: float) -> float:
    """Concurrence of the embedded evolved sector state: 2|imbalance||u||c|.

    Zero field reduces to |imbalance||sin(2 Jk t)| (even) and
    |imbalance||sin(2 J t)| (odd). A vanishing coupling in the active sector
    gives c = 0, hence no entanglement at any time.
    """
    if not -1.0 <= imbalance <= 1.0:
        raise ContractError(f"imbalance {imbalance} outside [-1, 1]")
    u, c = block_amplitudes(p, t, sector)
    return 2.0 * abs(imbalance) * abs(u) * abs(c)


def embed_sector(s: SectorState) -> np.ndarray:
    """Place a sector block into the full 4x4 matrix, zeros elsewhere."""
    s.validate()
    m = np.zeros((4, 4), dtype=complex)
    rows = (0, 3) if s.sector == "even" else (1, 2)
    for i, ri in enumerate(rows):
        for k, rk in enumerate(rows):
            m[ri, rk] = s.block[i, k]
    return m


def evolve_diagonal(p: HeisenbergParams, populations, t: float) -> XState:
    """Evolve a computational-basis-diagonal state diag(n00, n01, n10, n11).

    Both sectors run at once; the result is the X-state with corners
    w = (n11 - n00) u c and z = (n10 - n01) u' c'.
    """
    n00, n01, n10, n11 = (float(v) for v in populations)
    if min(n00, n01, n10, n11) < -1e-12 or abs(n00 + n01 + n10 + n11 - 1.0) > 1e-9:
        raise ContractError("populations must be a probability vector")
    u, c = _rotor(p.B, p.j_kappa, t)
    up, cp = _rotor(p.b, p.j, t)
    return XState(
        a=n00 * abs(u) ** 2 + n11 * abs(c) ** 2,
        b=n01 * abs(up) ** 2 + n10 * abs(cp) ** 2,
        c=n01 * abs(cp) ** 2 + n10 * abs(up) ** 2,
        d=n00 * abs(c) ** 2 + n11 * abs(u) ** 2,
        w=(n11 - n00) * u * c,
        z=(n10 - n01) * up * cp,
    )


def propagator_x_params(p: HeisenbergParams, t: float) -> XUnitaryParams:
    """Parameters placing U(t) inside the X-shaped special-unitary family.

    Exact for arbitrary field values, not only the zero-field case: with
    (u, c) and (u', c') the two sector rotors,

        x = Jz t, t1 = atan2(|c|, |u|), t2 = atan2(|u'|, |c'|),
        a1 = 2 arg u, b1 = 2 arg c - 2 pi,
        a2 = 2 arg u' + pi, b2 = 2 arg c' - pi.
    """
    u, c = _rotor(p.B, p.j_kappa, t)
    up, cp = _rotor(p.b, p.j, t)
    return XUnitaryParams(
        a1=2.0 * math.atan2(u.imag, u.real),
        b1=2.0 * math.atan2(c.imag, c.real) - 2.0 * math.pi,
        a2=2.0 * math.atan2(up.imag, up.real) + math.pi,
        b2=2.0 * math.atan2(cp.imag, cp.real) - math.pi,
        x=p.Jz * t,
        t1=math.atan2(abs(c), abs(u)),
        t2=math.atan2(abs(up), abs(cp)),
    )

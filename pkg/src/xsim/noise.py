"""Kraus-channel noise for circuit execution, plus readout bit flips.

The gate-noise model is deliberately plain: after every gate, each touched
qubit gets a depolarizing kick (rate chosen by gate arity), then amplitude
damping, then phase damping. Channel order is part of the model definition.
Default rates are order-of-magnitude typical for small superconducting
devices of the 2019-2021 era and are fully overridable; nothing here claims
to calibrate a particular machine.

Readout error is separate: it acts on recorded counts, not on the state,
flipping each outcome bit independently. In the exact-probability limit
(ShotRecord with shots = 0) the flip is applied as a deterministic
stochastic map on the outcome distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, gate_matrix
from .errors import ContractError
from .linalg import I2, kron
from .rng import READOUT_STREAM_OFFSET, substream
from .tomography import ShotRecord, setting_index

_RATE_FIELDS = ("p_depol_1q", "p_depol_2q", "gamma_ad", "gamma_pd", "p_readout")


@dataclass(frozen=True)
class NoiseModel:
    p_depol_1q: float = 0.001
    p_depol_2q: float = 0.01
    gamma_ad: float = 0.001
    gamma_pd: float = 0.001
    p_readout: float = 0.02

    def __post_init__(self):
        for name in _RATE_FIELDS:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ContractError(f"noise rate {name}={v} outside [0, 1]")

    @classmethod
    def zero(cls) -> "NoiseModel":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)

    def to_json(self) -> dict:
        return {name: getattr(self, name) for name in _RATE_FIELDS}

    @staticmethod
    def from_json(obj: dict) -> "NoiseModel":
        extra = set(obj) - set(_RATE_FIELDS)
        if extra:
            raise ContractError(f"unknown noise fields {sorted(extra)}")
        return NoiseModel(**{name: float(obj[name]) for name in obj})


def depolarizing_kraus(p: float) -> list:
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"depolarizing rate {p} outside [0, 1]")
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return [
        math.sqrt(1.0 - 0.75 * p) * np.eye(2, dtype=complex),
        math.sqrt(0.25 * p) * sx,
        math.sqrt(0.25 * p) * sy,
        math.sqrt(0.25 * p) * sz,
    ]


def amplitude_damping_kraus(gamma: float) -> list:
    if not 0.0 <= gamma <= 1.0:
        raise ContractError(f"damping rate {gamma} outside [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return [k0, k1]


def phase_damping_kraus(gamma: float) -> list:
    if not 0.0 <= gamma <= 1.0:
        raise ContractError(f"damping rate {gamma} outside [0, 1]")
    return [
        math.sqrt(1.0 - gamma) * np.eye(2, dtype=complex),
        math.sqrt(gamma) * np.diag([1.0, 0.0]).astype(complex),
        math.sqrt(gamma) * np.diag([0.0, 1.0]).astype(complex),
    ]


def _embed(k: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for q in range(n_qubits):
        out = kron(out, k if q == qubit else I2)
    return out


def apply_channel(rho: np.ndarray, kraus, qubits) -> np.ndarray:
    """Apply a single-qubit Kraus channel to each listed qubit in turn."""
    rho = np.asarray(rho, dtype=complex)
    dim = rho.shape[0]
    n_qubits = dim.bit_length() - 1
    if rho.shape != (dim, dim) or 2**n_qubits != dim:
        raise ContractError("density matrix dimension must be a power of 2")
    total = sum(k.conj().T @ k for k in kraus)
    if np.max(np.abs(total - np.eye(2))) > 1e-10:
        raise ContractError("Kraus set is not trace preserving")
    if isinstance(qubits, int):
        qubits = (qubits,)
    out = rho
    for q in qubits:
        if not 0 <= q < n_qubits:
            raise ContractError(f"qubit index {q} outside register of {n_qubits}")
        big = [_embed(k, q, n_qubits) for k in kraus]
        out = sum(k @ out @ k.conj().T for k in big)
    return out


def run_noisy(c: Circuit, rho: np.ndarray, nm: NoiseModel) -> np.ndarray:
    """Execute a circuit with per-gate noise on the touched qubits.

    With an all-zero model every channel is skipped and the arithmetic is
    identical to run_density.
    """
    rho = np.asarray(rho, dtype=complex)
    dim = 2**c.width
    if rho.shape != (dim, dim):
        raise ContractError(f"density matrix shape {rho.shape} does not match width {c.width}")
    out = rho.copy()
    for g in c.gates:
        u = gate_matrix(g, c.width)
        out = u @ out @ u.conj().T
        touched = (g.target,) if g.control is None else (g.control, g.target)
        depol = nm.p_depol_2q if len(touched) == 2 else nm.p_depol_1q
        if depol > 0.0:
            out = apply_channel(out, depolarizing_kraus(depol), touched)
        if nm.gamma_ad > 0.0:
            out = apply_channel(out, amplitude_damping_kraus(nm.gamma_ad), touched)
        if nm.gamma_pd > 0.0:
            out = apply_channel(out, phase_damping_kraus(nm.gamma_pd), touched)
    return out


def readout_flip(rec: ShotRecord, p: float, seed: int) -> ShotRecord:
    """Flip each recorded outcome bit independently with probability p.

    Sampled records are re-binned with multinomial draws from a dedicated
    substream (offset past the nine setting streams); exact records get the
    flip map applied to their probabilities directly.
    """
    if not 0.0 <= p <= 1.0:
        raise ContractError(f"readout flip probability {p} outside [0, 1]")
    if p == 0.0:
        return rec
    # Probability of flip pattern m = (f1 f2) as a 2-bit index.
    pattern_probs = np.array([(1 - p) * (1 - p), (1 - p) * p, p * (1 - p), p * p])
    if rec.shots == 0:
        probs = np.asarray(rec.counts, dtype=float)
        new_probs = np.zeros(4)
        for k in range(4):
            for m in range(4):
                new_probs[k ^ m] += probs[k] * pattern_probs[m]
        return ShotRecord(rec.setting, 0, tuple(float(x) for x in new_probs))
    rng = substream(seed, READOUT_STREAM_OFFSET + setting_index(rec.setting))
    new_counts = [0, 0, 0, 0]
    for k in range(4):
        n_k = int(rec.counts[k])
        if n_k == 0:
            continue
        moved = rng.multinomial(n_k, pattern_probs)
        for m in range(4):
            new_counts[k ^ m] += int(moved[m])
    return ShotRecord(rec.setting, rec.shots, tuple(new_counts))

"""Shot-sampled Pauli-pair measurements and state reconstruction.

Three protocols: FULL measures all nine two-qubit Pauli pairs and inverts
the Pauli expansion; PARTIAL5 measures {XX, YY, ZZ, XY, YX}, enough to fix
the six parameters of an X-state; PARTIAL3 measures {XX, YY, ZZ}, enough
when the X-state is real. Outcome order within a setting is (++, +-, -+, --)
with + the +1 eigenvalue of the local Pauli.

For an X-state with corners w = <00|rho|11> and z = <01|rho|10> the relevant
traces are

    <XX> = 2 Re w + 2 Re z        <XY> = -2 Im w + 2 Im z
    <YY> = -2 Re w + 2 Re z       <YX> = -2 Im w - 2 Im z

so the reconstructors use Re w = (<XX> - <YY>)/4, Re z = (<XX> + <YY>)/4,
Im w = -(<XY> + <YX>)/4, Im z = (<XY> - <YX>)/4, with the ZZ outcome
frequencies giving the diagonal directly.

Sampling is seeded per setting through a documented split: setting (i, j)
with Pauli indices i, j in (X, Y, Z) order draws from substream(seed, 3i+j).
A ShotRecord with shots = 0 is the exact-probability limit; its counts hold
the outcome distribution itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, ProtocolError
from .linalg import PAULI, fidelity, herm_eig, kron
from .rng import substream
from .xstate import XState, leakage

PAULI_ORDER = "XYZ"
FULL = ("XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ")
PARTIAL5 = ("XX", "YY", "ZZ", "XY", "YX")
PARTIAL3 = ("XX", "YY", "ZZ")
PROTOCOLS = {"full": FULL, "partial5": PARTIAL5, "partial3": PARTIAL3}

# +1/-1 eigenprojectors of each local Pauli.
_PROJ = {
    "X": (np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex),
          np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)),
    "Y": (np.array([[0.5, -0.5j], [0.5j, 0.5]], dtype=complex),
          np.array([[0.5, 0.5j], [-0.5j, 0.5]], dtype=complex)),
    "Z": (np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
          np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)),
}


def setting_index(setting: str) -> int:
    """Substream index of a setting: 3*first + second in (X, Y, Z) order."""
    if len(setting) != 2 or any(ch not in PAULI_ORDER for ch in setting):
        raise ProtocolError(f"unknown setting {setting!r}")
    return 3 * PAULI_ORDER.index(setting[0]) + PAULI_ORDER.index(setting[1])


def pauli_pair_matrix(setting: str) -> np.ndarray:
    setting_index(setting)
    return kron(PAULI[setting[0]], PAULI[setting[1]])


def outcome_probabilities(rho: np.ndarray, setting: str) -> np.ndarray:
    """Four outcome probabilities (++, +-, -+, --), clipped and renormalized."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ContractError("outcome_probabilities expects a 4x4 density matrix")
    p1, m1 = _PROJ[setting[0]]
    p2, m2 = _PROJ[setting[1]]
    probs = np.array(
        [
            np.trace(rho @ kron(p1, p2)).real,
            np.trace(rho @ kron(p1, m2)).real,
            np.trace(rho @ kron(m1, p2)).real,
            np.trace(rho @ kron(m1, m2)).real,
        ]
    )
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if total <= 0.0:
        raise ContractError("outcome probabilities sum to zero")
    return probs / total


@dataclass(frozen=True)
class ShotRecord:
    """Counts for one measurement setting.

    shots >= 1 means sampled integer counts summing to shots; shots = 0
    marks the exact-probability limit, where counts hold the distribution.
    """

    setting: str
    shots: int
    counts: tuple

    def __post_init__(self):
        setting_index(self.setting)
        if len(self.counts) != 4 or any(c < 0 for c in self.counts):
            raise ContractError("counts must be four nonnegative numbers")
        if self.shots < 0:
            raise ContractError("shots must be nonnegative")
        total = sum(self.counts)
        if self.shots > 0 and abs(total - self.shots) > 1e-9:
            raise ContractError(f"counts sum to {total}, expected {self.shots}")
        if self.shots == 0 and abs(total - 1.0) > 1e-9:
            raise ContractError("exact record counts must sum to 1")

    def frequencies(self) -> np.ndarray:
        if self.shots == 0:
            return np.asarray(self.counts, dtype=float)
        return np.asarray(self.counts, dtype=float) / self.shots


def sample_setting(rho: np.ndarray, setting: str, shots: int, seed: int) -> ShotRecord:
    """Multinomial shot sample of one Pauli-pair measurement."""
    if shots < 1:
        raise ContractError("shots must be >= 1; use exact_record for the exact limit")
    probs = outcome_probabilities(rho, setting)
    rng = substream(seed, setting_index(setting))
    counts = rng.multinomial(shots, probs)
    return ShotRecord(setting=setting, shots=shots, counts=tuple(int(c) for c in counts))


def exact_record(rho: np.ndarray, setting: str) -> ShotRecord:
    probs = outcome_probabilities(rho, setting)
    return ShotRecord(setting=setting, shots=0, counts=tuple(float(p) for p in probs))


def expectations_from_counts(rec: ShotRecord) -> tuple:
    """(joint, marginal of first qubit, marginal of second qubit)."""
    fpp, fpm, fmp, fmm = rec.frequencies()
    joint = fpp - fpm - fmp + fmm
    first = fpp + fpm - fmp - fmm
    second = fpp - fpm + fmp - fmm
    return float(joint), float(first), float(second)


def _index_records(records, required) -> dict:
    by_setting = {}
    for rec in records:
        if rec.setting in by_setting:
            raise ProtocolError(f"duplicate record for setting {rec.setting}")
        by_setting[rec.setting] = rec
    missing = [s for s in required if s not in by_setting]
    if missing:
        raise ProtocolError(f"missing settings {missing}")
    return by_setting


def psd_project(rho_hat: np.ndarray) -> np.ndarray:
    """Nearest-valid-state repair by eigenvalue truncation.

    Negative eigenvalues are zeroed in ascending order, each one's mass
    spread uniformly over the eigenvalues above it. Already-PSD input is
    returned unchanged.
    """
    rho_hat = np.asarray(rho_hat, dtype=complex)
    n = rho_hat.shape[0]
    if np.max(np.abs(rho_hat - rho_hat.conj().T)) > 1e-10:
        raise ContractError("psd_project expects a Hermitian matrix")
    if abs(np.trace(rho_hat).real - 1.0) > 1e-10:
        raise ContractError("psd_project expects unit trace")
    w, v = herm_eig(rho_hat)
    if w.min() >= 0.0:
        return rho_hat
    order = np.argsort(w)
    lam = w[order].copy()
    for i in range(n):
        if lam[i] < 0.0:
            if i == n - 1:
                raise ContractError("cannot repair: all eigenvalue mass negative")
            lam[i + 1:] += lam[i] / (n - 1 - i)
            lam[i] = 0.0
    vecs = v[:, order]
    out = (vecs * lam) @ vecs.conj().T
    return (out + out.conj().T) / 2.0


def reconstruct_full(records) -> np.ndarray:
    """Linear inversion from all nine settings, then PSD repair.

    The two single-qubit terms are each estimable from three settings;
    averaging the three estimates uses every record's marginals.
    """
    by_setting = _index_records(records, FULL)
    t = np.zeros((4, 4))
    t[0, 0] = 1.0
    for i, p1 in enumerate(PAULI_ORDER):
        for j, p2 in enumerate(PAULI_ORDER):
            joint, first, second = expectations_from_counts(by_setting[p1 + p2])
            t[i + 1, j + 1] = joint
            t[i + 1, 0] += first / 3.0
            t[0, j + 1] += second / 3.0
    basis = {0: np.eye(2, dtype=complex), 1: PAULI["X"], 2: PAULI["Y"], 3: PAULI["Z"]}
    rho_hat = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            rho_hat += t[i, j] * kron(basis[i], basis[j])
    return psd_project(rho_hat / 4.0)


def _clamped_corner(value: complex, bound: float) -> complex:
    mag = abs(value)
    if mag <= bound or mag == 0.0:
        return value
    return value * (bound / mag)


def reconstruct_x5(records) -> XState:
    """X-state estimate from {XX, YY, ZZ, XY, YX}; corners block-clamped."""
    by_setting = _index_records(records, PARTIAL5)
    a, b, c, d = by_setting["ZZ"].frequencies()
    xx, _, _ = expectations_from_counts(by_setting["XX"])
    yy, _, _ = expectations_from_counts(by_setting["YY"])
    xy, _, _ = expectations_from_counts(by_setting["XY"])
    yx, _, _ = expectations_from_counts(by_setting["YX"])
    w = complex((xx - yy) / 4.0, -(xy + yx) / 4.0)
    z = complex((xx + yy) / 4.0, (xy - yx) / 4.0)
    w = _clamped_corner(w, math.sqrt(max(a * d, 0.0)))
    z = _clamped_corner(z, math.sqrt(max(b * c, 0.0)))
    return XState(float(a), float(b), float(c), float(d), w, z)


def reconstruct_x3(records) -> XState:
    """Real-X-state estimate from {XX, YY, ZZ}; imaginary parts are zero by
    protocol assumption."""
    by_setting = _index_records(records, PARTIAL3)
    a, b, c, d = by_setting["ZZ"].frequencies()
    xx, _, _ = expectations_from_counts(by_setting["XX"])
    yy, _, _ = expectations_from_counts(by_setting["YY"])
    w = _clamped_corner(complex((xx - yy) / 4.0), math.sqrt(max(a * d, 0.0)))
    z = _clamped_corner(complex((xx + yy) / 4.0), math.sqrt(max(b * c, 0.0)))
    return XState(float(a), float(b), float(c), float(d), w, z)


@dataclass(frozen=True)
class TomographyReport:
    protocol: str
    reconstructed: np.ndarray
    fidelity_to_target: float
    leakage: float
    shots: int
    seed: int

    def to_json(self) -> dict:
        m = np.asarray(self.reconstructed)
        return {
            "protocol": self.protocol,
            "reconstructed_re": m.real.tolist(),
            "reconstructed_im": m.imag.tolist(),
            "fidelity_to_target": self.fidelity_to_target,
            "fidelity_convention": "squared-uhlmann",
            "leakage": self.leakage,
            "shots": self.shots,
            "seed": self.seed,
        }


def robustness_report(
    target: np.ndarray,
    noisy_output: np.ndarray,
    shots: int,
    seed: int,
    p_readout: float = 0.0,
    exact: bool = False,
) -> tuple:
    """Run all three protocols on one shared dataset of nine records.

    Sharing the per-setting samples between protocols isolates what the
    comparison is about: the protocols differ in which settings they use,
    not in sampling luck. Returns (full, partial5, partial3) reports;
    leakage is that of noisy_output.
    """
    from .noise import readout_flip

    leak = leakage(noisy_output)
    records = {}
    for setting in FULL:
        if exact:
            rec = exact_record(noisy_output, setting)
        else:
            rec = sample_setting(noisy_output, setting, shots, seed)
        if p_readout > 0.0:
            rec = readout_flip(rec, p_readout, seed)
        records[setting] = rec

    rho_full = reconstruct_full(records.values())
    x5 = reconstruct_x5([records[s] for s in PARTIAL5])
    x3 = reconstruct_x3([records[s] for s in PARTIAL3])
    reports = []
    for protocol, mat in (("full", rho_full), ("partial5", x5.matrix()), ("partial3", x3.matrix())):
        reports.append(
            TomographyReport(
                protocol=protocol,
                reconstructed=mat,
                fidelity_to_target=fidelity(mat, target),
                leakage=leak,
                shots=0 if exact else shots,
                seed=seed,
            )
        )
    return tuple(reports)


SWEEP_COLUMNS = ("experiment_id", "t", "protocol", "fidelity", "concurrence_estimate", "leakage", "shots", "seed")


def sweep_row(experiment_id: str, t: float, report: TomographyReport, concurrence_estimate: float) -> dict:
    """One long-format row of a tomography sweep, keyed by SWEEP_COLUMNS."""
    return {
        "experiment_id": experiment_id,
        "t": t,
        "protocol": report.protocol,
        "fidelity": report.fidelity_to_target,
        "concurrence_estimate": concurrence_estimate,
        "leakage": report.leakage,
        "shots": report.shots,
        "seed": report.seed,
    }

"""Gate set, circuit container, simulators, and the preparation circuits.

Gate conventions (fixed by explicit matrices; tests compare entrywise):

    RY(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
    RX(t) = [[cos t/2, -i sin t/2], [-i sin t/2, cos t/2]]
    RZ(t) = diag(e^{-i t/2}, e^{+i t/2})
    U_LAMBDA(l) = (1/sqrt2) [[sqrt(1+l), -sqrt(1-l)], [sqrt(1-l), sqrt(1+l)]]
    W(x) = diag(e^{-i x}, i e^{+i x})
    Z = diag(1, -1)
    CNOT = |0><0| x I + |1><1| x X   (control, target any distinct pair)

Qubit 0 is the leftmost tensor factor. Gates in a Circuit are stored in
application order: ``gates[0]`` acts first.

The X-state preparation circuit acts on four qubits. A first block turns
|0000> into sum_ij sqrt(p_ij)|ij>|ij>, so that qubits (2, 3) carry the
classical mixture p after the ancilla pair (0, 1) is traced out. A second
block on qubits (2, 3) rotates the computational basis into the entangled
X-state eigenbasis, |i,j> -> |e_{i, i xor j}>:

    second block = C1 . (RY(theta-phi) x I) . C2 . (RY(theta+phi) x I)

where C1 is CNOT(first -> second) inside the pair, C2 the reverse, and the
product is read right to left (rightmost factor applied first). An
alternative block with one extra CNOT,

    C1 . C2 . (RY(theta-phi) x I) . C2 . (RY(theta+phi) x I),

produces the same X-state with phi replaced by pi/2 - phi; on the diagonal
classical input the two blocks' single column-sign difference is invisible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, DimensionError
from .linalg import I2, SX, kron, validate_unitary
from .xstate import XSpectral, strip_phases, to_spectral

GATE_KINDS = ("rx", "ry", "rz", "u_lambda", "w", "pauli_z", "cnot", "generic_1q")


def rx_matrix(t: float) -> np.ndarray:
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(t: float) -> np.ndarray:
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(t: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * t), 0.0], [0.0, np.exp(0.5j * t)]], dtype=complex)


def u_lambda_matrix(lam: float) -> np.ndarray:
    """Real rotation sending |0> to sqrt((1+l)/2)|0> + sqrt((1-l)/2)|1>."""
    if not -1.0 <= lam <= 1.0:
        raise ContractError(f"u_lambda parameter {lam} outside [-1, 1]")
    up, dn = math.sqrt(1.0 + lam), math.sqrt(1.0 - lam)
    return np.array([[up, -dn], [dn, up]], dtype=complex) / math.sqrt(2.0)


def w_matrix(x: float) -> np.ndarray:
    return np.array([[np.exp(-1j * x), 0.0], [0.0, 1j * np.exp(1j * x)]], dtype=complex)


_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """One gate instance: kind, parameters, target, optional control."""

    kind: str
    params: tuple = ()
    target: int = 0
    control: int | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ContractError(f"unknown gate kind {self.kind!r}")
        if self.kind == "cnot":
            if self.control is None or self.control == self.target:
                raise ContractError("cnot needs distinct control and target")
        elif self.control is not None:
            raise ContractError(f"gate {self.kind} takes no control qubit")
        n_params = {"rx": 1, "ry": 1, "rz": 1, "u_lambda": 1, "w": 1, "pauli_z": 0, "cnot": 0, "generic_1q": 8}
        if len(self.params) != n_params[self.kind]:
            raise ContractError(f"gate {self.kind} expects {n_params[self.kind]} params")

    def local_matrix(self) -> np.ndarray:
        """The 2x2 matrix of a single-qubit gate."""
        if self.kind == "rx":
            return rx_matrix(self.params[0])
        if self.kind == "ry":
            return ry_matrix(self.params[0])
        if self.kind == "rz":
            return rz_matrix(self.params[0])
        if self.kind == "u_lambda":
            return u_lambda_matrix(self.params[0])
        if self.kind == "w":
            return w_matrix(self.params[0])
        if self.kind == "pauli_z":
            return _Z.copy()
        if self.kind == "generic_1q":
            p = self.params
            m = np.array(
                [[p[0] + 1j * p[1], p[2] + 1j * p[3]], [p[4] + 1j * p[5], p[6] + 1j * p[7]]],
                dtype=complex,
            )
            return validate_unitary(m)
        raise ContractError("cnot has no single local matrix")

    def to_json(self) -> dict:
        obj = {"kind": self.kind, "params": list(self.params), "target": self.target}
        if self.control is not None:
            obj["control"] = self.control
        return obj

    @staticmethod
    def from_json(obj: dict) -> "Gate":
        extra = set(obj) - {"kind", "params", "target", "control"}
        if extra:
            raise ContractError(f"unknown gate fields {sorted(extra)}")
        return Gate(
            kind=str(obj["kind"]),
            params=tuple(float(p) for p in obj.get("params", [])),
            target=int(obj["target"]),
            control=int(obj["control"]) if "control" in obj else None,
        )


@dataclass(frozen=True)
class Circuit:
    """A fixed-width gate list; ``gates[0]`` is applied first."""

    width: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.width <= 4:
            raise DimensionError(f"circuit width {self.width} unsupported")
        for g in self.gates:
            used = {g.target} | ({g.control} if g.control is not None else set())
            if any(q < 0 or q >= self.width for q in used):
                raise DimensionError(f"gate {g} addresses qubits outside width {self.width}")

    def extended(self, more) -> "Circuit":
        return Circuit(self.width, self.gates + tuple(more))

    def to_json(self) -> dict:
        return {"width": self.width, "gates": [g.to_json() for g in self.gates]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @staticmethod
    def from_json(obj: dict) -> "Circuit":
        extra = set(obj) - {"width", "gates"}
        if extra:
            raise ContractError(f"unknown circuit fields {sorted(extra)}")
        return Circuit(int(obj["width"]), tuple(Gate.from_json(g) for g in obj["gates"]))

    @staticmethod
    def loads(text: str) -> "Circuit":
        return Circuit.from_json(json.loads(text))


def _embed_single(m: np.ndarray, qubit: int, width: int) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for q in range(width):
        out = kron(out, m if q == qubit else I2)
    return out


def gate_matrix(g: Gate, width: int) -> np.ndarray:
    """Full 2^width unitary of one gate."""
    if g.kind == "cnot":
        p0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        p1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
        term0 = np.eye(1, dtype=complex)
        term1 = np.eye(1, dtype=complex)
        for q in range(width):
            term0 = kron(term0, p0 if q == g.control else I2)
            term1 = kron(term1, p1 if q == g.control else (SX if q == g.target else I2))
        return term0 + term1
    return _embed_single(g.local_matrix(), g.target, width)


def circuit_unitary(c: Circuit) -> np.ndarray:
    u = np.eye(2**c.width, dtype=complex)
    for g in c.gates:
        u = gate_matrix(g, c.width) @ u
    return u


def run_pure(c: Circuit, basis_index: int = 0) -> np.ndarray:
    """Apply the circuit to a computational basis state; returns the ket."""
    dim = 2**c.width
    if not 0 <= basis_index < dim:
        raise DimensionError(f"basis index {basis_index} outside register of dim {dim}")
    psi = np.zeros(dim, dtype=complex)
    psi[basis_index] = 1.0
    for g in c.gates:
        psi = gate_matrix(g, c.width) @ psi
    return psi


def run_density(c: Circuit, rho: np.ndarray) -> np.ndarray:
    """Conjugate a density matrix through the circuit, gate by gate."""
    rho = np.asarray(rho, dtype=complex)
    dim = 2**c.width
    if rho.shape != (dim, dim):
        raise DimensionError(f"density matrix shape {rho.shape} does not match width {c.width}")
    out = rho.copy()
    for g in c.gates:
        u = gate_matrix(g, c.width)
        out = u @ out @ u.conj().T
    return out


def classical_prep_angles(p) -> tuple:
    """Angles (alpha, beta, gamma) preparing sum_ij sqrt(p_ij) |ij>|ij>.

    Closed form: the correlation angle alpha satisfies
    sin(alpha) = 2 sqrt(p00 p11) - 2 sqrt(p01 p10) (always in [-1, 1]); the
    sum/difference angles u = (beta+gamma)/2, v = (gamma-beta)/2 follow from
    atan2 of the amplitude sums and differences. All four prepared
    amplitudes come out nonnegative, equal to sqrt(p_ij).
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-9:
        raise ContractError(f"classical distribution invalid: {p}")
    r = np.sqrt(np.clip(p, 0.0, None))
    alpha = math.asin(max(-1.0, min(1.0, 2.0 * (r[0] * r[3] - r[1] * r[2]))))
    u = math.atan2(r[1] + r[2], r[0] - r[3])
    v = math.atan2(r[1] - r[2], r[0] + r[3])
    return alpha, u - v, u + v


def classical_prep_gates(p, qubits=(0, 1, 2, 3)) -> list:
    """Gate list of the first block; drops the leading rotation and CNOT
    when the distribution factorizes (alpha = 0), since they act trivially
    on the all-zeros input."""
    q0, q1, q2, q3 = qubits
    alpha, beta, gamma = classical_prep_angles(p)
    gates = []
    if abs(alpha) > 1e-12:
        gates.append(Gate("ry", (alpha,), q0))
        gates.append(Gate("cnot", (), q1, control=q0))
    gates.append(Gate("ry", (beta,), q0))
    gates.append(Gate("ry", (gamma,), q1))
    gates.append(Gate("cnot", (), q2, control=q0))
    gates.append(Gate("cnot", (), q3, control=q1))
    return gates


def eigenbasis_block(theta: float, phi: float, pair=(0, 1)) -> list:
    """Second block: |i,j> -> |e_{i, i xor j}> exactly, two CNOTs."""
    first, second = pair
    return [
        Gate("ry", (theta + phi,), first),
        Gate("cnot", (), first, control=second),
        Gate("ry", (theta - phi,), first),
        Gate("cnot", (), second, control=first),
    ]


def eigenbasis_block_alt(theta: float, phi: float, pair=(0, 1)) -> list:
    """Three-CNOT variant; same X-state output with phi -> pi/2 - phi."""
    first, second = pair
    return [
        Gate("ry", (theta + phi,), first),
        Gate("cnot", (), first, control=second),
        Gate("ry", (theta - phi,), first),
        Gate("cnot", (), first, control=second),
        Gate("cnot", (), second, control=first),
    ]


def build_xstate_circuit(p, theta: float, phi: float) -> Circuit:
    """Four-qubit circuit preparing the real X-state with weights p and
    eigenbasis angles (theta, phi) on qubits (2, 3)."""
    gates = classical_prep_gates(p)
    gates += eigenbasis_block(theta, phi, pair=(2, 3))
    return Circuit(4, tuple(gates))


def build_xstate_circuit_alt(p, theta: float, phi: float) -> Circuit:
    """Same as build_xstate_circuit but with the three-CNOT second block;
    its output X-state equals build_xstate_circuit(p, theta, pi/2 - phi)."""
    gates = classical_prep_gates(p)
    gates += eigenbasis_block_alt(theta, phi, pair=(2, 3))
    return Circuit(4, tuple(gates))


def build_equi_entangled_circuit(p, theta: float) -> Circuit:
    """Shortened second block for mixtures of equally entangled basis states.

    When both eigenbasis angles coincide, the three-CNOT block collapses to
    a single rotation plus one CNOT. Relative to build_xstate_circuit the
    output corresponds to angles (theta, pi/2 - theta); the two diagonal
    families of equally entangled bases meet at theta = pi/4, where this is
    the Bell-diagonal preparation.
    """
    gates = classical_prep_gates(p)
    gates.append(Gate("ry", (2.0 * theta,), 2))
    gates.append(Gate("cnot", (), 3, control=2))
    return Circuit(4, tuple(gates))


def build_complex_xstate_circuit(rho: np.ndarray) -> tuple:
    """Circuit for an arbitrary (complex) X-state target.

    Strips the corner phases, inverts the shape map, builds the real
    preparation, and restores the phases with two trailing RZ gates on the
    output pair. Returns (circuit, spectral, (alpha, beta)).
    """
    real_x, (alpha, beta) = strip_phases(rho)
    spectral = to_spectral(real_x)
    circ = build_xstate_circuit(spectral.probs, spectral.theta, spectral.phi)
    tail = []
    if abs(alpha) > 1e-14:
        tail.append(Gate("rz", (-alpha,), 2))
    if abs(beta) > 1e-14:
        tail.append(Gate("rz", (-beta,), 3))
    return circ.extended(tail), spectral, (alpha, beta)


def build_sector_circuit(lam: float, theta: float) -> Circuit:
    """Two-qubit interferometric block whose output second-qubit moment
    |<sy>| equals |lam sin(theta)|."""
    return Circuit(
        2,
        (
            Gate("u_lambda", (lam,), 0),
            Gate("cnot", (), 1, control=0),
            Gate("rx", (theta,), 1),
        ),
    )


@dataclass(frozen=True)
class XUnitaryParams:
    """Parameters of the X-shaped special unitary family.

    The family couples only {|00>, |11>} and {|01>, |10>}:

        corner block  [[ e^{i(a1-x)/2} cos t1, -e^{i(b1-x)/2} sin t1],
                       [ e^{-i(b1+x)/2} sin t1, e^{-i(a1+x)/2} cos t1]]
        middle block  [[-i e^{i(a2+x)/2} sin t2,  i e^{i(b2+x)/2} cos t2],
                       [ i e^{-i(b2-x)/2} cos t2, i e^{-i(a2-x)/2} sin t2]]

    Determinant is +1 for all real parameter values.
    """

    a1: float
    b1: float
    a2: float
    b2: float
    x: float
    t1: float
    t2: float


def assemble_x_unitary(q: XUnitaryParams) -> np.ndarray:
    u = np.zeros((4, 4), dtype=complex)
    c1, s1 = math.cos(q.t1), math.sin(q.t1)
    c2, s2 = math.cos(q.t2), math.sin(q.t2)
    u[0, 0] = np.exp(0.5j * (q.a1 - q.x)) * c1
    u[0, 3] = -np.exp(0.5j * (q.b1 - q.x)) * s1
    u[3, 0] = np.exp(-0.5j * (q.b1 + q.x)) * s1
    u[3, 3] = np.exp(-0.5j * (q.a1 + q.x)) * c1
    u[1, 1] = -1j * np.exp(0.5j * (q.a2 + q.x)) * s2
    u[1, 2] = 1j * np.exp(0.5j * (q.b2 + q.x)) * c2
    u[2, 1] = 1j * np.exp(-0.5j * (q.b2 - q.x)) * c2
    u[2, 2] = 1j * np.exp(-0.5j * (q.a2 - q.x)) * s2
    return u


def decompose_x_unitary(q: XUnitaryParams) -> Circuit:
    """Seven-element gate sequence reproducing assemble_x_unitary exactly
    (global phase 1): local RZ pair, CNOT, RY x W, reverse CNOT, RY, CNOT,
    closing RZ pair.

    The phase gate carries x/2: the target family splits the two parity
    sectors by x in total, and the W gate applies its argument with
    opposite signs to the sectors, so the full x would double the split.
    """
    s1 = -0.25 * (q.a1 + q.b1 + q.a2 + q.b2)
    s2 = -0.25 * (q.a1 + q.b1 - q.a2 - q.b2)
    s3 = -0.25 * (q.a2 - q.b2 + q.a1 - q.b1)
    s4 = -0.25 * (q.a1 - q.b1 - q.a2 + q.b2)
    gates = [
        Gate("rz", (s3,), 0),
        Gate("rz", (s4,), 1),
        Gate("cnot", (), 1, control=0),
        Gate("ry", (q.t1 - q.t2,), 0),
        Gate("cnot", (), 0, control=1),
        Gate("ry", (q.t1 + q.t2,), 0),
        Gate("w", (0.5 * q.x,), 1),
        Gate("cnot", (), 1, control=0),
        Gate("rz", (s1,), 0),
        Gate("rz", (s2,), 1),
    ]
    return Circuit(2, tuple(gates))


def exchange_unitary_params(j: float, kappa: float, jz: float, t: float) -> XUnitaryParams:
    """X-unitary parameters of the zero-field spin-exchange propagator."""
    return XUnitaryParams(
        a1=0.0,
        b1=math.pi,
        a2=math.pi,
        b2=0.0,
        x=jz * t,
        t1=j * kappa * t,
        t2=j * t + math.pi / 2.0,
    )

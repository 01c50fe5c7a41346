"""Dense complex linear algebra for few-qubit operators.

Conventions used across the whole package:

* operators and states are plain ``numpy`` complex arrays,
* qubit 0 is the leftmost (most significant) tensor factor, so the basis
  state |i j> of two qubits sits at row index ``2*i + j``,
* supported operator dimensions are 2, 4, and 16 (one, two, and four qubits),
* all functions are pure and never mutate their arguments.

The eigensolver is a cyclic Jacobi iteration specialised to Hermitian
matrices of these sizes. It is deliberately self-contained: it serves as the
independent oracle behind matrix square roots, matrix exponentials, fidelity,
and the spectral concurrence check, so it must not share code with the
closed-form implementations it is used to validate.
"""

from __future__ import annotations

import string

import numpy as np

from .errors import ContractError, DimensionError

I2 = np.eye(2, dtype=complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}

_DIMS = (2, 4, 16)

HERMITIAN_ATOL = 1e-10
PSD_ATOL = 1e-9


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with the first factor on the leftmost qubit."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=complex).conj().T


def _square(m: np.ndarray, who: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{who}: expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = _square(m, "is_hermitian")
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def validate_unitary(u: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    u = _square(u, "validate_unitary")
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > atol:
        raise ContractError("matrix is not unitary within tolerance")
    return u


def validate_density(rho: np.ndarray, atol: float = PSD_ATOL) -> np.ndarray:
    """Check Hermiticity, unit trace, and positivity of a density matrix.

    Positivity is enforced up to ``-atol`` on the smallest eigenvalue;
    genuinely indefinite input raises ContractError.
    """
    rho = _square(rho, "validate_density")
    if rho.shape[0] not in _DIMS:
        raise DimensionError(f"unsupported density-matrix dimension {rho.shape[0]}")
    if not is_hermitian(rho):
        raise ContractError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-9 or abs(np.trace(rho).imag) > 1e-12:
        raise ContractError(f"density matrix trace {np.trace(rho)} != 1")
    evals, _ = herm_eig(rho)
    if evals.min() < -atol:
        raise ContractError(f"density matrix has eigenvalue {evals.min():.3e} < 0")
    return rho


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Trace out every qubit not listed in ``keep``.

    Parameters
    ----------
    rho : ndarray
        Density matrix on n qubits, n <= 4 (dimension 2, 4, 8, or 16).
    keep : iterable of int
        Qubit indices to retain, 0 = leftmost factor. Order in the output
        follows ascending qubit index.
    """
    rho = _square(rho, "partial_trace")
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if 2**n != dim or not 1 <= n <= 4:
        raise DimensionError(f"partial_trace: dimension {dim} is not a small qubit register")
    keep = sorted(set(int(q) for q in keep))
    if not keep or any(q < 0 or q >= n for q in keep):
        raise DimensionError(f"partial_trace: keep={keep} invalid for {n} qubits")
    letters = string.ascii_lowercase
    bra = list(letters[:n])
    ket = list(letters[n : 2 * n])
    for q in range(n):
        if q not in keep:
            ket[q] = bra[q]
    out = "".join(bra[q] for q in keep) + "".join(ket[q] for q in keep)
    sub = "".join(bra) + "".join(ket) + "->" + out
    k = len(keep)
    return np.einsum(sub, rho.reshape([2] * (2 * n))).reshape(2**k, 2**k)


def herm_eig(m: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each sweep annihilates every off-diagonal pair with a complex Givens
    rotation; sweeps repeat until the off-diagonal Frobenius norm falls below
    ``tol`` (relative to the matrix norm). Deterministic, no libraries beyond
    numpy array arithmetic.

    Returns
    -------
    (w, v) : eigenvalues sorted in descending order, and the matching
        orthonormal eigenvectors as columns of ``v``.
    """
    a = _square(m, "herm_eig")
    if a.shape[0] not in _DIMS and a.shape[0] != 8:
        raise DimensionError(f"herm_eig: unsupported dimension {a.shape[0]}")
    if not is_hermitian(a):
        raise ContractError("herm_eig: input is not Hermitian within 1e-10")
    n = a.shape[0]
    a = (a + a.conj().T) / 2.0
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-18 * scale:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                sgn = 1.0 if tau >= 0 else -1.0
                t = -sgn / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # A <- G^dag A G with G = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + s * np.conj(phase) * col_q
                a[:, q] = -s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + s * phase * row_q
                a[q, :] = -s * np.conj(phase) * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vol_p = v[:, p].copy()
                vol_q = v[:, q].copy()
                v[:, p] = c * vol_p + s * np.conj(phase) * vol_q
                v[:, q] = -s * phase * vol_p + c * vol_q
    else:
        raise ContractError("herm_eig: Jacobi iteration failed to converge")
    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def expm_oracle(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Unitary exp(-i h t) of a Hermitian generator, via the eigensolver."""
    w, v = herm_eig(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """Hermitian square root; eigenvalues below zero are clamped to zero."""
    w, v = herm_eig(m)
    if w.min() < -PSD_ATOL:
        raise ContractError(f"sqrtm_psd: eigenvalue {w.min():.3e} too negative")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Squared-Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Symmetric in its arguments and equal to |<psi|phi>|^2 on pure states;
    against the maximally mixed two-qubit state any pure state scores 1/4.
    """
    rho = _square(rho, "fidelity")
    sigma = _square(sigma, "fidelity")
    if rho.shape != sigma.shape:
        raise DimensionError("fidelity: operands have different dimensions")
    wr, vr = herm_eig(rho)
    ws, _ = herm_eig(sigma)
    if wr.min() < -PSD_ATOL or ws.min() < -PSD_ATOL:
        raise ContractError("fidelity: input is not positive semidefinite")
    root = (vr * np.sqrt(np.clip(wr, 0.0, None))) @ vr.conj().T
    mid = root @ sigma @ root
    wm, _ = herm_eig((mid + mid.conj().T) / 2.0)
    return float(np.sum(np.sqrt(np.clip(wm, 0.0, None))) ** 2)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the trace norm of the difference of two Hermitian operators."""
    w, _ = herm_eig(np.asarray(rho, complex) - np.asarray(sigma, complex))
    return float(0.5 * np.sum(np.abs(w)))


def relative_phase(target: np.ndarray, candidate: np.ndarray) -> complex:
    """Unit phase g such that g * candidate best matches target.

    Read off the entry of largest magnitude in ``target``; useful for
    comparing unitaries that are only defined up to a global phase.
    """
    target = np.asarray(target, complex)
    candidate = np.asarray(candidate, complex)
    idx = np.unravel_index(np.argmax(np.abs(target)), target.shape)
    if abs(candidate[idx]) < 1e-14:
        raise ContractError("relative_phase: matrices differ in support")
    g = target[idx] / candidate[idx]
    return g / abs(g)

"""Small dense complex linear algebra helpers.

Vectors and matrices are plain numpy arrays; the functions here add the
shape checks and the Hermitian eigensolver the rest of the package relies on.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-9
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-12
JACOBI_MAX_DIM = 64


class LinalgError(ValueError):
    """Raised on shape mismatches and invalid eigenproblems."""


class ConvergenceError(LinalgError):
    pass


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex array (vectors become column matrices)."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise LinalgError(f"expected a non-empty matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinalgError("matrix has non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def hadamard(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise LinalgError(f"shape mismatch {a.shape} vs {b.shape}")
    return a * b


def herm(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(a))))
    return bool(np.max(np.abs(a - a.conj().T)) <= tol * scale)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))  # direct sum avoids cancellation near convergence
    return float(np.linalg.norm(off))


def hermitian_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in ascending
    order and orthonormal eigenvector columns, so that ``A @ V == V @ diag(w)``.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise LinalgError(f"matrix must be square, got {a.shape}")
    if n > JACOBI_MAX_DIM:
        raise LinalgError(f"Jacobi solver limited to {JACOBI_MAX_DIM}x{JACOBI_MAX_DIM}")
    if not is_hermitian(a):
        raise LinalgError("matrix is not Hermitian")

    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag <= JACOBI_TOL * scale * 1e-3:
                    continue
                # real rotation on [[app, |b|], [|b|, aqq]] after removing the phase of b
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phase = b / mag
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, q] = a[q, p] = 0.0
    else:
        if _off_norm(a) > JACOBI_TOL * scale:
            raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]

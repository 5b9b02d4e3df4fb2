"""Smallest eigenpair of a 4x4 complex Hermitian matrix.

``H = R + iS`` is embedded as the real symmetric 8x8 matrix
``[[R, -S], [S, R]]``, which has every eigenvalue of ``H`` twice. A real
eigenvector ``[a; b]`` of the embedding gives the complex eigenvector
``a + ib`` of ``H``. The embedding is diagonalised by cyclic Jacobi.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConvergenceFailure

JACOBI_TOL = 1e-13
MAX_SWEEPS = 60


def _off(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(a: np.ndarray, tol: float = JACOBI_TOL,
                max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors (columns) of a real symmetric matrix.

    Sweeps until the off-diagonal Frobenius mass drops to ``tol * ||a||_F``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        if _off(a) <= tol * scale:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    if _off(a) <= tol * scale:
        return np.diag(a).copy(), v
    raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps")


def real_embedding(h: np.ndarray) -> np.ndarray:
    r, s = h.real, h.imag
    return np.block([[r, -s], [s, r]])


def hermitian4_min_eigenpair(a) -> tuple[float, tuple[complex, complex, complex, complex]]:
    """Smallest eigenvalue and a unit eigenvector of a 4x4 Hermitian matrix.

    ``a`` may be a 4x4 array or a flat row-major sequence of 16 entries; it
    is symmetrised as ``(a + a^H) / 2`` before solving.
    """
    h = np.asarray(a, dtype=complex).reshape(4, 4)
    h = 0.5 * (h + h.conj().T)
    evals, evecs = jacobi_eigh(real_embedding(h))
    k = int(np.argmin(evals))
    w = evecs[:4, k] + 1j * evecs[4:, k]
    w = w / np.linalg.norm(w)
    return float(evals[k]), tuple(complex(z) for z in w)

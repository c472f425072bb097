"""Small dense matrix helpers: spectral norm and symmetric eigenvalue bounds.

The matrices in this package are tiny (n <= 5), so simple iterative schemes
are both adequate and easy to audit.
"""

from __future__ import annotations

import numpy as np

Array = np.ndarray


def spectral_norm(a: Array, iters: int = 50, tol: float = 1e-10) -> float:
    """Largest singular value of ``a`` by power iteration on a^T a.

    The start vector is drawn from a fixed-seed RNG so results are
    deterministic while avoiding starts orthogonal to the top eigenvector.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    ata = a.T @ a
    n = ata.shape[0]
    rng = np.random.default_rng(0)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = ata @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
        new_est = float(np.sqrt(v @ ata @ v))
        if abs(new_est - est) <= tol * max(1.0, new_est):
            est = new_est
            break
        est = new_est
    return est


def min_eig_sym(a: Array, tol: float = 1e-12, max_sweeps: int = 100) -> float:
    """Smallest eigenvalue of a symmetric matrix via cyclic Jacobi rotations.

    Rotates until the off-diagonal Frobenius norm falls below ``tol``
    (relative to the matrix scale).
    """
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("square matrix required")
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-9 * (1.0 + np.abs(m).max())):
        raise ValueError("symmetric matrix required")
    m = 0.5 * (m + m.T)
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    scale = max(1.0, float(np.abs(m).max()))
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(m, -1) ** 2) * 2.0)
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= tol * scale * 1e-2:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                m = rot.T @ m @ rot
                m = 0.5 * (m + m.T)
    return float(np.min(np.diag(m)))


def is_positive_definite(a: Array, tol: float = 0.0) -> bool:
    """True iff the symmetric matrix has all eigenvalues strictly above tol."""
    try:
        return min_eig_sym(a) > tol
    except ValueError:
        return False

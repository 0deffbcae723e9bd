"""Cyclic Jacobi eigensolver for Hermitian matrices.

Reference backend used to cross-validate the LAPACK path: self-contained,
deterministic, adequate for the small matrices this package handles
(n <= 12 or so).  Rotations sweep the upper triangle cyclically until the
off-diagonal mass drops below tolerance.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalError


def _rotation(app: float, aqq: float, apq: complex):
    """(c, s, phase) zeroing entry (p, q) under h -> G h G* with
    G[p,p] = c, G[p,q] = s*phase, G[q,p] = -s*conj(phase), G[q,q] = c."""
    phase = apq / abs(apq)
    tau = (aqq - app) / (2 * abs(apq))
    if tau == 0:
        t = 1.0
    else:
        t = -np.sign(tau) / (abs(tau) + np.sqrt(1 + tau * tau))
    c = 1 / np.sqrt(1 + t * t)
    return c, t * c, phase


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 60):
    """Eigenvalues (descending) and matching eigenvector columns.

    Returns (w, v) with a == v @ diag(w) @ v.conj().T; v is unitary.
    """
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    if h.shape != (n, n):
        raise NumericalError(f"not square: {h.shape}")
    h = (h + h.conj().T) / 2
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(h))))

    def off(m):
        acc = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                acc += abs(m[p, q]) ** 2
        return np.sqrt(acc)

    converged = n <= 1 or off(h) <= tol * scale
    for _ in range(max_sweeps):
        if converged:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(h[p, q]) <= 1e-300:
                    continue
                c, s, phase = _rotation(h[p, p].real, h[q, q].real, h[p, q])
                sp = s * phase
                # rows: h <- G h
                hp = h[p, :].copy()
                hq = h[q, :].copy()
                h[p, :] = c * hp + sp * hq
                h[q, :] = -sp.conjugate() * hp + c * hq
                # columns: h <- h G*
                hp = h[:, p].copy()
                hq = h[:, q].copy()
                h[:, p] = c * hp + sp.conjugate() * hq
                h[:, q] = -sp * hp + c * hq
                # eigenvectors: v <- v G*
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + sp.conjugate() * vq
                v[:, q] = -sp * vp + c * vq
        converged = off(h) <= tol * scale
    if not converged:
        raise NumericalError("Jacobi sweep did not converge")

    w = h.diagonal().real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigvalsh(a, tol: float = 1e-12) -> np.ndarray:
    return jacobi_eigh(a, tol=tol)[0]

"""Dense complex matrix-function kernel.

Everything here operates on plain ``numpy.ndarray`` values with complex
dtype.  Structural tolerances follow the convention

    eps_struct(M) = 1e-12 * max(1, ||M||_F),

and the phi-functions are evaluated through augmented-block exponentials
so that singular generators stay on the main path (no matrix inversion).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (
    BranchCutError,
    ConsistencyError,
    DimensionError,
    DomainError,
    RangeError,
    RankError,
    SymmetryError,
    ValidationError,
)

__all__ = [
    "eps_struct",
    "as_square",
    "check_symmetric",
    "check_hermitian",
    "expm",
    "phi1",
    "phi2",
    "logm_principal",
    "sqrtm_psd",
    "polar",
    "takagi",
]


def eps_struct(m: np.ndarray) -> float:
    """Structural tolerance 1e-12 * max(1, ||M||_F)."""
    return 1e-12 * max(1.0, float(np.linalg.norm(m)))


def as_square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Validate a finite square complex matrix and return it as complex128."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValidationError(f"{name} contains non-finite entries")
    return m


def check_symmetric(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = as_square(m, name)
    err = float(np.linalg.norm(m - m.T))
    if err > eps_struct(m):
        raise SymmetryError(f"{name} is not symmetric: ||M - M^T|| = {err:.3e}")
    return m


def check_hermitian(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = as_square(m, name)
    err = float(np.linalg.norm(m - m.conj().T))
    if err > eps_struct(m):
        raise SymmetryError(f"{name} is not Hermitian: ||M - M*|| = {err:.3e}")
    return m


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential by backward-error-controlled scaling and squaring."""
    m = as_square(m)
    out = scipy.linalg.expm(m)
    if not np.all(np.isfinite(out.view(float))):
        raise RangeError("expm overflowed the floating-point range")
    return out


def _phi_augmented(m: np.ndarray, t: float, order: int) -> np.ndarray:
    """exp of the augmented block matrix; the top-right block is phi_order."""
    n = m.shape[0]
    dim = n + order * n
    aug = np.zeros((dim, dim), dtype=complex)
    aug[:n, :n] = m
    for k in range(order):
        r0 = k * n
        aug[r0 : r0 + n, r0 + n : r0 + 2 * n] = np.eye(n)
    big = expm(aug * t)
    return big[:n, order * n :]


def phi1(m: np.ndarray, t: float) -> np.ndarray:
    """integral_0^t exp(M s) ds = t (I + Mt/2! + (Mt)^2/3! + ...).

    Solves (e^{Mt} - I) = phi1(M, t) @ M without inverting M, so the
    result is well defined for singular and nilpotent M.
    """
    m = as_square(m)
    if t == 0.0:
        return np.zeros_like(m)
    return _phi_augmented(m, float(t), 1)


def phi2(m: np.ndarray, t: float) -> np.ndarray:
    """integral_0^t (t - s) exp(M s) ds = t^2 (I/2! + Mt/3! + ...).

    Satisfies e^{Mt} = I + Mt + M^2 @ phi2(M, t) for any square M.
    """
    m = as_square(m)
    if t == 0.0:
        return np.zeros_like(m)
    return _phi_augmented(m, float(t), 2)


def logm_principal(m: np.ndarray) -> np.ndarray:
    """Principal matrix logarithm.

    Refuses matrices with an eigenvalue within 1e-10 (relative to the
    eigenvalue scale) of the closed negative real axis; callers that hit
    this must use the phase-index continuation machinery instead.
    """
    m = as_square(m)
    eigs = np.linalg.eigvals(m)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    for lam in eigs:
        dist = abs(lam.imag) if lam.real <= 0 else abs(lam)
        if dist <= 1e-10 * scale:
            raise BranchCutError(
                f"eigenvalue {lam} lies within 1e-10 of the negative real cut"
            )
    out = scipy.linalg.logm(m)
    # round-trip certificate: expm(log M) = M to 1e-10 relative
    err = float(np.linalg.norm(scipy.linalg.expm(out) - m))
    if err > 1e-10 * max(1.0, float(np.linalg.norm(m))):
        raise BranchCutError(f"principal log round-trip failed: residual {err:.3e}")
    return out


def sqrtm_psd(h: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition."""
    h = check_hermitian(h, "sqrtm_psd operand")
    w, v = np.linalg.eigh(h)
    floor = -eps_struct(h)
    if np.any(w < floor):
        raise DomainError(f"matrix has negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def polar(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition M = U P with U unitary and P Hermitian PSD."""
    m = as_square(m)
    u_svd, s, vh = np.linalg.svd(m)
    if s[-1] <= eps_struct(m):
        raise RankError(f"polar factor undefined: smallest singular value {s[-1]:.3e}")
    u = u_svd @ vh
    p = (vh.conj().T * s) @ vh
    p = 0.5 * (p + p.conj().T)
    return u, p


def _sym_unitary_sqrt(z: np.ndarray) -> np.ndarray:
    """Square root T of a symmetric unitary Z with T unitary and T T^T = Z.

    Writes Z = X + iY with commuting real symmetric X, Y, diagonalizes
    them jointly by a real orthogonal Q, and halves the eigenphases.
    """
    x = z.real.copy()
    y = z.imag.copy()
    x = 0.5 * (x + x.T)
    y = 0.5 * (y + y.T)
    wx, q = np.linalg.eigh(x)
    # within X-eigenvalue clusters, rediagonalize Y (it commutes with X)
    tol = 1e-8 * max(1.0, float(np.max(np.abs(wx))))
    start = 0
    mcount = len(wx)
    while start < mcount:
        stop = start + 1
        while stop < mcount and abs(wx[stop] - wx[start]) <= tol:
            stop += 1
        if stop - start > 1:
            sub = q[:, start:stop]
            _, r = np.linalg.eigh(sub.T @ y @ sub)
            q[:, start:stop] = sub @ r
        start = stop
    phases = np.angle(np.diag(q.T @ z @ q))
    return q * np.exp(0.5j * phases)


def takagi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization of a complex symmetric matrix.

    Returns ``(u, d)`` with ``u`` unitary and ``d`` the nonincreasing real
    vector of singular values such that ``A = u.conj().T @ diag(d) @ u.conj()``
    (equivalently ``A conj(A) = u.conj().T @ diag(d)**2 @ u``).

    Degenerate singular values are handled per cluster (cluster tolerance
    1e-8 ||A||) through the square root of the symmetric unitary coupling
    between left and right singular subspaces.
    """
    a = check_symmetric(a, "takagi operand")
    n = a.shape[0]
    if n == 0:
        return np.eye(0, dtype=complex), np.zeros(0)
    p, s, vh = np.linalg.svd(a)
    tol = 1e-8 * max(float(s[0]), 1e-300)
    w = np.zeros((n, n), dtype=complex)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(s[stop] - s[start]) <= tol:
            stop += 1
        cols = slice(start, stop)
        if s[start] <= tol:
            # null cluster: conjugated right singular vectors span it
            w[:, cols] = vh[cols, :].T
        else:
            pc = p[:, cols]
            qc = vh[cols, :].conj().T
            z = pc.T @ qc  # symmetric unitary coupling within the cluster
            z = 0.5 * (z + z.T)
            w[:, cols] = pc @ _sym_unitary_sqrt(z).conj()
        start = stop
    d = s.copy()
    resid = float(np.linalg.norm(w @ (d[:, None] * w.T) - a))
    if resid > 1e-10 * max(1.0, float(np.linalg.norm(a))):
        raise ConsistencyError(f"takagi reconstruction residual {resid:.3e} too large")
    return w.conj().T, d

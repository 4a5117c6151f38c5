"""Generator construction, block propagation, and the CCR identities.

Conventions (frozen, also used by the JSON schema):

* operators stack as (a, a†), so the generator has the block layout
  ``[[-iB, A], [conj(A), i conj(B)]]``;
* the propagated block matrix is ``[[Phi, Psi], [conj(Psi), conj(Phi)]]``
  with ``Phi_0 = I`` and ``Psi_0 = 0``;
* the drift stacks as ``(h_t, conj(h_t)) = phi1(G, t) @ (h, conj(h))``.

Every propagated block carries its CCR residual as metadata; ``propagate``
escalates the residual to an error when it exceeds
``eps_r = 1e-10 * (1 + ||Phi||^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matfun
from .errors import AccuracyError, DimensionError, SymmetryError, ValidationError

__all__ = [
    "HamiltonianSpec",
    "Generator",
    "SymplecticBlock",
    "Drift",
    "build_generator",
    "propagate",
    "drift",
    "invert",
    "compose",
    "symplectic_form",
    "ccr_residual",
    "Propagator",
]


def _as_vector(h, n: int) -> np.ndarray:
    h = np.asarray(h, dtype=complex).reshape(-1)
    if h.shape != (n,):
        raise DimensionError(f"drive vector must have length {n}, got {h.shape}")
    if not np.all(np.isfinite(h.view(float))):
        raise ValidationError("drive vector contains non-finite entries")
    return h


@dataclass(frozen=True)
class HamiltonianSpec:
    """Problem instance: complex symmetric A, Hermitian B, drive vector h."""

    A: np.ndarray
    B: np.ndarray
    h: np.ndarray
    label: str | None = None

    def __post_init__(self):
        a = matfun.check_symmetric(np.asarray(self.A, dtype=complex), "A")
        b = matfun.check_hermitian(np.asarray(self.B, dtype=complex), "B")
        if a.shape != b.shape:
            raise DimensionError(f"A and B disagree in shape: {a.shape} vs {b.shape}")
        h = _as_vector(self.h, a.shape[0])
        for name, val in (("A", a), ("B", b), ("h", h)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class Generator:
    """2n x 2n generator of the symplectic group for one instance."""

    n: int
    mat: np.ndarray


@dataclass(frozen=True)
class SymplecticBlock:
    """Blocks (Phi, Psi) of the propagator at time t, plus residual metadata."""

    t: float
    phi: np.ndarray
    psi: np.ndarray
    ccr_residual: float = 0.0
    det_residual: float = 0.0

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    def full(self) -> np.ndarray:
        """Assemble the 2n x 2n block matrix."""
        return np.block(
            [[self.phi, self.psi], [self.psi.conj(), self.phi.conj()]]
        )


@dataclass(frozen=True)
class Drift:
    t: float
    h_t: np.ndarray
    hbar_t: np.ndarray


def symplectic_form(n: int) -> np.ndarray:
    """The 2n x 2n form J = [[0, I], [-I, 0]]."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def build_generator(ham: HamiltonianSpec) -> Generator:
    """Assemble G = [[-iB, A], [conj(A), i conj(B)]]."""
    n = ham.n
    g = np.zeros((2 * n, 2 * n), dtype=complex)
    g[:n, :n] = -1j * ham.B
    g[:n, n:] = ham.A
    g[n:, :n] = ham.A.conj()
    g[n:, n:] = 1j * ham.B.conj()
    g.setflags(write=False)
    return Generator(n=n, mat=g)


def ccr_residual(phi: np.ndarray, psi: np.ndarray) -> float:
    """Largest violation of the four canonical-commutation identities."""
    n = phi.shape[0]
    eye = np.eye(n)
    r1 = phi @ phi.conj().T - psi @ psi.conj().T - eye
    r2 = phi.conj().T @ phi - psi.T @ psi.conj() - eye
    r3 = phi @ psi.T - psi @ phi.T
    r4 = phi.conj().T @ psi - psi.T @ phi.conj()
    return max(float(np.linalg.norm(r)) for r in (r1, r2, r3, r4))


def _make_block(t: float, phi: np.ndarray, psi: np.ndarray) -> SymplecticBlock:
    res = ccr_residual(phi, psi)
    eps_r = 1e-10 * (1.0 + float(np.linalg.norm(phi, 2)) ** 2)
    if res > eps_r:
        raise AccuracyError(
            f"CCR residual {res:.3e} exceeds tolerance {eps_r:.3e} at t={t}"
        )
    det_res = 0.0
    scale = float(np.linalg.norm(phi, 2))
    if scale < 1e6:  # det(S)=1 check is meaningful only before it drowns in roundoff
        big = np.block([[phi, psi], [psi.conj(), phi.conj()]])
        det_res = abs(complex(np.linalg.det(big)) - 1.0)
    return SymplecticBlock(
        t=t, phi=phi, psi=psi, ccr_residual=res, det_residual=det_res
    )


def propagate(gen: Generator, t: float) -> SymplecticBlock:
    """Extract (Phi_t, Psi_t) from expm(G t)."""
    n = gen.n
    if t == 0.0:
        return SymplecticBlock(t=0.0, phi=np.eye(n, dtype=complex),
                               psi=np.zeros((n, n), dtype=complex))
    s = matfun.expm(gen.mat * t)
    return _make_block(float(t), s[:n, :n], s[:n, n:])


def drift(gen: Generator, h: np.ndarray, t: float) -> Drift:
    """Drift (h_t, conj(h_t)) = phi1(G, t) @ (h, conj(h)); valid for singular G."""
    n = gen.n
    h = _as_vector(h, n)
    v = np.concatenate([h, h.conj()])
    if t == 0.0:
        out = np.zeros(2 * n, dtype=complex)
    else:
        out = matfun.phi1(gen.mat, t) @ v
    return Drift(t=float(t), h_t=out[:n], hbar_t=out[n:])


def invert(block: SymplecticBlock) -> SymplecticBlock:
    """Time reversal: (Phi_{-t}, Psi_{-t}) = (Phi^*, -Psi^T)."""
    return _make_block(-block.t, block.phi.conj().T, -block.psi.T)


def compose(s1: SymplecticBlock, s2: SymplecticBlock) -> SymplecticBlock:
    """Blocks of the product S_1 S_2 of two block matrices.

    Phi_12 = Phi_1 Phi_2 + Psi_1 conj(Psi_2),
    Psi_12 = Phi_1 Psi_2 + Psi_1 conj(Phi_2);
    for blocks of one generator this is the semigroup law t1 + t2.
    """
    if s1.n != s2.n:
        raise DimensionError(f"mode counts differ: {s1.n} vs {s2.n}")
    phi = s1.phi @ s2.phi + s1.psi @ s2.psi.conj()
    psi = s1.phi @ s2.psi + s1.psi @ s2.phi.conj()
    return _make_block(s1.t + s2.t, phi, psi)


class Propagator:
    """Reusable factorization of one generator for many time points.

    Diagonalizes G once and evaluates e^{Gt}, phi1(G,t) v and phi2(G,t) v
    per time point in O(n^2); falls back to scaling-and-squaring when the
    eigenbasis is unreliable.  Blocks returned here skip the per-call CCR
    escalation (quadrature nodes query it thousands of times); use
    :func:`propagate` when the certificate is required.
    """

    def __init__(self, ham: HamiltonianSpec):
        self.ham = ham
        self.n = ham.n
        self.gen = build_generator(ham)
        self.vstack = np.concatenate([ham.h, ham.h.conj()])
        g = self.gen.mat
        self._diag_ok = False
        try:
            lam, v = np.linalg.eig(g)
            vinv = np.linalg.inv(v)
            resid = float(np.linalg.norm((v * lam) @ vinv - g))
            cond = float(np.linalg.cond(v))
            if resid <= 1e-12 * max(1.0, float(np.linalg.norm(g))) and cond < 1e8:
                self._lam, self._v, self._vinv = lam, v, vinv
                self._diag_ok = True
        except np.linalg.LinAlgError:
            pass

    # -- scalar phi functions on the spectrum ------------------------------

    @staticmethod
    def _phi1_scalar(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x, dtype=complex)
        small = np.abs(x) < 1e-5
        xs = x[small]
        out[small] = 1.0 + xs / 2.0 + xs**2 / 6.0 + xs**3 / 24.0
        xl = x[~small]
        out[~small] = np.expm1(xl) / xl
        return out

    @staticmethod
    def _phi2_scalar(x: np.ndarray) -> np.ndarray:
        out = np.empty_like(x, dtype=complex)
        small = np.abs(x) < 1e-4
        xs = x[small]
        out[small] = 0.5 + xs / 6.0 + xs**2 / 24.0 + xs**3 / 120.0
        xl = x[~small]
        out[~small] = (np.expm1(xl) - xl) / xl**2
        return out

    # -- single-time evaluations -------------------------------------------

    def matrix(self, t: float) -> np.ndarray:
        if self._diag_ok:
            return (self._v * np.exp(self._lam * t)) @ self._vinv
        return matfun.expm(self.gen.mat * t)

    def matrices(self, ts: np.ndarray) -> np.ndarray:
        """Batched e^{Gt} for an array of times, shape (len(ts), 2n, 2n)."""
        ts = np.asarray(ts, dtype=float)
        if self._diag_ok:
            w = np.exp(np.multiply.outer(ts, self._lam))
            return np.einsum("ik,tk,kj->tij", self._v, w, self._vinv)
        return np.stack([matfun.expm(self.gen.mat * t) for t in ts])

    def block(self, t: float) -> SymplecticBlock:
        n = self.n
        s = self.matrix(t)
        return SymplecticBlock(t=float(t), phi=s[:n, :n], psi=s[:n, n:],
                               ccr_residual=float("nan"))

    def drift_vec(self, t: float) -> np.ndarray:
        """(h_t, conj h_t) at time t."""
        if t == 0.0:
            return np.zeros(2 * self.n, dtype=complex)
        if self._diag_ok:
            coef = self._phi1_scalar(self._lam * t) * t
            return (self._v * coef) @ (self._vinv @ self.vstack)
        return matfun.phi1(self.gen.mat, t) @ self.vstack

    def phi2_vec(self, t: float) -> np.ndarray:
        """phi2(G, t) @ (h, conj h)."""
        if t == 0.0:
            return np.zeros(2 * self.n, dtype=complex)
        if self._diag_ok:
            coef = self._phi2_scalar(self._lam * t) * t * t
            return (self._v * coef) @ (self._vinv @ self.vstack)
        return matfun.phi2(self.gen.mat, t) @ self.vstack

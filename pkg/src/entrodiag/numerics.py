"""Deterministic complex linear algebra and seedable pure-state sampling.

Everything here is a pure function of its inputs.  Randomness enters only
through an explicit :class:`SeededRng` value, so identical (seed, stream)
pairs reproduce identical draws on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
MAX_DIM = 64
JACOBI_SWEEP_CAP = 100


@dataclass(frozen=True)
class SeededRng:
    """Reproducible RNG handle; (seed, stream) fully determines all draws."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, offset: int) -> "SeededRng":
        return SeededRng(self.seed, self.stream + offset)


@dataclass(frozen=True)
class MixedEnsemble:
    """Convex mixture of pure states: weights (k,) and unit rows (k, d)."""

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        s = np.asarray(self.states, dtype=complex)
        if w.ndim != 1 or s.ndim != 2 or len(w) != len(s):
            raise BadDimension("weights and states must align")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise BadDimension("weights must be nonnegative and sum to 1")
        norms = np.linalg.norm(s, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise BadDimension("every component state must be normalized")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", s)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def density_matrix(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.weights, self.states,
                         self.states.conj())


def is_unitary(M: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    M = np.asarray(M, dtype=complex)
    d = M.shape[0]
    return bool(np.max(np.abs(M.conj().T @ M - np.eye(d))) <= tol)


def hermitian_eigen(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, unitary matrix of eigenvector columns).
    Raises NotHermitian on asymmetric input, NoConvergence past 100 sweeps.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NotHermitian("input must be a square matrix")
    d = H.shape[0]
    if d > MAX_DIM:
        raise BadDimension(f"dimension {d} exceeds supported {MAX_DIM}")
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian within 1e-10")

    A = (H + H.conj().T) / 2.0
    V = np.eye(d, dtype=complex)
    if d == 1:
        return A.real.diagonal().copy(), V
    scale = max(float(np.max(np.abs(A))), 1.0)
    tol = 1e-14 * scale

    converged = False
    for _ in range(JACOBI_SWEEP_CAP):
        offdiag = np.abs(A - np.diag(np.diagonal(A)))
        if np.max(offdiag) <= tol:
            converged = True
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                r = abs(A[p, q])
                if r <= tol:
                    continue
                phase = A[p, q] / r
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G acts on columns (p, q):
                #   col_p' = c*col_p - s*conj(phase)*col_q
                #   col_q' = s*phase*col_p + c*col_q   (phase folded below)
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * np.conj(phase) * col_q
                A[:, q] = s * col_p + c * np.conj(phase) * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * phase * row_q
                A[q, :] = s * row_p + c * phase * row_q
                A[p, p] = app - t * r
                A[q, q] = aqq + t * r
                A[p, q] = 0.0
                A[q, p] = 0.0
                vcol_p = V[:, p].copy()
                vcol_q = V[:, q].copy()
                V[:, p] = c * vcol_p - s * np.conj(phase) * vcol_q
                V[:, q] = s * vcol_p + c * np.conj(phase) * vcol_q
    else:
        converged = False
    if not converged:
        offdiag = np.abs(A - np.diag(np.diagonal(A)))
        if np.max(offdiag) > tol:
            raise NoConvergence("Jacobi iteration cap exceeded")

    evals = np.diagonal(A).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], V[:, order]


def tensor_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product with index convention (i1, i2) -> i1*dimB + i2."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if not (np.all(np.isfinite(A.real)) and np.all(np.isfinite(A.imag))
            and np.all(np.isfinite(B.real)) and np.all(np.isfinite(B.imag))):
        raise BadDimension("tensor factors must be finite")
    return np.kron(A, B)


def haar_unitary(d: int, rng: SeededRng) -> np.ndarray:
    """Haar-like random unitary: Gaussian matrix, QR, R-diagonal phase fix."""
    if d < 2 or d > MAX_DIM:
        raise BadDimension(f"dimension must be in [2, {MAX_DIM}]")
    gen = rng.generator()
    z = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return q


def _normalize_rows(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    return v / norms


def sample_states(d: int, n: int, strategy: str, rng: SeededRng,
                  t: float | None = None) -> np.ndarray:
    """Draw n unit vectors in C^d, rows of the returned (n, d) array.

    Strategies: 'haar' (normalized i.i.d. complex Gaussian), 'real'
    (uniform on the real unit sphere), 'rrs' (real with the index
    symmetry psi_j = psi_{d-j}), 'basis_mix' (convex path between a Haar
    state and a random basis vector at parameter t; t drawn uniformly per
    sample when not given).
    """
    if d < 2:
        raise BadDimension("state dimension must be at least 2")
    if n < 1:
        raise BadDimension("sample count must be positive")
    gen = rng.generator()
    if strategy == "haar":
        v = gen.normal(size=(n, d)) + 1j * gen.normal(size=(n, d))
        return _normalize_rows(v)
    if strategy == "real":
        v = gen.normal(size=(n, d)).astype(complex)
        return _normalize_rows(v)
    if strategy == "rrs":
        g = gen.normal(size=(n, d))
        mirror = (-np.arange(d)) % d
        v = (g + g[:, mirror]).astype(complex)
        bad = np.linalg.norm(v, axis=1) < 1e-8
        if np.any(bad):
            v[bad, 0] = 1.0
        return _normalize_rows(v)
    if strategy == "basis_mix":
        base = gen.normal(size=(n, d)) + 1j * gen.normal(size=(n, d))
        base = _normalize_rows(base)
        k = gen.integers(d, size=n)
        tt = np.full(n, float(t)) if t is not None else gen.uniform(size=n)
        v = (1.0 - tt)[:, None] * base
        v[np.arange(n), k] += tt
        bad = np.linalg.norm(v, axis=1) < 1e-8
        if np.any(bad):
            v[bad, :] = 0.0
            v[bad, k[bad]] = 1.0
        return _normalize_rows(v)
    raise BadDimension(f"unknown sampling strategy {strategy!r}")


def sample_state(d: int, strategy: str, rng: SeededRng,
                 t: float | None = None) -> np.ndarray:
    """Single-state convenience wrapper around :func:`sample_states`."""
    return sample_states(d, 1, strategy, rng, t=t)[0]

"""Renyi/Shannon/min entropies, the order duality map, gradients, and
Born-rule outcome distributions.  All entropies are in bits."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import (BadOrder, BoundaryDistribution, DimensionMismatch,
                     UnsupportedOrder)
from .numerics import MixedEnsemble, hermitian_eigen

LN2 = math.log(2.0)
ORDER_SNAP = 1e-6


class EntropyPoint(NamedTuple):
    hx: float
    hy: float


def check_order(alpha: float) -> float:
    """Validate a Renyi order and snap near-1 values onto the exact branch."""
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0.5:
        raise BadOrder(f"Renyi order must be >= 1/2, got {alpha}")
    if alpha != math.inf and abs(alpha - 1.0) < ORDER_SNAP:
        return 1.0
    return alpha


def as_prob(p, tol: float = 1e-10) -> np.ndarray:
    """Validate and clean a probability vector (tiny negatives clamped)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) == 0:
        raise DimensionMismatch("probability vector must be 1-d and nonempty")
    if np.min(p) < -1e-14:
        raise DimensionMismatch("negative probability entry")
    if abs(p.sum() - 1.0) > tol:
        raise DimensionMismatch(f"probabilities sum to {p.sum()}, not 1")
    return np.clip(p, 0.0, None)


def renyi_rows(P: np.ndarray, alpha: float) -> np.ndarray:
    """Renyi entropy of each row of a nonnegative (n, d) array, in bits."""
    P = np.asarray(P, dtype=float)
    alpha = check_order(alpha)
    if alpha == math.inf:
        return -np.log2(np.max(P, axis=-1))
    if alpha == 1.0:
        terms = np.where(P > 0.0, P * np.log2(np.where(P > 0.0, P, 1.0)), 0.0)
        h = -np.sum(terms, axis=-1)
    else:
        h = np.log2(np.sum(P ** alpha, axis=-1)) / (1.0 - alpha)
    return np.clip(h, 0.0, None)


def renyi(p, alpha: float) -> float:
    """alpha-Renyi entropy of a probability distribution, base-2 logs."""
    return float(renyi_rows(as_prob(p)[None, :], alpha)[0])


def dual_order(alpha: float) -> float:
    """The order beta with 1/alpha + 1/beta = 2."""
    alpha = check_order(alpha)
    if alpha == math.inf:
        return 0.5
    if alpha == 0.5:
        return math.inf
    return alpha / (2.0 * alpha - 1.0)


def is_dual_pair(alpha: float, beta: float, tol: float = 1e-9) -> bool:
    alpha = check_order(alpha)
    beta = check_order(beta)
    ia = 0.0 if alpha == math.inf else 1.0 / alpha
    ib = 0.0 if beta == math.inf else 1.0 / beta
    return abs(ia + ib - 2.0) <= tol


def discrete_variance(p) -> float:
    """1 - max_j p(j); equals 1 - 2^(-H_inf(p))."""
    return float(1.0 - np.max(as_prob(p)))


def renyi_gradient(p, alpha: float) -> np.ndarray:
    """Componentwise derivative dH_alpha/dp_j in bits.

    Defined away from the boundary of the simplex; entries below 1e-12
    raise BoundaryDistribution, and alpha = inf is not differentiable.
    """
    p = as_prob(p)
    alpha = check_order(alpha)
    if alpha == math.inf:
        raise UnsupportedOrder("gradient undefined at alpha = inf")
    if np.min(p) <= 1e-12:
        raise BoundaryDistribution("gradient undefined at the boundary")
    return _renyi_gradient_raw(p, alpha)


def _renyi_gradient_raw(p: np.ndarray, alpha: float,
                        floor: float = 1e-14) -> np.ndarray:
    """Gradient without boundary guard; p is floored for internal optimizers."""
    p = np.clip(p, floor, None)
    if alpha == 1.0:
        return -(np.log2(p) + 1.0 / LN2)
    return (alpha / (1.0 - alpha)) * p ** (alpha - 1.0) / np.sum(p ** alpha) / LN2


def born_rows(W: np.ndarray, psis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Outcome distributions (pX, pY) for each row state, vectorized."""
    psis = np.asarray(psis, dtype=complex)
    pX = np.abs(psis) ** 2
    pY = np.abs(psis @ W.T) ** 2
    return pX, pY


def born_distributions(pair, psi) -> tuple[np.ndarray, np.ndarray]:
    """Born-rule distributions pX = |psi|^2 and pY = |W psi|^2."""
    W = pair.matrix if hasattr(pair, "matrix") else np.asarray(pair, complex)
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or W.shape[1] != len(psi):
        raise DimensionMismatch("state dimension must match the analysis matrix")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise DimensionMismatch("state must be normalized")
    pX, pY = born_rows(W, psi[None, :])
    return pX[0], pY[0]


def entropy_pairs_rows(W: np.ndarray, psis: np.ndarray, alpha: float,
                       beta: float) -> np.ndarray:
    """(n, 2) array of (H_alpha(pX), H_beta(pY)) for row states, vectorized."""
    pX, pY = born_rows(W, psis)
    return np.column_stack([renyi_rows(pX, alpha), renyi_rows(pY, beta)])


def entropy_pair(pair, psi, alpha: float, beta: float) -> EntropyPoint:
    """The diagram point (H_alpha(pX), H_beta(pY)) of a pure state."""
    pX, pY = born_distributions(pair, psi)
    return EntropyPoint(renyi(pX, alpha), renyi(pY, beta))


def von_neumann(rho: MixedEnsemble, d: int | None = None) -> float:
    """Von Neumann entropy of the ensemble's density matrix, in bits."""
    if d is not None and rho.dim != d:
        raise DimensionMismatch("ensemble dimension mismatch")
    evals, _ = hermitian_eigen(rho.density_matrix())
    evals = np.clip(evals, 0.0, None)
    evals = evals / evals.sum()
    return float(renyi_rows(evals[None, :], 1.0)[0])

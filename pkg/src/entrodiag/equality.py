"""Maassen-Uffink bound, Berta bound, equality-state verdicts, the
phase-equalizable submatrix scan, and abelian-Fourier equality enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .entropy import (EntropyPoint, born_distributions, check_order,
                      entropy_pair, is_dual_pair, renyi, renyi_rows)
from .errors import BoundaryOrder, NotDualPair, TooLarge
from .numerics import MixedEnsemble, tensor_product
from .observables import (AbelianGroup, ObservablePair, Subgroup, annihilator,
                          coset_representatives, subgroups, translate_modulate)

SUPPORT_CUTOFF = 1e-10


@dataclass(frozen=True)
class OverlapData:
    c: float
    mu_bound_bits: float
    inv_c2: float
    inv_c2_is_integer: bool


@dataclass(frozen=True)
class SupportPair:
    sX: tuple[int, ...]
    sY: tuple[int, ...]
    witness: np.ndarray | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.sX), len(self.sY))


@dataclass(frozen=True)
class EqualityReport:
    is_equality: bool
    entropy_sum_bits: float
    deficit: float
    supports: SupportPair
    structural_ok: bool
    entropy_point: EntropyPoint
    alpha: float
    beta: float

    def to_json_obj(self) -> dict:
        return {"verdict": bool(self.is_equality),
                "deficit": float(self.deficit),
                "sX": list(self.supports.sX),
                "sY": list(self.supports.sY),
                "entropy_point": [float(self.entropy_point.hx),
                                  float(self.entropy_point.hy)],
                "alpha": self.alpha,
                "beta": self.beta}


def overlap_data(pair: ObservablePair) -> OverlapData:
    """Max entry modulus c and the MU bound -log2 c^2."""
    c = float(np.max(np.abs(pair.matrix)))
    inv_c2 = 1.0 / c ** 2
    is_int = abs(inv_c2 - round(inv_c2)) <= 1e-6 * inv_c2
    return OverlapData(c=c, mu_bound_bits=-2.0 * math.log2(c),
                       inv_c2=inv_c2, inv_c2_is_integer=is_int)


def _require_dual(alpha: float, beta: float) -> tuple[float, float]:
    alpha = check_order(alpha)
    beta = check_order(beta)
    if not is_dual_pair(alpha, beta):
        raise NotDualPair(f"({alpha}, {beta}) violates 1/a + 1/b = 2")
    return alpha, beta


def mu_deficit(pair: ObservablePair, psi, alpha: float, beta: float) -> float:
    """H_alpha(pX) + H_beta(pY) minus the MU bound; >= -1e-9 for all states."""
    alpha, beta = _require_dual(alpha, beta)
    pt = entropy_pair(pair, psi, alpha, beta)
    return pt.hx + pt.hy - overlap_data(pair).mu_bound_bits


def phase_equalizable(M: np.ndarray, tol: float = 1e-6) -> bool:
    """Can the block be made constant by row/column phase multiplication?

    True iff all entry moduli agree within tol and every 2x2 minor has
    trivial phase arg(M_ij M_kl conj(M_il) conj(M_kj)).
    """
    M = np.asarray(M, dtype=complex)
    mods = np.abs(M)
    if M.size == 0:
        return False
    if mods.max() - mods.min() > tol:
        return False
    rows, cols = M.shape
    for i, k in combinations(range(rows), 2):
        for j, l in combinations(range(cols), 2):
            minor = M[i, j] * M[k, l] * np.conj(M[i, l]) * np.conj(M[k, j])
            if abs(np.angle(minor)) > tol:
                return False
    return True


def _supports(p: np.ndarray) -> tuple[int, ...]:
    cutoff = SUPPORT_CUTOFF * max(float(np.max(p)), 1e-300)
    return tuple(int(i) for i in np.nonzero(p > cutoff)[0])


def _flat(p: np.ndarray, idx, tol: float = 1e-6) -> bool:
    vals = p[list(idx)]
    return bool(vals.max() / vals.min() - 1.0 <= tol)


def check_equality_state(pair: ObservablePair, psi, alpha: float, beta: float,
                         tol: float = 1e-9) -> EqualityReport:
    """Verdict and structural evidence for MU equality of a pure state.

    Scope is interior dual orders (alpha, beta > 1/2 strictly); the (1/2,
    inf) boundary is handled by :func:`boundary_half_inf_deficit` instead.
    """
    alpha, beta = _require_dual(alpha, beta)
    if alpha in (0.5, math.inf) or beta in (0.5, math.inf):
        raise BoundaryOrder("boundary orders are excluded from the "
                            "equality characterization")
    data = overlap_data(pair)
    pX, pY = born_distributions(pair, psi)
    hx = renyi(pX, alpha)
    hy = renyi(pY, beta)
    total = hx + hy
    deficit = total - data.mu_bound_bits

    sX = _supports(pX)
    sY = _supports(pY)
    block = pair.matrix[np.ix_(list(sY), list(sX))]
    structural = (
        _flat(pX, sX) and _flat(pY, sY)
        and bool(np.max(np.abs(np.abs(block) - data.c)) <= 1e-8)
        and phase_equalizable(block, tol=1e-6)
        and abs(len(sX) * len(sY) * data.c ** 2 - 1.0) <= 1e-6
    )
    is_eq = bool(deficit <= tol) and structural
    return EqualityReport(is_equality=is_eq, entropy_sum_bits=total,
                          deficit=deficit,
                          supports=SupportPair(sX=sX, sY=sY),
                          structural_ok=structural,
                          entropy_point=EntropyPoint(hx, hy),
                          alpha=alpha, beta=beta)


@dataclass(frozen=True)
class SupportScan:
    """Result of the exhaustive equality-support search."""

    pairs: tuple[SupportPair, ...]
    candidates_by_shape: dict[tuple[int, int], int]

    @property
    def total_candidates(self) -> int:
        return sum(self.candidates_by_shape.values())


def _witness_from_block(W: np.ndarray, sX, sY) -> np.ndarray:
    block = W[np.ix_(list(sY), list(sX))]
    phases = block[0, :] / np.abs(block[0, :])
    psi = np.zeros(W.shape[0], dtype=complex)
    psi[list(sX)] = np.conj(phases) / math.sqrt(len(sX))
    return psi


def find_equality_supports(pair: ObservablePair, tol: float = 1e-8,
                           shapes=None) -> SupportScan:
    """Enumerate all support pairs admitting an MU equality state.

    Scans every (sX, sY) with |sX| * |sY| = round(1/c^2); a hit must have
    all bridged entries of modulus c and a phase-equalizable block.  Each
    hit carries the reconstructed witness state.  If 1/c^2 is not an
    integer the scan is empty (no equality states can exist).
    """
    W = pair.matrix
    d = W.shape[0]
    if d > 12:
        raise TooLarge("support scan is limited to d <= 12")
    data = overlap_data(pair)
    if not data.inv_c2_is_integer:
        return SupportScan(pairs=(), candidates_by_shape={})
    m = round(data.inv_c2)

    all_shapes = [(a, m // a) for a in range(1, m + 1)
                  if m % a == 0 and a <= d and m // a <= d]
    if shapes is not None:
        wanted = {tuple(s) for s in shapes}
        all_shapes = [s for s in all_shapes if s in wanted]

    counts = {s: comb(d, s[0]) * comb(d, s[1]) for s in all_shapes}
    if sum(counts.values()) > 10 ** 7:
        raise TooLarge("candidate count exceeds 1e7")

    maxmod = np.abs(W) >= data.c - tol
    hits: list[SupportPair] = []
    for a, b in all_shapes:
        for sX in combinations(range(d), a):
            # rows usable with every chosen column
            rows_ok = np.nonzero(np.all(maxmod[:, list(sX)], axis=1))[0]
            if len(rows_ok) < b:
                continue
            for sY in combinations(rows_ok.tolist(), b):
                block = W[np.ix_(list(sY), list(sX))]
                if np.max(np.abs(np.abs(block) - data.c)) > tol:
                    continue
                if not phase_equalizable(block, tol=1e-6):
                    continue
                witness = _witness_from_block(W, sX, sY)
                report = check_equality_state(pair, witness, 1.0, 1.0,
                                              tol=1e-8)
                if report.is_equality:
                    hits.append(SupportPair(sX=tuple(sX), sY=tuple(sY),
                                            witness=witness))
    hits.sort(key=lambda sp: (len(sp.sX), sp.sX, sp.sY))
    return SupportScan(pairs=tuple(hits), candidates_by_shape=counts)


def fourier_equality_states(G: AbelianGroup):
    """Per subgroup L: entropy point (log2|L|, log2(d/|L|)) and the
    orthonormal family of translated/modulated indicator equality states."""
    from .observables import fourier_group
    d = G.order
    out = []
    for L in subgroups(G):
        Lperp = annihilator(G, L)
        point = EntropyPoint(math.log2(len(L)), math.log2(d // len(L)))
        family = [translate_modulate(G, L, j, k)
                  for j in coset_representatives(G, L)
                  for k in coset_representatives(G, Lperp)]
        out.append((L, point, np.array(family)))
    return out


def tensor_equality(pair1: ObservablePair, psi1, pair2: ObservablePair, psi2,
                    alpha: float, beta: float) -> EqualityReport:
    """Equality report for the tensored setup (W1 (x) W2, psi1 (x) psi2)."""
    W = tensor_product(pair1.matrix, pair2.matrix)
    combined = ObservablePair(W, f"{pair1.label}(x){pair2.label}")
    psi = np.kron(np.asarray(psi1, complex), np.asarray(psi2, complex))
    return check_equality_state(combined, psi, alpha, beta)


def boundary_half_inf_deficit(pair: ObservablePair, psi) -> float:
    """H_{1/2}(pX) + H_inf(pY) minus the MU bound (boundary dual pair)."""
    pX, pY = born_distributions(pair, psi)
    return (renyi(pX, 0.5) + renyi(pY, math.inf)
            - overlap_data(pair).mu_bound_bits)


def berta_slack(pair: ObservablePair, rho: MixedEnsemble) -> float:
    """Shannon-case slack H(pX) + H(pY) - MU bound - S(rho), >= -1e-9."""
    from .entropy import von_neumann
    W = pair.matrix
    pX = np.einsum("k,ki->i", rho.weights, np.abs(rho.states) ** 2)
    pY = np.einsum("k,ki->i", rho.weights,
                   np.abs(rho.states @ W.T) ** 2)
    hx = float(renyi_rows(pX[None, :], 1.0)[0])
    hy = float(renyi_rows(pY[None, :], 1.0)[0])
    return hx + hy - overlap_data(pair).mu_bound_bits - von_neumann(rho)

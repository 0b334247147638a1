"""Numerical probes for the four frontier conjectures (product states,
Fourier decomposition, order independence, rrs sufficiency).

Each probe emits a ProbeReport quantifying the deviation between two
empirical frontiers; verdicts are "consistent" or "tension" relative to a
user threshold, never proof or refutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import check_order, entropy_pairs_rows, is_dual_pair
from .errors import NotDualPair, TooLarge
from .frontier import (FrontierCurve, MinimizeOptions, frontier_deviation,
                       frontier_value, frontier_witnesses, pareto_lower,
                       sample_diagram)
from .numerics import SeededRng, sample_states, tensor_product
from .observables import ObservablePair, fourier_cyclic


@dataclass(frozen=True)
class ProbeReport:
    conjecture_id: int
    unitary: str
    alpha: float
    beta: float
    n: int
    seed: int
    max_abs: float
    signed_max: float
    threshold: float
    verdict: str  # "consistent" | "tension"

    def to_json_obj(self) -> dict:
        return {"conjecture": self.conjecture_id,
                "unitary": self.unitary,
                "alpha": self.alpha,
                "beta": self.beta,
                "n": self.n,
                "seed": self.seed,
                "max_abs": self.max_abs,
                "signed_max": self.signed_max,
                "threshold": self.threshold,
                "verdict": self.verdict}


def _report(cid, label, alpha, beta, n, seed, dev, threshold) -> ProbeReport:
    verdict = "consistent" if dev["max_abs"] <= threshold else "tension"
    return ProbeReport(conjecture_id=cid, unitary=label, alpha=alpha,
                       beta=beta, n=n, seed=seed,
                       max_abs=dev["max_abs"], signed_max=dev["signed_max"],
                       threshold=threshold, verdict=verdict)


def product_states(d1: int, d2: int, n: int, rng: SeededRng) -> np.ndarray:
    """n Haar-factor product states psi1 (x) psi2, rows of an (n, d1*d2)."""
    a = sample_states(d1, n, "haar", rng.substream(0))
    b = sample_states(d2, n, "haar", rng.substream(1))
    return np.einsum("ni,nj->nij", a, b).reshape(n, d1 * d2)


def probe_product_states(pair1: ObservablePair, pair2: ObservablePair,
                         alpha: float, beta: float, n: int,
                         threshold: float, seed: int = 0) -> ProbeReport:
    """Conjecture: product states already trace out the frontier of a
    tensor-product observable pair.

    Compares the frontier of n product states against the frontier of n
    general Haar states on W1 (x) W2.  The general-side frontier is taken
    over the union of both samples, so the subset direction (product curve
    never below the general curve) holds exactly.
    """
    d = pair1.dim * pair2.dim
    if d > 16:
        raise TooLarge("product probe is limited to d1*d2 <= 16")
    alpha = check_order(alpha)
    beta = check_order(beta)
    W = tensor_product(pair1.matrix, pair2.matrix)
    label = f"{pair1.label}(x){pair2.label}"
    rng = SeededRng(seed)
    prod = product_states(pair1.dim, pair2.dim, n, rng)
    gen = sample_states(d, n, "haar", rng.substream(2))
    pts_prod = entropy_pairs_rows(W, prod, alpha, beta)
    pts_gen = entropy_pairs_rows(W, gen, alpha, beta)
    A = pareto_lower(pts_prod)
    B = pareto_lower(np.vstack([pts_gen, pts_prod]))
    dev = frontier_deviation(A, B)
    assert dev["signed_max"] >= -1e-9
    return _report(1, label, alpha, beta, n, seed, dev, threshold)


def probe_fourier_decomposition(d1: int, d2: int, alpha: float, beta: float,
                                n: int, threshold: float,
                                seed: int = 0) -> ProbeReport:
    """Conjecture: F_{d1*d2} and F_{d1} (x) F_{d2} share one frontier.

    Both frontiers use the same Haar sample (identical budget and seed)
    evaluated under the two analysis matrices, refined by identical
    constrained-minimization sweeps near the corners.
    """
    d = d1 * d2
    if d > 16:
        raise TooLarge("decomposition probe is limited to d1*d2 <= 16")
    alpha = check_order(alpha)
    beta = check_order(beta)
    big = fourier_cyclic(d)
    split = ObservablePair(
        tensor_product(fourier_cyclic(d1).matrix, fourier_cyclic(d2).matrix),
        f"fourier:{d1}(x)fourier:{d2}")
    rng = SeededRng(seed)
    opts = MinimizeOptions(restarts=16, seed=seed + 17)
    # sweep step ~0.03 bits; random samples alone leave the steep corner
    # regions of a d >= 4 frontier badly undersampled
    n_sweep = int(math.ceil(math.log2(d) / 0.03))

    def refined(pair):
        pts = sample_diagram(pair, alpha, beta, n, "haar", rng).points
        wit = frontier_witnesses(pair, alpha, beta, n_sweep, opts)
        wpts = entropy_pairs_rows(pair.matrix, wit, alpha, beta)
        return pareto_lower(np.vstack([pts, wpts]))

    dev = frontier_deviation(refined(big), refined(split))
    return _report(2, f"fourier:{d} vs {split.label}", alpha, beta, n, seed,
                   dev, threshold)


def probe_alpha_independence(pair: ObservablePair, base_pair, other_pairs,
                             n: int, threshold: float,
                             seed: int = 0) -> ProbeReport:
    """Conjecture: the optimal states of one dual order pair stay optimal
    at every other pair.

    Witnesses of the base-pair frontier (constrained-minimization sweep)
    are re-evaluated at each other pair; deviation is their worst vertical
    distance above that pair's own sampled frontier.
    """
    pairs = [tuple(base_pair)] + [tuple(p) for p in other_pairs]
    for a, b in pairs:
        a, b = check_order(a), check_order(b)
        if a == math.inf or b == math.inf or a == 0.5 or b == 0.5:
            raise NotDualPair("probe needs interior orders")
        if not is_dual_pair(a, b):
            raise NotDualPair(f"({a}, {b}) violates 1/a + 1/b = 2")
    a0, b0 = base_pair
    # 15-point sweep keeps the probe well under the selftest time budget
    witnesses = frontier_witnesses(pair, a0, b0, n_sweep=15)
    signed = -math.inf
    worst = 0.0
    rng = SeededRng(seed)
    for i, (a, b) in enumerate(pairs[1:]):
        sample = sample_diagram(pair, a, b, n, "haar", rng.substream(i))
        curve = pareto_lower(sample.points)
        wpts = entropy_pairs_rows(pair.matrix, witnesses, a, b)
        gap = wpts[:, 1] - frontier_value(curve, wpts[:, 0])
        gap = gap[np.isfinite(gap)]
        signed = max(signed, float(np.max(gap)))
        worst = max(worst, float(np.max(np.clip(gap, 0.0, None))))
    dev = {"max_abs": worst, "signed_max": signed}
    return _report(3, pair.label, float(a0), float(b0), n, seed, dev,
                   threshold)


def probe_rrs_sufficiency(d: int, alpha: float, beta: float, n: int,
                          threshold: float, seed: int = 0) -> ProbeReport:
    """Conjecture: real states with the index symmetry psi_j = psi_{d-j}
    suffice to trace the cyclic-Fourier frontier.

    The rrs frontier combines rrs samples with rrs-restricted constrained
    minimization; the general frontier is Haar samples united with the rrs
    sample so the subset direction holds exactly.
    """
    if d > 16:
        raise TooLarge("rrs probe is limited to d <= 16")
    alpha = check_order(alpha)
    beta = check_order(beta)
    pair = fourier_cyclic(d)
    rng = SeededRng(seed)
    rrs_pts = sample_diagram(pair, alpha, beta, n, "rrs",
                             rng.substream(0)).points
    opts = MinimizeOptions(restrict="rrs", restarts=8, seed=seed + 11)
    wit = frontier_witnesses(pair, alpha, beta, n_sweep=7, opts=opts)
    wpts = entropy_pairs_rows(pair.matrix, wit, alpha, beta)
    haar_pts = sample_diagram(pair, alpha, beta, n, "haar",
                              rng.substream(1)).points
    A = pareto_lower(np.vstack([rrs_pts, wpts]))
    B = pareto_lower(np.vstack([haar_pts, rrs_pts, wpts]))
    dev = frontier_deviation(A, B)
    assert dev["signed_max"] >= -1e-9
    return _report(4, pair.label, alpha, beta, n, seed, dev, threshold)

"""Diagram sampling, Pareto lower-boundary extraction, constrained
minimization of one entropy given the other, the exact qubit curve, the
Englert family, and the Fourier extremality residual."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import (EntropyPoint, _renyi_gradient_raw, born_rows,
                      check_order, entropy_pairs_rows, is_dual_pair,
                      renyi_rows)
from .equality import find_equality_supports, mu_deficit, overlap_data
from .errors import (BadDimension, BoundaryDistribution, EmptyInput,
                     Infeasible, NoOverlap, NotDualPair, SearchFailed,
                     UnsupportedOrder)
from .numerics import MixedEnsemble, SeededRng, sample_states
from .observables import ObservablePair, fourier_cyclic


@dataclass(frozen=True)
class DiagramSample:
    points: np.ndarray  # (n, 2) array of (hx, hy)
    meta: dict


@dataclass(frozen=True)
class FrontierCurve:
    """Pareto-minimal points sorted by hx ascending (hy descending)."""

    points: np.ndarray  # (m, 2)
    witnesses: tuple | None = None  # optional states, aligned with points


def equality_witness_states(pair: ObservablePair) -> np.ndarray:
    """Witness states of all equality supports (empty when none exist)."""
    d = pair.dim
    if d > 12 or not overlap_data(pair).inv_c2_is_integer:
        return np.zeros((0, d), dtype=complex)
    scan = find_equality_supports(pair)
    if not scan.pairs:
        return np.zeros((0, d), dtype=complex)
    return np.array([sp.witness for sp in scan.pairs])


def sample_diagram(pair: ObservablePair, alpha: float, beta: float, n: int,
                   strategy: str, rng: SeededRng, t: float | None = None,
                   include_equality: bool = True) -> DiagramSample:
    """Entropy points of n sampled pure states (plus, by default, the
    exactly known equality states so diagram corners are exact)."""
    alpha = check_order(alpha)
    beta = check_order(beta)
    W = pair.matrix
    states = sample_states(pair.dim, n, strategy, rng, t=t)
    if include_equality:
        extra = equality_witness_states(pair)
        if len(extra):
            states = np.vstack([states, extra])
    points = entropy_pairs_rows(W, states, alpha, beta)
    meta = {"unitary": pair.label, "alpha": alpha, "beta": beta,
            "strategy": strategy, "n": n, "seed": rng.seed,
            "stream": rng.stream}
    return DiagramSample(points=points, meta=meta)


def pareto_lower(points: np.ndarray,
                 witnesses=None) -> FrontierCurve:
    """Non-dominated (coordinatewise-minimal) staircase of a point cloud."""
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        raise EmptyInput("no points to extract a frontier from")
    order = np.lexsort((points[:, 1], points[:, 0]))
    keep_idx = []
    best_hy = math.inf
    for i in order:
        hy = points[i, 1]
        if hy < best_hy:
            keep_idx.append(i)
            best_hy = hy
    kept = points[keep_idx]
    wit = None
    if witnesses is not None:
        witnesses = np.asarray(witnesses)
        wit = tuple(witnesses[i] for i in keep_idx)
    return FrontierCurve(points=kept, witnesses=wit)


def frontier_value(curve: FrontierCurve, x: np.ndarray) -> np.ndarray:
    """Staircase evaluation gamma(x) = min{hy : hx <= x}."""
    pts = curve.points
    idx = np.searchsorted(pts[:, 0], x, side="right") - 1
    out = np.where(idx >= 0, pts[np.clip(idx, 0, None), 1], np.nan)
    return out


def frontier_deviation(A: FrontierCurve, B: FrontierCurve,
                       grid_n: int = 200) -> dict:
    """Max |gamma_A - gamma_B| and max (gamma_A - gamma_B) on a shared grid
    over the overlap of the two hx ranges."""
    if A.points.size == 0 or B.points.size == 0:
        raise EmptyInput("frontier curves must be nonempty")
    lo = max(A.points[0, 0], B.points[0, 0])
    hi = min(A.points[-1, 0], B.points[-1, 0])
    if hi < lo:
        raise NoOverlap("frontier hx ranges do not overlap")
    grid = np.linspace(lo, hi, grid_n)
    diff = frontier_value(A, grid) - frontier_value(B, grid)
    return {"max_abs": float(np.max(np.abs(diff))),
            "signed_max": float(np.max(diff))}


# --- constrained minimization -------------------------------------------------

@dataclass
class MinimizeOptions:
    tol: float = 1e-4
    ctol: float = 1e-3
    restarts: int = 32
    max_iter: int = 150
    kappas: tuple = (10.0, 100.0, 1000.0, 10000.0)
    grad_tol: float = 1e-9
    seed: int = 20240901
    restrict: str | None = None  # None | 'real' | 'rrs'
    cross_check_n: int = 20000


def _restrict_state(psi: np.ndarray, restrict: str | None) -> np.ndarray:
    if restrict is None:
        return psi
    v = psi.real.copy()
    if restrict == "rrs":
        d = len(v)
        mirror = (-np.arange(d)) % d
        v = (v + v[mirror]) / 2.0
    nrm = np.linalg.norm(v)
    if nrm < 1e-12:
        v = np.zeros_like(v)
        v[0] = 1.0
        nrm = 1.0
    return (v / nrm).astype(complex)


def _objective_and_grad(W, psi, alpha, beta, delta, kappa):
    pX = np.abs(psi) ** 2
    phi = W @ psi
    pY = np.abs(phi) ** 2
    hx = float(renyi_rows(pX[None, :], alpha)[0])
    hy = float(renyi_rows(pY[None, :], beta)[0])
    f = hx + kappa * (hy - delta) ** 2
    gX = _renyi_gradient_raw(pX, alpha)
    gY = _renyi_gradient_raw(pY, beta)
    G = gX * psi + 2.0 * kappa * (hy - delta) * (W.conj().T @ (gY * phi))
    return f, G, hx, hy


def _descend(W, psi, alpha, beta, delta, kappa, opts):
    step = 0.5
    for _ in range(opts.max_iter):
        f, G, hx, hy = _objective_and_grad(W, psi, alpha, beta, delta, kappa)
        G = G - np.real(np.vdot(psi, G)) * psi
        if opts.restrict is not None:
            G = G.real.astype(complex)
            if opts.restrict == "rrs":
                mirror = (-np.arange(len(psi))) % len(psi)
                G = (G + G[mirror]) / 2.0
        gnorm = np.linalg.norm(G)
        if gnorm <= opts.grad_tol:
            break
        # warm-start the line search from twice the last accepted step
        step = min(2.0 * step, 4.0) / max(gnorm, 1.0)
        improved = False
        for _ in range(25):
            cand = psi - step * G
            cand = cand / np.linalg.norm(cand)
            fc, _, _, _ = _objective_and_grad(W, cand, alpha, beta, delta,
                                              kappa)
            if fc < f - 1e-12:
                psi = cand
                improved = True
                break
            step *= 0.5
        step *= gnorm
        if not improved:
            break
    f, G, hx, hy = _objective_and_grad(W, psi, alpha, beta, delta, kappa)
    return psi, hx, hy


def min_halpha_given_hbeta(pair: ObservablePair, alpha: float, beta: float,
                           delta: float, opts: MinimizeOptions | None = None,
                           extra_starts=None):
    """Constrained minimum of H_alpha(pX) over pure states with
    H_beta(pY) = delta, by penalty continuation and multi-start descent.

    Returns (value in bits, witness state).  Raises Infeasible when no
    restart meets the constraint tolerance.  extra_starts seeds additional
    descents (e.g. the witness of a neighbouring constraint value when
    sweeping).
    """
    alpha = check_order(alpha)
    beta = check_order(beta)
    if not is_dual_pair(alpha, beta):
        raise NotDualPair(f"({alpha}, {beta}) violates 1/a + 1/b = 2")
    if alpha == math.inf or beta == math.inf:
        raise UnsupportedOrder("penalty descent needs finite orders")
    W = pair.matrix
    d = pair.dim
    if not 0.0 <= delta <= math.log2(d) + 1e-9:
        raise Infeasible(f"target entropy {delta} outside [0, log2 d]")
    opts = opts or MinimizeOptions()

    starts = []
    if extra_starts is not None:
        starts.extend(np.asarray(s, dtype=complex) for s in extra_starts)
    # deterministic structural seeds: x-basis, y-basis, uniform, equality
    for k in range(d):
        e = np.zeros(d, dtype=complex)
        e[k] = 1.0
        starts.append(e)
        starts.append(np.conj(W[k, :]))
    starts.append(np.ones(d, dtype=complex) / math.sqrt(d))
    for wstate in equality_witness_states(pair):
        starts.append(wstate)
    # sampled cross-check seeds near the constraint
    rng = SeededRng(opts.seed, 1)
    strategy = "rrs" if opts.restrict == "rrs" else (
        "real" if opts.restrict == "real" else "haar")
    pool = sample_states(d, opts.cross_check_n, strategy, rng)
    pts = entropy_pairs_rows(W, pool, alpha, beta)
    near = np.nonzero(np.abs(pts[:, 1] - delta) <= max(opts.ctol, 0.02))[0]
    if len(near):
        best_near = near[np.argsort(pts[near, 0])[:8]]
        starts.extend(pool[i] for i in best_near)
    # random restarts over the sampling strategies
    per = max(opts.restarts // 4, 1)
    for i, strat in enumerate(("haar", "real", "rrs", "basis_mix")):
        if opts.restrict is not None:
            strat = strategy
        starts.extend(sample_states(d, per, strat, SeededRng(opts.seed, 2 + i)))

    best_val = math.inf
    best_state = None
    for psi in starts:
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        psi = _restrict_state(psi, opts.restrict) if opts.restrict else psi
        for kappa in opts.kappas:
            psi, hx, hy = _descend(W, psi, alpha, beta, delta, kappa, opts)
        if abs(hy - delta) <= opts.ctol and hx < best_val:
            best_val = hx
            best_state = psi
    if best_state is None:
        raise Infeasible(f"no restart met |H_beta - {delta}| <= {opts.ctol}")
    return best_val, best_state


def frontier_witnesses(pair: ObservablePair, alpha: float, beta: float,
                       n_sweep: int = 64,
                       opts: MinimizeOptions | None = None) -> np.ndarray:
    """Optimal witness states from a min_halpha_given_hbeta sweep over
    n_sweep evenly spaced interior constraint values.

    Two continuation passes (low-to-high and high-to-low delta, each
    seeding the next descent with the previous witness) guard against a
    single pass locking onto a suboptimal branch; the better witness wins
    at each grid point.
    """
    deltas = np.linspace(0.0, math.log2(pair.dim), n_sweep + 2)[1:-1]

    def sweep(order, seeds):
        vals = {}
        wits = {}
        prev = None
        for i in order:
            extra = [] if prev is None else [prev]
            if seeds is not None:
                extra.append(seeds[i])
            v, psi = min_halpha_given_hbeta(pair, alpha, beta,
                                            float(deltas[i]), opts,
                                            extra_starts=extra or None)
            vals[i], wits[i] = v, psi
            prev = psi
        return vals, wits

    idx = list(range(len(deltas)))
    v1, w1 = sweep(idx, None)
    v2, w2 = sweep(idx[::-1], w1)
    return np.array([w1[i] if v1[i] <= v2[i] else w2[i] for i in idx])


# --- exact qubit curve ---------------------------------------------------------

def reduce_2x2_to_rotation(pair: ObservablePair) -> float:
    """Rotation angle phi = arccos|W_00| of the equivalent real rotation."""
    if pair.dim != 2:
        raise BadDimension("rotation reduction needs d = 2")
    return float(np.arccos(min(abs(pair.matrix[0, 0]), 1.0)))


def rotation_pair(phi: float) -> ObservablePair:
    c, s = math.cos(phi), math.sin(phi)
    return ObservablePair(np.array([[c, s], [-s, c]], dtype=complex),
                          f"rotation:{phi:.6f}")


def _qubit_xi_range(phi: float) -> tuple[float, float]:
    if math.pi / 4 <= phi < 3 * math.pi / 4:
        return 0.0, phi
    return phi, math.pi / 2


def d2_exact_curve(pair: ObservablePair, alpha: float, beta: float,
                   m: int = 512) -> FrontierCurve:
    """Analytic minimal-entropy curve of a 2x2 unitary via the real
    rotation reduction and the one-parameter real-state sweep.

    The states (cos xi, -sin xi) give pX = cos^2 xi and, through the
    analysis matrix of rotation_pair(phi), pY = cos^2(xi + phi); the xi
    window is (0, phi) when phi is in [pi/4, 3pi/4) and (phi, pi/2)
    otherwise.
    """
    if pair.dim != 2:
        raise BadDimension("exact curve is for d = 2 only")
    alpha = check_order(alpha)
    beta = check_order(beta)
    phi = reduce_2x2_to_rotation(pair)
    lo, hi = _qubit_xi_range(phi)
    xi = np.linspace(lo, hi, m)
    states = np.column_stack([np.cos(xi), -np.sin(xi)]).astype(complex)
    R = rotation_pair(phi)
    points = entropy_pairs_rows(R.matrix, states, alpha, beta)
    return pareto_lower(points, witnesses=states)


# --- Englert family ------------------------------------------------------------

def englert_states(d: int, p1: np.ndarray) -> np.ndarray:
    """States (sqrt(p2), ..., sqrt(p2), sqrt(p1)) with p1 + (d-1) p2 = 1."""
    p2 = (1.0 - p1) / (d - 1)
    psi = np.empty((len(p1), d))
    psi[:, :-1] = np.sqrt(p2)[:, None]
    psi[:, -1] = np.sqrt(p1)
    return psi.astype(complex)


def englert_curve(d: int, alpha: float, beta: float,
                  m: int = 512) -> tuple[FrontierCurve, int]:
    """Entropy curve of the Englert family through fourier_cyclic(d) and
    the number of distinct MU-equality points it reaches."""
    if d < 2:
        raise BadDimension("dimension must be at least 2")
    if m < 100:
        raise BadDimension("sweep needs at least 100 points")
    pair = fourier_cyclic(d)
    # include p1 = 1/d (uniform state) exactly so equality hits are not
    # missed between grid nodes
    p1 = np.union1d(np.linspace(0.0, 1.0, m), [0.0, 1.0 / d, 1.0])
    states = englert_states(d, p1)
    points = entropy_pairs_rows(pair.matrix, states, alpha, beta)
    bound = overlap_data(pair).mu_bound_bits
    sums = points[:, 0] + points[:, 1]
    eq_points = points[sums - bound <= 1e-6]
    merged: list[np.ndarray] = []
    for pt in eq_points:
        if all(max(abs(pt[0] - q[0]), abs(pt[1] - q[1])) > 1e-4
               for q in merged):
            merged.append(pt)
    curve = pareto_lower(points, witnesses=states)
    return curve, len(merged)


# --- Fourier extremality criterion ---------------------------------------------

def extremality_residual(psi, alpha: float) -> tuple[np.ndarray, float]:
    """Phase-stationarity residual for the cyclic Fourier setting.

    r_k = Im(psi_k * sum_j dH_alpha/d|psihat_j|^2 * conj(psihat_j)
    * exp(2 pi i jk / d)); vanishes for every optimal state.  Requires the
    Fourier-transformed distribution to be strictly positive.
    """
    psi = np.asarray(psi, dtype=complex)
    alpha = check_order(alpha)
    if alpha == math.inf:
        raise UnsupportedOrder("residual undefined at alpha = inf")
    d = len(psi)
    F = fourier_cyclic(d).matrix
    psihat = F @ psi
    p = np.abs(psihat) ** 2
    if np.min(p) <= 1e-12:
        raise BoundaryDistribution("transformed distribution touches zero")
    g = _renyi_gradient_raw(p, alpha)
    kernel = np.exp(2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d)
    inner = kernel.T @ (g * np.conj(psihat))  # index k
    r = np.imag(psi * inner)
    return r, float(np.max(np.abs(r)))


def phase_gradient_fd(psi, alpha: float, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of H_alpha(|F psi(theta)|^2) in the
    phase parameters theta_k; the analytic residual equals
    -(d*sqrt(d)/(4 pi)) times this gradient."""
    psi = np.asarray(psi, dtype=complex)
    d = len(psi)
    F = fourier_cyclic(d).matrix

    def H(theta):
        phased = psi * np.exp(2j * np.pi * theta / d)
        p = np.abs(F @ phased) ** 2
        return float(renyi_rows(p[None, :], alpha)[0])

    grad = np.zeros(d)
    for k in range(d):
        theta = np.zeros(d)
        theta[k] = h
        hp = H(theta)
        theta[k] = -h
        hm = H(theta)
        grad[k] = (hp - hm) / (2.0 * h)
    return grad


# --- pure-state domination ------------------------------------------------------

def dominating_pure(pair: ObservablePair, alpha: float, beta: float,
                    rho: MixedEnsemble, n_candidates: int = 5000,
                    seed: int = 7, slack: float = 1e-6) -> np.ndarray:
    """A pure state whose entropy pair coordinatewise dominates (is <=)
    that of the ensemble, within slack.  Existence is guaranteed; failure
    of the search budget raises SearchFailed, never a disproof."""
    W = pair.matrix
    d = pair.dim
    pX = np.einsum("k,ki->i", rho.weights, np.abs(rho.states) ** 2)
    pY = np.einsum("k,ki->i", rho.weights, np.abs(rho.states @ W.T) ** 2)
    t1 = float(renyi_rows(pX[None, :], alpha)[0])
    t2 = float(renyi_rows(pY[None, :], beta)[0])

    candidates = [rho.states]
    for i, strat in enumerate(("haar", "real", "rrs", "basis_mix")):
        candidates.append(sample_states(d, n_candidates // 4, strat,
                                        SeededRng(seed, i)))
    states = np.vstack(candidates)
    pts = entropy_pairs_rows(W, states, alpha, beta)
    excess = np.maximum(pts[:, 0] - t1, pts[:, 1] - t2)
    best = int(np.argmin(excess))
    if excess[best] <= slack:
        return states[best]

    # local polish on the max-excess objective from the best candidates
    if alpha != math.inf and beta != math.inf:
        for idx in np.argsort(excess)[:8]:
            psi = states[idx]
            for _ in range(300):
                pXs = np.abs(psi) ** 2
                phi = W @ psi
                pYs = np.abs(phi) ** 2
                h1 = float(renyi_rows(pXs[None, :], alpha)[0]) - t1
                h2 = float(renyi_rows(pYs[None, :], beta)[0]) - t2
                if max(h1, h2) <= slack:
                    return psi
                if h1 >= h2 - 1e-9 and h2 >= h1 - 1e-9:
                    w1 = w2 = 0.5
                elif h1 > h2:
                    w1, w2 = 1.0, 0.0
                else:
                    w1, w2 = 0.0, 1.0
                G = (w1 * _renyi_gradient_raw(pXs, alpha) * psi
                     + w2 * (W.conj().T @ (_renyi_gradient_raw(pYs, beta)
                                           * phi)))
                G = G - np.real(np.vdot(psi, G)) * psi
                gn = np.linalg.norm(G)
                if gn < 1e-12:
                    break
                step = 0.2 / max(gn, 1.0)
                moved = False
                for _ in range(30):
                    cand = psi - step * G
                    cand /= np.linalg.norm(cand)
                    pc = entropy_pairs_rows(W, cand[None, :], alpha, beta)[0]
                    if max(pc[0] - t1, pc[1] - t2) < max(h1, h2) - 1e-12:
                        psi = cand
                        moved = True
                        break
                    step *= 0.5
                if not moved:
                    break
            pc = entropy_pairs_rows(W, psi[None, :], alpha, beta)[0]
            if max(pc[0] - t1, pc[1] - t2) <= slack:
                return psi
    raise SearchFailed("restart budget exhausted without a dominating "
                       "pure state (not a disproof)")

"""Frontier extraction, constrained minimization, exact curves, residuals."""

import math

import numpy as np
import pytest

from entrodiag import (MinimizeOptions, MixedEnsemble, SeededRng,
                       d2_exact_curve, dominating_pure, englert_curve,
                       englert_states, entropy_pairs_rows, extremality_residual,
                       fourier_cyclic, frontier_deviation, frontier_value,
                       min_halpha_given_hbeta, mu_deficit, overlap_data,
                       pareto_lower, phase_gradient_fd, random_unitary,
                       reduce_2x2_to_rotation, rotation_pair, sample_diagram,
                       sample_states)
from entrodiag.errors import (BadDimension, BoundaryDistribution, EmptyInput,
                              Infeasible, NoOverlap, NotDualPair,
                              UnsupportedOrder)

QUICK_OPTS = MinimizeOptions(restarts=8, cross_check_n=4000)


def test_pareto_lower_basics():
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.7, 0.7]])
    curve = pareto_lower(pts)
    assert curve.points.shape == (3, 2)
    assert np.allclose(curve.points,
                       [[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
    # anti-chain input is fully retained
    chain = np.array([[x, 1.0 - x] for x in np.linspace(0, 1, 11)])
    assert pareto_lower(chain).points.shape == (11, 2)
    single = pareto_lower(np.array([[0.3, 0.4]]))
    assert np.allclose(single.points, [[0.3, 0.4]])
    with pytest.raises(EmptyInput):
        pareto_lower(np.empty((0, 2)))


def test_pareto_lower_keeps_witnesses():
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [0.7, 0.7]])
    wit = np.array([10, 20, 30])
    curve = pareto_lower(pts, witnesses=wit)
    assert curve.witnesses == (20, 30, 10)


def test_frontier_value_staircase():
    curve = pareto_lower(np.array([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]]))
    x = np.array([-0.1, 0.0, 0.25, 0.5, 0.75, 2.0])
    vals = frontier_value(curve, x)
    assert math.isnan(vals[0])
    assert np.allclose(vals[1:], [1.0, 1.0, 0.5, 0.5, 0.0])


def test_frontier_deviation():
    A = pareto_lower(np.array([[0.0, 1.0], [1.0, 0.0]]))
    B = pareto_lower(np.array([[0.0, 1.1], [1.0, 0.1]]))
    assert frontier_deviation(A, A)["max_abs"] == 0.0
    dev = frontier_deviation(A, B)
    assert dev["max_abs"] == pytest.approx(0.1, abs=1e-12)
    assert dev["signed_max"] == pytest.approx(-0.1, abs=1e-12)
    C = pareto_lower(np.array([[5.0, 1.0]]))
    with pytest.raises(NoOverlap):
        frontier_deviation(A, C)


def test_sample_diagram_meta_and_bound():
    pair = fourier_cyclic(3)
    sample = sample_diagram(pair, 1.0, 1.0, 500, "haar", SeededRng(3),
                            include_equality=False)
    assert sample.points.shape == (500, 2)
    assert sample.meta["unitary"] == "fourier:3"
    bound = overlap_data(pair).mu_bound_bits
    assert np.min(sample.points.sum(axis=1)) >= bound - 1e-9
    # equality injection adds the exactly known corner states
    withx = sample_diagram(pair, 1.0, 1.0, 500, "haar", SeededRng(3))
    assert withx.points.shape[0] > 500
    assert np.min(withx.points.sum(axis=1)) == pytest.approx(bound, abs=1e-9)


def test_min_halpha_trivial_and_errors():
    pair = fourier_cyclic(2)
    val, psi = min_halpha_given_hbeta(pair, 1.0, 1.0, 0.0, QUICK_OPTS)
    assert val == pytest.approx(1.0, abs=1e-4)
    assert abs(np.linalg.norm(psi) - 1.0) <= 1e-9
    with pytest.raises(NotDualPair):
        min_halpha_given_hbeta(pair, 2.0, 2.0, 0.5)
    with pytest.raises(UnsupportedOrder):
        min_halpha_given_hbeta(pair, 0.5, math.inf, 0.5)
    with pytest.raises(Infeasible):
        min_halpha_given_hbeta(pair, 1.0, 1.0, 5.0)


def test_min_halpha_matches_exact_qubit_point():
    pair = fourier_cyclic(2)
    # symmetric point of the exact qubit curve at xi = pi/8
    target = 0.600876
    val, _ = min_halpha_given_hbeta(pair, 1.0, 1.0, target, QUICK_OPTS)
    assert val == pytest.approx(target, abs=1e-3)
    val4, _ = min_halpha_given_hbeta(fourier_cyclic(4), 1.0, 1.0, 1.0,
                                     QUICK_OPTS)
    assert val4 == pytest.approx(1.0, abs=1e-3)


def test_rotation_reduction():
    assert reduce_2x2_to_rotation(fourier_cyclic(2)) == pytest.approx(
        math.pi / 4, abs=1e-12)
    for phi in (0.3, math.pi / 4, 1.2):
        assert reduce_2x2_to_rotation(rotation_pair(phi)) == pytest.approx(
            phi, abs=1e-12)
    with pytest.raises(BadDimension):
        reduce_2x2_to_rotation(fourier_cyclic(3))


def test_d2_exact_curve_f2():
    curve = d2_exact_curve(fourier_cyclic(2), 1.0, 1.0, m=4096)
    pts = curve.points
    assert pts[0] == pytest.approx([0.0, 1.0], abs=1e-9)
    assert pts[-1] == pytest.approx([1.0, 0.0], abs=1e-9)
    assert np.all(np.diff(pts[:, 1]) < 0)
    # the xi = pi/8 state sits on the symmetric point of the curve
    y = np.interp(0.600876, pts[:, 0], pts[:, 1])
    assert y == pytest.approx(0.600876, abs=1e-5)
    with pytest.raises(BadDimension):
        d2_exact_curve(fourier_cyclic(3), 1.0, 1.0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_d2_curve_never_above_samples(seed):
    pair = random_unitary(2, SeededRng(500 + seed))
    phi = reduce_2x2_to_rotation(pair)
    R = rotation_pair(phi)
    exact = d2_exact_curve(R, 1.0, 1.0, m=4096)
    pts = sample_diagram(R, 1.0, 1.0, 20_000, "haar", SeededRng(seed),
                         include_equality=False).points
    # the next curve node to the right is a rigorous lower bound for the
    # true curve, so no sample may dip below it
    cx, cy = exact.points[:, 0], exact.points[:, 1]
    idx = np.searchsorted(cx, pts[:, 0], side="left")
    inside = idx < len(cx)
    assert np.min(pts[inside, 1] - cy[idx[inside]]) >= -1e-9


def test_d2_curve_at_other_orders():
    curve = d2_exact_curve(fourier_cyclic(2), 2.0, 2.0 / 3.0, m=2048)
    pts = curve.points
    assert pts[0][0] == pytest.approx(0.0, abs=1e-9)
    assert np.all(np.diff(pts[:, 1]) < 0)


def test_englert_states_and_curve():
    p1 = np.linspace(0.0, 1.0, 7)
    states = englert_states(4, p1)
    assert states.shape == (7, 4)
    assert np.allclose(np.linalg.norm(states, axis=1), 1.0, atol=1e-12)
    curve, n_eq = englert_curve(4, 1.0, 1.0)
    assert n_eq == 2
    assert curve.points[0] == pytest.approx([0.0, 2.0], abs=1e-9)
    with pytest.raises(BadDimension):
        englert_curve(1, 1.0, 1.0)
    with pytest.raises(BadDimension):
        englert_curve(4, 1.0, 1.0, m=10)


def test_englert_d2_matches_exact_curve():
    eng, _ = englert_curve(2, 1.0, 1.0, m=4096)
    exact = d2_exact_curve(fourier_cyclic(2), 1.0, 1.0, m=4096)
    grid = np.linspace(0.05, 0.95, 200)
    a = np.interp(grid, eng.points[:, 0], eng.points[:, 1])
    b = np.interp(grid, exact.points[:, 0], exact.points[:, 1])
    assert np.max(np.abs(a - b)) <= 1e-6


def test_englert_d3_close_to_sampled_frontier():
    pair = fourier_cyclic(3)
    eng, _ = englert_curve(3, 1.0, 1.0, m=2048)
    pts = np.vstack([
        sample_diagram(pair, 1.0, 1.0, 1_000_000, "haar", SeededRng(71)).points,
        sample_diagram(pair, 1.0, 1.0, 1_000_000, "rrs", SeededRng(72)).points])
    dev = frontier_deviation(eng, pareto_lower(pts))
    assert dev["max_abs"] <= 3e-3


def test_extremality_residual_vanishes_on_rrs():
    for d in (3, 5):
        states = sample_states(d, 50, "rrs", SeededRng(81, d))
        for psi in states:
            try:
                _, max_abs = extremality_residual(psi, 1.0)
            except BoundaryDistribution:
                continue
            assert max_abs <= 1e-8


def test_extremality_residual_matches_phase_gradient():
    for case in range(10):
        d = 3 + case % 4
        psi = sample_states(d, 1, "haar", SeededRng(83, case))[0]
        r, _ = extremality_residual(psi, 1.3)
        fd = phase_gradient_fd(psi, 1.3)
        analytic = -(d * math.sqrt(d) / (4.0 * math.pi)) * fd
        scale = max(np.max(np.abs(r)), 1e-12)
        assert np.max(np.abs(r - analytic)) / scale <= 1e-5
    with pytest.raises(UnsupportedOrder):
        extremality_residual(np.ones(3) / math.sqrt(3), math.inf)


def test_frontier_witnesses_obey_bound():
    from entrodiag import frontier_witnesses
    pair = fourier_cyclic(3)
    wits = frontier_witnesses(pair, 1.0, 1.0, n_sweep=5, opts=QUICK_OPTS)
    assert wits.shape == (5, 3)
    for psi in wits:
        assert mu_deficit(pair, psi, 1.0, 1.0) >= -1e-9


def test_dominating_pure():
    pair = fourier_cyclic(2)
    mm = MixedEnsemble(np.array([0.5, 0.5]), np.eye(2, dtype=complex))
    sigma = dominating_pure(pair, 1.0, 1.0, mm)
    pt = entropy_pairs_rows(pair.matrix, sigma[None, :], 1.0, 1.0)[0]
    # the maximally mixed target has hx = hy = 1
    assert pt[0] <= 1.0 + 1e-6 and pt[1] <= 1.0 + 1e-6
    psi = sample_states(3, 1, "haar", SeededRng(90))[0]
    pure = MixedEnsemble(np.array([1.0]), psi[None, :])
    sigma = dominating_pure(fourier_cyclic(3), 1.0, 1.0, pure)
    target = entropy_pairs_rows(fourier_cyclic(3).matrix, psi[None, :],
                                1.0, 1.0)[0]
    got = entropy_pairs_rows(fourier_cyclic(3).matrix, sigma[None, :],
                             1.0, 1.0)[0]
    assert got[0] <= target[0] + 1e-6 and got[1] <= target[1] + 1e-6

"""Observable constructors, abelian group machinery, file round trips."""

import math

import numpy as np
import pytest

from entrodiag import (AbelianGroup, ObservablePair, SeededRng, annihilator,
                       bicharacter, builtin, coset_representatives, dephase,
                       fourier_cyclic, fourier_group, indicator_state,
                       is_hadamard, is_unitary, load_unitary, random_unitary,
                       save_unitary, subgroups, translate_modulate)
from entrodiag.errors import (BadDimension, BadElement, BadUnitary,
                              NotSubgroup, UnknownName, ZeroEntry)


def test_fourier_cyclic_entries():
    for d in (2, 3, 5, 8):
        pair = fourier_cyclic(d)
        assert is_unitary(pair.matrix)
        assert is_hadamard(pair)
        j, k = 1, d - 1
        expect = np.exp(2j * np.pi * j * k / d) / math.sqrt(d)
        assert pair.matrix[j, k] == pytest.approx(expect, abs=1e-12)
    with pytest.raises(BadDimension):
        fourier_cyclic(1)


def test_observable_pair_rejects_non_unitary():
    with pytest.raises(BadUnitary):
        ObservablePair(np.ones((2, 2)))
    with pytest.raises(BadUnitary):
        ObservablePair(np.ones((2, 3)))


def test_builtin_matrices():
    ex3 = builtin("example3")
    assert ex3.dim == 3
    assert np.max(np.abs(ex3.matrix)) == pytest.approx(1 / math.sqrt(2),
                                                       abs=1e-12)
    c6 = builtin("c6")
    assert c6.dim == 6
    assert is_hadamard(c6)
    with pytest.raises(UnknownName):
        builtin("example4")


def test_dephase():
    pair = dephase(random_unitary(4, SeededRng(2)))
    W = pair.matrix
    assert np.max(np.abs(W[0, :].imag)) <= 1e-12
    assert np.min(W[0, :].real) >= -1e-12
    assert np.max(np.abs(W[:, 0].imag)) <= 1e-12
    # moduli are untouched
    orig = random_unitary(4, SeededRng(2))
    assert np.allclose(np.abs(W), np.abs(orig.matrix), atol=1e-12)
    with pytest.raises(ZeroEntry):
        dephase(ObservablePair(np.eye(2, dtype=complex)))


def test_group_arithmetic():
    G = AbelianGroup((2, 3))
    assert G.order == 6
    assert G.identity == (0, 0)
    assert G.add((1, 2), (1, 2)) == (0, 1)
    assert G.neg((1, 1)) == (1, 2)
    elems = G.elements()
    assert len(elems) == 6
    assert all(G.index(e) == i for i, e in enumerate(elems))
    with pytest.raises(BadElement):
        G.check_element((2, 0))
    with pytest.raises(BadDimension):
        AbelianGroup((1,))


def test_bicharacter_and_group_fourier():
    G = AbelianGroup((4,))
    assert bicharacter(G, (1,), (1,)) == pytest.approx(1j, abs=1e-12)
    assert bicharacter(G, (2,), (2,)) == pytest.approx(1.0, abs=1e-12)
    # cyclic group Fourier coincides with fourier_cyclic
    assert np.allclose(fourier_group(G).matrix, fourier_cyclic(4).matrix,
                       atol=1e-12)
    # Z2 x Z2 gives a real Hadamard
    W = fourier_group(AbelianGroup((2, 2))).matrix
    assert is_hadamard(W)
    assert np.max(np.abs(W.imag)) <= 1e-12


@pytest.mark.parametrize("orders,count", [
    ((4,), 3), ((6,), 4), ((12,), 6), ((2, 2), 5), ((2, 3), 4)])
def test_subgroup_counts(orders, count):
    G = AbelianGroup(orders)
    subs = subgroups(G)
    assert len(subs) == count
    assert subs[0] == (G.identity,)
    assert len(subs[-1]) == G.order


def test_annihilator_duality():
    for orders in ((6,), (2, 2), (2, 4)):
        G = AbelianGroup(orders)
        for L in subgroups(G):
            Lp = annihilator(G, L)
            assert len(L) * len(Lp) == G.order
            assert annihilator(G, Lp) == L
    with pytest.raises(NotSubgroup):
        annihilator(AbelianGroup((4,)), [(0,), (1,)])


def test_indicator_maps_to_annihilator():
    G = AbelianGroup((6,))
    W = fourier_group(G).matrix
    for L in subgroups(G):
        chi = indicator_state(G, L)
        pY = np.abs(W @ chi) ** 2
        expected = np.abs(indicator_state(G, annihilator(G, L))) ** 2
        assert np.allclose(pY, expected, atol=1e-12)


def test_translate_modulate_orthonormal_family():
    G = AbelianGroup((2, 2))
    L = ((0, 0), (1, 1))
    Lp = annihilator(G, L)
    fam = np.array([translate_modulate(G, L, j, k)
                    for j in coset_representatives(G, L)
                    for k in coset_representatives(G, Lp)])
    assert fam.shape == (4, 4)
    gram = fam @ fam.conj().T
    assert np.max(np.abs(gram - np.eye(4))) <= 1e-12
    assert len(coset_representatives(G, L)) == G.order // len(L)


def test_unitary_file_roundtrip(tmp_path):
    pair = random_unitary(3, SeededRng(17))
    path = str(tmp_path / "u.json")
    save_unitary(path, pair)
    loaded = load_unitary(path)
    assert np.allclose(loaded.matrix, pair.matrix, atol=1e-15)
    assert loaded.label == f"file:{path}"
    # non-unitary content is rejected unless forced
    bad = str(tmp_path / "bad.json")
    with open(bad, "w") as fh:
        fh.write('{"d": 2, "matrix": [[[1,0],[0.1,0]],[[0,0],[1,0]]]}')
    with pytest.raises(BadUnitary):
        load_unitary(bad)
    forced = load_unitary(bad, force=True)
    assert is_unitary(forced.matrix)
    with open(bad, "w") as fh:
        fh.write('{"matrix": "nope"}')
    with pytest.raises(BadUnitary):
        load_unitary(bad)

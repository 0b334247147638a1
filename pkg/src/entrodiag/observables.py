"""Observable pairs (Fourier, Hadamard, built-in examples, random unitaries)
and finite abelian group machinery (bicharacter, subgroups, annihilators).

Convention: an ObservablePair stores the analysis matrix W, defined so that
a state psi expressed in the first basis has second-basis distribution
pY = |W psi|^2.  In terms of the overlap matrix U_ij = <x_i|y_j> this means
W = U^dagger.  Max entry modulus and Hadamard-ness are unaffected by the
transposition, and the Fourier constructors below fix W explicitly.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .errors import (BadDimension, BadElement, BadUnitary, NotSubgroup,
                     UnknownName, ZeroEntry)
from .numerics import MAX_DIM, SeededRng, haar_unitary, is_unitary

Element = tuple[int, ...]
Subgroup = tuple[Element, ...]


@dataclass(frozen=True)
class ObservablePair:
    """A d x d unitary analysis matrix with a human-readable label."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise BadUnitary("analysis matrix must be square")
        if not is_unitary(M):
            raise BadUnitary(f"matrix {self.label!r} is not unitary within 1e-10")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def fourier_cyclic(d: int) -> ObservablePair:
    """Fourier analysis matrix W_jk = exp(2 pi i jk / d) / sqrt(d)."""
    if d < 2 or d > MAX_DIM:
        raise BadDimension(f"dimension must be in [2, {MAX_DIM}]")
    j = np.arange(d)
    W = np.exp(2j * np.pi * np.outer(j, j) / d) / math.sqrt(d)
    return ObservablePair(W, f"fourier:{d}")


@dataclass(frozen=True)
class AbelianGroup:
    """Product of cyclic groups Z_{n_1} x ... x Z_{n_k}."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders or any(n < 2 for n in orders):
            raise BadDimension("all cyclic orders must be >= 2")
        if int(np.prod(orders)) > MAX_DIM:
            raise BadDimension(f"group order exceeds {MAX_DIM}")
        object.__setattr__(self, "orders", orders)

    @property
    def order(self) -> int:
        return int(np.prod(self.orders))

    @property
    def identity(self) -> Element:
        return (0,) * len(self.orders)

    def elements(self) -> list[Element]:
        return list(itertools.product(*(range(n) for n in self.orders)))

    def check_element(self, j: Element) -> Element:
        j = tuple(int(v) for v in j)
        if len(j) != len(self.orders) or any(
                not 0 <= v < n for v, n in zip(j, self.orders)):
            raise BadElement(f"{j} is not an element of Z{self.orders}")
        return j

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def index(self, j: Element) -> int:
        """Mixed-radix encoding, first factor slowest (tensor convention)."""
        idx = 0
        for v, n in zip(j, self.orders):
            idx = idx * n + v
        return idx


def bicharacter(G: AbelianGroup, j: Element, k: Element) -> complex:
    """Canonical pairing exp(2 pi i sum_r j_r k_r / n_r), modulus 1."""
    j = G.check_element(j)
    k = G.check_element(k)
    phase = sum(jr * kr / nr for jr, kr, nr in zip(j, k, G.orders))
    return complex(np.exp(2j * np.pi * phase))


def _pairs_trivially(G: AbelianGroup, j: Element, k: Element) -> bool:
    """Exact integer test for bic(j, k) == 1."""
    m = reduce(math.lcm, G.orders)
    total = sum(jr * kr * (m // nr) for jr, kr, nr in zip(j, k, G.orders))
    return total % m == 0


def fourier_group(G: AbelianGroup) -> ObservablePair:
    """Group Fourier matrix W_jk = bic(j, k) / sqrt(d) in mixed-radix order."""
    d = G.order
    if d < 2:
        raise BadDimension("group must have order >= 2")
    elems = G.elements()
    W = np.empty((d, d), dtype=complex)
    for j in elems:
        for k in elems:
            W[G.index(j), G.index(k)] = bicharacter(G, j, k)
    W /= math.sqrt(d)
    label = "group:" + "x".join(str(n) for n in G.orders)
    return ObservablePair(W, label)


def is_hadamard(W, tol: float = 1e-8) -> bool:
    """True iff all entry moduli equal 1/sqrt(d) within tol."""
    M = W.matrix if isinstance(W, ObservablePair) else np.asarray(W, complex)
    d = M.shape[0]
    return bool(np.max(np.abs(np.abs(M) - 1.0 / math.sqrt(d))) <= tol)


def dephase(pair: ObservablePair) -> ObservablePair:
    """Strip phases so the first row and column are real nonnegative.

    Returns D1 W D2 with diagonal unitaries D1, D2; entry moduli unchanged.
    """
    W = pair.matrix.copy()
    if np.min(np.abs(W[0, :])) < 1e-12 or np.min(np.abs(W[:, 0])) < 1e-12:
        raise ZeroEntry("first row/column contains a (near-)zero entry")
    d2 = np.conj(W[0, :]) / np.abs(W[0, :])
    W = W * d2[None, :]
    d1 = np.conj(W[:, 0]) / np.abs(W[:, 0])
    W = W * d1[:, None]
    return ObservablePair(W, f"dephased({pair.label})")


def _example3_matrix() -> np.ndarray:
    a = 1.0 / math.sqrt(2.0)
    b = 0.5
    # Overlap matrix as published; the stored analysis matrix is its adjoint.
    U = np.array([[a, a, 0.0],
                  [b, -b, a],
                  [-b, b, a]], dtype=complex)
    return U.conj().T


def _c6_matrix() -> np.ndarray:
    eta = (1.0 - math.sqrt(3.0)) / 2.0 + 1j * math.sqrt(math.sqrt(3.0) / 2.0)
    e = eta
    ei = 1.0 / eta
    U = np.array([
        [1, 1, 1, 1, 1, 1],
        [1, -1, -e, -e ** 2, e ** 2, e],
        [1, -ei, 1, e ** 2, -e ** 3, e ** 2],
        [1, -ei ** 2, ei ** 2, -1, e ** 2, -e ** 2],
        [1, ei ** 2, -ei ** 3, ei ** 2, 1, -e],
        [1, ei, ei ** 2, -ei ** 2, -ei, -1],
    ], dtype=complex) / math.sqrt(6.0)
    return U.conj().T


def builtin(name: str) -> ObservablePair:
    """Built-in matrices: 'example3' (1/c^2 = 2 < d = 3) and 'c6' (Hadamard
    of order 6 with no interior equality supports)."""
    if name == "example3":
        return ObservablePair(_example3_matrix(), "example3")
    if name == "c6":
        return ObservablePair(_c6_matrix(), "c6")
    raise UnknownName(f"unknown builtin matrix {name!r}")


def random_unitary(d: int, rng: SeededRng) -> ObservablePair:
    """Random unitary analysis matrix, deterministic per (seed, stream)."""
    W = haar_unitary(d, rng)
    return ObservablePair(W, f"random:{rng.seed}:{d}")


# --- subgroup machinery -------------------------------------------------------

def _closure(G: AbelianGroup, gens: set[Element]) -> Subgroup:
    elems = {G.identity}
    frontier = list(gens)
    elems.update(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                s = G.add(a, g)
                if s not in elems:
                    elems.add(s)
                    nxt.append(s)
        frontier = nxt
    return tuple(sorted(elems))


def is_subgroup(G: AbelianGroup, elems) -> bool:
    s = set(tuple(e) for e in elems)
    if G.identity not in s:
        return False
    for a in s:
        if G.neg(a) not in s:
            return False
        for b in s:
            if G.add(a, b) not in s:
                return False
    return True


def subgroups(G: AbelianGroup) -> list[Subgroup]:
    """All subgroups, each a sorted tuple of elements, sorted by (size, elems)."""
    found = {(G.identity,)}
    grew = True
    while grew:
        grew = False
        for H in list(found):
            base = set(H)
            for g in G.elements():
                if g in base:
                    continue
                K = _closure(G, base | {g})
                if K not in found:
                    found.add(K)
                    grew = True
    return sorted(found, key=lambda H: (len(H), H))


def annihilator(G: AbelianGroup, L) -> Subgroup:
    """L-perp: all k with bic(j, k) = 1 for every j in L."""
    L = tuple(G.check_element(j) for j in L)
    if not is_subgroup(G, L):
        raise NotSubgroup(f"{L} is not a subgroup of Z{G.orders}")
    perp = [k for k in G.elements()
            if all(_pairs_trivially(G, j, k) for j in L)]
    return tuple(sorted(perp))


def indicator_state(G: AbelianGroup, L) -> np.ndarray:
    """l2-normalized indicator vector of a subgroup."""
    L = tuple(G.check_element(j) for j in L)
    if not is_subgroup(G, L):
        raise NotSubgroup(f"{L} is not a subgroup of Z{G.orders}")
    psi = np.zeros(G.order, dtype=complex)
    for j in L:
        psi[G.index(j)] = 1.0
    return psi / math.sqrt(len(L))


def translate_modulate(G: AbelianGroup, L, j: Element, k: Element) -> np.ndarray:
    """chi'(j') = bic(j', k) * chi_L(j' - j), a translated/modulated indicator."""
    L = tuple(G.check_element(e) for e in L)
    if not is_subgroup(G, L):
        raise NotSubgroup(f"{L} is not a subgroup of Z{G.orders}")
    j = G.check_element(j)
    k = G.check_element(k)
    Lset = set(L)
    psi = np.zeros(G.order, dtype=complex)
    negj = G.neg(j)
    for jp in G.elements():
        if G.add(jp, negj) in Lset:
            psi[G.index(jp)] = bicharacter(G, jp, k)
    return psi / math.sqrt(len(L))


def coset_representatives(G: AbelianGroup, L) -> list[Element]:
    """One representative per coset of L, in element enumeration order."""
    Lset = set(tuple(e) for e in L)
    reps: list[Element] = []
    covered: set[Element] = set()
    for g in G.elements():
        if g not in covered:
            reps.append(g)
            for l in Lset:
                covered.add(G.add(g, l))
    return reps


# --- unitary file format -----------------------------------------------------

def matrix_to_json_obj(M: np.ndarray) -> dict:
    d = M.shape[0]
    return {"d": d,
            "matrix": [[[float(M[i, j].real), float(M[i, j].imag)]
                        for j in range(d)] for i in range(d)]}


def save_unitary(path: str, pair: ObservablePair) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json_obj(pair.matrix), fh)
        fh.write("\n")


def load_unitary(path: str, force: bool = False) -> ObservablePair:
    """Parse the JSON unitary file format; rejects non-unitary input
    (defect > 1e-8) unless force is set."""
    with open(path) as fh:
        obj = json.load(fh)
    try:
        d = int(obj["d"])
        rows = obj["matrix"]
        M = np.array([[complex(entry[0], entry[1]) for entry in row]
                      for row in rows], dtype=complex)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise BadUnitary(f"malformed unitary file {path}: {exc}") from exc
    if M.shape != (d, d):
        raise BadUnitary(f"matrix shape {M.shape} does not match d={d}")
    if not force and not is_unitary(M, tol=1e-8):
        raise BadUnitary(f"matrix in {path} is not unitary (defect > 1e-8)")
    if force and not is_unitary(M):
        # keep downstream invariants intact: project onto the unitary group
        q, r = np.linalg.qr(M)
        diag = np.diagonal(r)
        safe = np.where(np.abs(diag) > 0, diag / np.abs(np.where(
            np.abs(diag) > 0, diag, 1)), 1.0)
        M = q * safe
    return ObservablePair(M, f"file:{path}")

"""Irreducible representations of the symmetric group in Young's orthogonal form.

Permutations act on ``1..n``; products compose right to left,
``(pi * sigma)(j) = pi(sigma(j))``.  Matrices are indexed by standard tableaux
in the canonical order of :func:`combforge.young.enumerate_tableaux`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .young import (
    StandardTableau,
    YoungDiagram,
    as_diagram,
    enumerate_partitions,
    enumerate_tableaux,
    num_tableaux,
    tableau_index,
)


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1, ..., n}`` stored as its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, i: int, n: int) -> "Permutation":
        """The adjacent transposition s_i = (i, i+1) in S_n."""
        if not 1 <= i < n:
            raise ValueError(f"s_{i} is not defined in S_{n}")
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise ValueError("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, v in enumerate(self.images, start=1):
            inv[v - 1] = j
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> YoungDiagram:
        return YoungDiagram(tuple(sorted((len(c) for c in self.cycles()), reverse=True)))

    def num_cycles(self) -> int:
        return len(self.cycles())

    def sign(self) -> int:
        return -1 if (self.n - self.num_cycles()) % 2 else 1

    def adjacent_factorization(self) -> list[int]:
        """Indices i_1..i_m with self = s_{i_1} s_{i_2} ... s_{i_m} (bubble sort)."""
        w = list(self.images)
        swaps = []
        for end in range(len(w) - 1, 0, -1):
            for j in range(end):
                if w[j] > w[j + 1]:
                    # swapping positions j, j+1 right-multiplies by s_{j+1}
                    w[j], w[j + 1] = w[j + 1], w[j]
                    swaps.append(j + 1)
        return swaps[::-1]

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def all_permutations(n: int) -> list[Permutation]:
    """S_n in lexicographic order of image lists."""
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def class_representative(cycle_type) -> Permutation:
    """A permutation whose cycles are consecutive runs of the given lengths."""
    cycle_type = as_diagram(cycle_type)
    cycles = []
    start = 1
    for length in cycle_type.rows:
        cycles.append(tuple(range(start, start + length)))
        start += length
    return Permutation.from_cycles(cycle_type.n, *cycles)


def class_size(cycle_type) -> int:
    cycle_type = as_diagram(cycle_type)
    z = 1
    for length in set(cycle_type.rows):
        m = cycle_type.rows.count(length)
        z *= length**m * math.factorial(m)
    return math.factorial(cycle_type.n) // z


def axial_distance(tableau: StandardTableau, i: int) -> int:
    """c(box of i+1) - c(box of i)."""
    if not 1 <= i < tableau.n:
        raise ValueError(f"i must lie in 1..{tableau.n - 1}, got {i}")
    return tableau.content(i + 1) - tableau.content(i)


def transposition_action(shape, i: int) -> np.ndarray:
    """Matrix of s_i on the irrep ``shape`` (read-only, cached)."""
    shape = as_diagram(shape)
    if not 1 <= i < max(shape.n, 1):
        raise ValueError(f"s_{i} is not defined in S_{shape.n}")
    return _transposition_action(shape.rows, i)


@lru_cache(maxsize=None)
def _transposition_action(rows: tuple[int, ...], i: int) -> np.ndarray:
    tabs = enumerate_tableaux(rows)
    index = tableau_index(rows)
    m = np.zeros((len(tabs), len(tabs)))
    for col, t in enumerate(tabs):
        r = axial_distance(t, i)
        m[col, col] = 1.0 / r
        swapped = t.swap(i)
        if swapped is not None:
            m[index[swapped], col] = math.sqrt(1.0 - 1.0 / (r * r))
    m.flags.writeable = False
    return m


def irrep_matrix(shape, pi: Permutation) -> np.ndarray:
    """P_lambda(pi) as an ordered product of transposition matrices."""
    shape = as_diagram(shape)
    if pi.n != shape.n:
        raise ValueError(f"permutation of degree {pi.n} does not act on a shape of size {shape.n}")
    return _irrep_matrix(shape.rows, pi.images)


@lru_cache(maxsize=4096)
def _irrep_matrix(rows: tuple[int, ...], images: tuple[int, ...]) -> np.ndarray:
    m = np.eye(num_tableaux(rows))
    for i in Permutation(images).adjacent_factorization():
        m = m @ _transposition_action(rows, i)
    m.flags.writeable = False
    return m


def character(shape, pi: Permutation) -> float:
    return float(np.trace(irrep_matrix(shape, pi)))


@lru_cache(maxsize=None)
def character_by_class(rows: tuple[int, ...], cycle_type: tuple[int, ...]) -> int:
    """Integer character value on a conjugacy class (traces are rounded)."""
    value = character(YoungDiagram(rows), class_representative(YoungDiagram(cycle_type)))
    rounded = round(value)
    assert abs(value - rounded) < 1e-8
    return int(rounded)


def character_table(n: int) -> tuple[list[YoungDiagram], np.ndarray]:
    """Rows indexed by irreps, columns by cycle types, both in partition order."""
    parts = enumerate_partitions(n)
    table = np.array([[character_by_class(lam.rows, mu.rows) for mu in parts] for lam in parts], dtype=np.int64)
    return parts, table


def _check_rep(rep: Callable[[Permutation], np.ndarray], k: int, tol: float) -> None:
    eye = rep(Permutation.identity(k))
    if np.abs(eye - np.eye(eye.shape[0])).max() > tol:
        raise ValueError("representation does not map the identity to the identity matrix")
    gens = [Permutation.transposition(i, k) for i in range(1, k)]
    if k >= 3:
        gens.append(Permutation.from_cycles(k, tuple(range(1, k + 1))))
    for a, b in itertools.product(gens, repeat=2):
        if np.abs(rep(a) @ rep(b) - rep(a * b)).max() > tol:
            raise ValueError("representation is not a homomorphism on generator pairs")


def isotypic_projector(
    shape,
    rep: Callable[[Permutation], np.ndarray] | Mapping[Permutation, np.ndarray],
    check: bool = True,
    tol: float = 1e-9,
) -> np.ndarray:
    """(dim P_lambda / k!) * sum_pi chi_lambda(pi) rep(pi).

    ``rep`` is a callable or a mapping from :class:`Permutation` to matrices.
    """
    shape = as_diagram(shape)
    k = shape.n
    if isinstance(rep, Mapping):
        table = rep
        rep = lambda p: table[p]  # noqa: E731
    if check:
        _check_rep(rep, k, tol)
    total = None
    for pi in all_permutations(k):
        chi = character_by_class(shape.rows, pi.cycle_type().rows)
        if chi == 0:
            continue
        term = chi * np.asarray(rep(pi))
        total = term if total is None else total + term
    if total is None:
        dim = np.asarray(rep(Permutation.identity(k))).shape[0]
        return np.zeros((dim, dim))
    return total * (num_tableaux(shape) / math.factorial(k))


def restriction_blocks(shape) -> list[tuple[YoungDiagram, np.ndarray]]:
    """Tableau indices of each P_mu block (mu -> shape) inside P_shape.

    Within a block the indices follow the canonical order of Tab(mu), so
    ``P_shape(pi)[np.ix_(idx, idx)] == P_mu(pi)`` for pi fixing n.
    """
    shape = as_diagram(shape)
    groups: dict[tuple[int, ...], list[int]] = {}
    for j, t in enumerate(enumerate_tableaux(shape)):
        groups.setdefault(t.down.shape.rows, []).append(j)
    return [(YoungDiagram(rows), np.asarray(idx)) for rows, idx in groups.items()]


def young_projector_chain(tableau: StandardTableau) -> list[YoungDiagram]:
    return list(tableau.chain)


def embed_permutation(pi: Permutation, n: int) -> Permutation:
    """View pi in S_k as an element of S_n fixing k+1..n."""
    return Permutation(pi.images + tuple(range(pi.n + 1, n + 1)))


def all_shapes_upto(n: int) -> Iterable[YoungDiagram]:
    for m in range(n + 1):
        yield from enumerate_partitions(m)

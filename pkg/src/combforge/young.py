"""Young diagrams, standard tableaux and Kerov interlacing sequences.

Everything here is exact: dimensions are Python integers and every identity
is evaluated with :class:`fractions.Fraction`.

Conventions
-----------
Rows and columns are 0-based and the content of a box is ``col - row``.
For ``(6, 5, 3, 3, 2, 1, 1, 1)`` the box in row 0, column 5 has content 5 and
the box in row 7, column 0 has content -7; these are the two extreme
removable corners of that diagram.

Partitions of ``n`` are listed in reverse-lexicographic order, e.g.
``(4), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)``.  Standard tableaux of a
shape are listed lexicographically by their growth chain, diagrams compared
by their row tuples in decreasing order; equivalently by the row word
``(row of 1, row of 2, ..., row of n)`` in increasing order.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=False)
class Box:
    row: int
    col: int
    hook: int = 0

    @property
    def content(self) -> int:
        return self.col - self.row


@dataclass(frozen=True)
class YoungDiagram:
    """Integer partition stored as a weakly decreasing tuple of row lengths."""

    rows: tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r <= 0 for r in rows):
            raise ValueError(f"row lengths must be positive: {rows}")
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise ValueError(f"row lengths must be weakly decreasing: {rows}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, *rows: int) -> "YoungDiagram":
        if len(rows) == 1 and not isinstance(rows[0], int):
            rows = tuple(rows[0])
        return cls(tuple(rows))

    def __repr__(self) -> str:
        return f"YoungDiagram{self.rows}"

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return sum(self.rows)

    @property
    def length(self) -> int:
        return len(self.rows)

    @cached_property
    def conjugate(self) -> "YoungDiagram":
        if not self.rows:
            return self
        return YoungDiagram(tuple(sum(1 for r in self.rows if r > c) for c in range(self.rows[0])))

    def __contains__(self, cell) -> bool:
        row, col = cell
        return 0 <= row < len(self.rows) and 0 <= col < self.rows[row]

    def hook(self, row: int, col: int) -> int:
        if (row, col) not in self:
            raise ValueError(f"cell ({row}, {col}) is not in {self}")
        return self.rows[row] - col + self.conjugate.rows[col] - row - 1

    def boxes(self) -> list[Box]:
        return [Box(r, c, self.hook(r, c)) for r, length in enumerate(self.rows) for c in range(length)]

    def addable_cells(self) -> list[tuple[int, int]]:
        """Cells that can be added, ordered by increasing row."""
        cells = []
        for r in range(len(self.rows) + 1):
            length = self.rows[r] if r < len(self.rows) else 0
            if r == 0 or self.rows[r - 1] > length:
                cells.append((r, length))
        return cells

    def removable_cells(self) -> list[tuple[int, int]]:
        """Corner boxes that can be removed, ordered by increasing row."""
        cells = []
        for r, length in enumerate(self.rows):
            below = self.rows[r + 1] if r + 1 < len(self.rows) else 0
            if length > below:
                cells.append((r, length - 1))
        return cells

    def add_box(self, row: int) -> "YoungDiagram":
        rows = list(self.rows)
        if row == len(rows):
            rows.append(1)
        else:
            rows[row] += 1
        return YoungDiagram(tuple(rows))

    def remove_box(self, row: int) -> "YoungDiagram":
        rows = list(self.rows)
        rows[row] -= 1
        if rows[row] == 0:
            rows.pop()
        return YoungDiagram(tuple(rows))

    def children(self) -> list["YoungDiagram"]:
        """All lambda with self -> lambda (one box added)."""
        return [self.add_box(r) for r, _ in self.addable_cells()]

    def parents(self) -> list["YoungDiagram"]:
        """All mu with mu -> self (one box removed)."""
        return [self.remove_box(r) for r, _ in self.removable_cells()]

    def to_json(self) -> str:
        return json.dumps(list(self.rows))

    @classmethod
    def from_json(cls, text: str) -> "YoungDiagram":
        return cls(tuple(json.loads(text)))


EMPTY = YoungDiagram(())


def as_diagram(value) -> YoungDiagram:
    if isinstance(value, YoungDiagram):
        return value
    return YoungDiagram(tuple(value))


def enumerate_partitions(n: int, max_rows: int | None = None) -> list[YoungDiagram]:
    """All partitions of ``n`` with at most ``max_rows`` rows, reverse-lex order."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return [YoungDiagram(p) for p in _partitions(n, n, max_rows if max_rows is not None else n)]


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int, rows_left: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    if rows_left == 0:
        return ()
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first, rows_left - 1):
            out.append((first,) + rest)
    return tuple(out)


def num_tableaux(shape) -> int:
    """Number of standard Young tableaux, by the hook length formula."""
    shape = as_diagram(shape)
    return _num_tableaux(shape.rows)


@lru_cache(maxsize=None)
def _num_tableaux(rows: tuple[int, ...]) -> int:
    shape = YoungDiagram(rows)
    hooks = math.prod(b.hook for b in shape.boxes())
    count, rem = divmod(math.factorial(shape.n), hooks)
    assert rem == 0
    return count


def dim_P(shape) -> int:
    """Dimension of the symmetric-group irrep labelled by ``shape``."""
    return num_tableaux(shape)


class StandardTableau:
    """Standard Young tableau stored as its growth chain.

    ``word[i]`` is the row holding entry ``i + 1``; ``chain[i]`` is the shape
    occupied by entries ``1..i+1``.
    """

    __slots__ = ("word", "chain", "_hash")

    def __init__(self, word: Sequence[int]):
        word = tuple(int(r) for r in word)
        rows: list[int] = []
        chain = []
        for r in word:
            if r == len(rows):
                rows.append(1)
            elif r < len(rows) and (r == 0 or rows[r - 1] > rows[r]):
                rows[r] += 1
            else:
                raise ValueError(f"{word} is not a Yamanouchi word")
            chain.append(YoungDiagram(tuple(rows)))
        self.word = word
        self.chain = tuple(chain)
        self._hash = hash(word)

    @classmethod
    def from_chain(cls, chain: Sequence[YoungDiagram]) -> "StandardTableau":
        word = []
        prev = EMPTY
        for shape in chain:
            shape = as_diagram(shape)
            if shape.n != prev.n + 1:
                raise ValueError("each chain step must add exactly one box")
            diff = [r for r in range(shape.length) if r >= prev.length or shape.rows[r] != prev.rows[r]]
            if len(diff) != 1 or shape.rows[diff[0]] != (prev.rows[diff[0]] if diff[0] < prev.length else 0) + 1:
                raise ValueError("each chain step must add exactly one box")
            word.append(diff[0])
            prev = shape
        return cls(word)

    @classmethod
    def from_rows(cls, filling: Sequence[Sequence[int]]) -> "StandardTableau":
        n = sum(len(r) for r in filling)
        word = [0] * n
        for r, entries in enumerate(filling):
            for v in entries:
                word[v - 1] = r
        tab = cls(word)
        if tab.filling() != [list(r) for r in filling]:
            raise ValueError(f"{filling} is not a standard filling")
        return tab

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def shape(self) -> YoungDiagram:
        return self.chain[-1] if self.chain else EMPTY

    def box_of(self, i: int) -> Box:
        """Box holding entry ``i`` (1-based)."""
        r = self.word[i - 1]
        c = self.chain[i - 1].rows[r] - 1
        return Box(r, c, self.shape.hook(r, c))

    def content(self, i: int) -> int:
        r = self.word[i - 1]
        return self.chain[i - 1].rows[r] - 1 - r

    def filling(self) -> list[list[int]]:
        rows: list[list[int]] = [[] for _ in range(self.shape.length)]
        for i, r in enumerate(self.word, start=1):
            rows[r].append(i)
        return rows

    @property
    def down(self) -> "StandardTableau":
        """The tableau with the largest entry removed."""
        return StandardTableau(self.word[:-1])

    def up(self, shape) -> "StandardTableau":
        """The tableau with entry ``n + 1`` added so the result has ``shape``."""
        shape = as_diagram(shape)
        for r, _ in self.shape.addable_cells():
            if self.shape.add_box(r) == shape:
                return StandardTableau(self.word + (r,))
        raise ValueError(f"{shape} is not obtained from {self.shape} by adding one box")

    def swap(self, i: int) -> "StandardTableau | None":
        """``s_i T`` (entries i and i+1 exchanged), or None when not standard."""
        w = list(self.word)
        if w[i - 1] == w[i]:
            return None
        w[i - 1], w[i] = w[i], w[i - 1]
        try:
            return StandardTableau(w)
        except ValueError:
            return None

    def sort_key(self):
        return self.word

    def __eq__(self, other):
        return isinstance(other, StandardTableau) and self.word == other.word

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.word < other.word

    def __repr__(self):
        return f"StandardTableau({self.filling()})"


def enumerate_tableaux(shape) -> list[StandardTableau]:
    """All standard tableaux of ``shape`` in canonical order."""
    return list(_tableaux(as_diagram(shape).rows))


@lru_cache(maxsize=None)
def _tableaux(rows: tuple[int, ...]) -> tuple[StandardTableau, ...]:
    shape = YoungDiagram(rows)
    if shape.n == 0:
        return (StandardTableau(()),)
    out = []
    for parent in shape.parents():
        for t in _tableaux(parent.rows):
            out.append(t.up(shape))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def tableau_index(rows: tuple[int, ...]) -> dict[StandardTableau, int]:
    return {t: i for i, t in enumerate(_tableaux(rows))}


def tableaux_with_parent(shape, parent) -> list[StandardTableau]:
    """Tab(lambda, mu): tableaux of ``shape`` whose largest box sits on ``parent``."""
    parent = as_diagram(parent)
    return [t for t in enumerate_tableaux(shape) if t.down.shape == parent]


# --- Kerov interlacing sequences -------------------------------------------


@dataclass(frozen=True)
class InterlacingSequences:
    alphas: tuple[int, ...]
    betas: tuple[int, ...]

    def __post_init__(self):
        if len(self.alphas) != len(self.betas) + 1:
            raise ValueError("need len(alphas) == len(betas) + 1")
        merged = [None] * (2 * len(self.alphas) - 1)
        merged[::2] = self.alphas
        merged[1::2] = self.betas
        if any(merged[i] >= merged[i + 1] for i in range(len(merged) - 1)):
            raise ValueError(f"sequences do not interlace: {self.alphas}, {self.betas}")


def interlacing(shape) -> InterlacingSequences:
    """Minima (addable contents) and maxima (removable contents) of the profile."""
    shape = as_diagram(shape)
    alphas = sorted(c - r for r, c in shape.addable_cells())
    betas = sorted(c - r for r, c in shape.removable_cells())
    return InterlacingSequences(tuple(alphas), tuple(betas))


def add_box_ratio(mu, k: int) -> Fraction:
    """|Tab(lambda)| / |Tab(mu)| for lambda = mu plus a box at ``alphas[k]`` (0-based)."""
    mu = as_diagram(mu)
    seq = interlacing(mu)
    a, b = seq.alphas, seq.betas
    if not 0 <= k < len(a):
        raise IndexError(f"no addable position {k} for {mu}")
    ratio = Fraction(mu.n + 1)
    for i in range(k):
        ratio *= Fraction(a[k] - b[i], a[k] - a[i])
    for i in range(k + 1, len(a)):
        ratio *= Fraction(a[k] - b[i - 1], a[k] - a[i])
    return ratio


def remove_box_ratio(lam, k: int) -> Fraction:
    """|Tab(mu)| / |Tab(lambda)| for mu = lambda minus the box at ``betas[k]`` (0-based)."""
    lam = as_diagram(lam)
    seq = interlacing(lam)
    a, b = seq.alphas, seq.betas
    if not 0 <= k < len(b):
        raise IndexError(f"no removable box {k} for {lam}")
    ratio = Fraction((a[-1] - b[k]) * (b[k] - a[0]), lam.n)
    for i in range(k):
        ratio *= Fraction(b[k] - a[i + 1], b[k] - b[i])
    for i in range(k + 1, len(b)):
        ratio *= Fraction(b[k] - a[i], b[k] - b[i])
    return ratio


def add_box_at_content(shape, content: int) -> YoungDiagram:
    shape = as_diagram(shape)
    for r, c in shape.addable_cells():
        if c - r == content:
            return shape.add_box(r)
    raise ValueError(f"no addable cell of content {content} in {shape}")


# --- closed-form identities ------------------------------------------------


def _single_box_content(big: YoungDiagram, small: YoungDiagram) -> int:
    """Content of the unique box of ``big`` not in ``small``."""
    diff = [
        (r, c)
        for r in range(big.length)
        for c in range(small.rows[r] if r < small.length else 0, big.rows[r])
    ]
    if len(diff) != 1 or any((r, c) not in big for r, c in diff) or big.n != small.n + 1:
        raise ValueError(f"{small} -> {big} is not a single-box step")
    for r in range(small.length):
        if small.rows[r] > (big.rows[r] if r < big.length else 0):
            raise ValueError(f"{small} is not contained in {big}")
    r, c = diff[0]
    return c - r


def union(mu: YoungDiagram, nu: YoungDiagram) -> YoungDiagram:
    m = max(mu.length, nu.length)
    get = lambda p, i: p.rows[i] if i < p.length else 0  # noqa: E731
    return YoungDiagram(tuple(max(get(mu, i), get(nu, i)) for i in range(m)))


def intersection(mu: YoungDiagram, nu: YoungDiagram) -> YoungDiagram:
    m = min(mu.length, nu.length)
    return YoungDiagram(tuple(r for r in (min(mu.rows[i], nu.rows[i]) for i in range(m)) if r > 0))


def is_parent(small, big) -> bool:
    small, big = as_diagram(small), as_diagram(big)
    return small in big.parents()


def check_hook_ratio_identity(mu, nu) -> Fraction:
    """Residual of the adjacent-pair dimension ratio identity (exact)."""
    mu, nu = as_diagram(mu), as_diagram(nu)
    if mu == nu:
        raise ValueError("mu and nu must be distinct")
    if mu.n != nu.n:
        raise ValueError("mu and nu must have the same size")
    cup, cap = union(mu, nu), intersection(mu, nu)
    if cap.n != mu.n - 1:
        raise ValueError(f"{mu} and {nu} are not adjacent")
    n = mu.n
    lhs = Fraction(dim_P(mu) * dim_P(nu), dim_P(cup) * dim_P(cap))
    axial = _single_box_content(mu, cap) - _single_box_content(nu, cap)
    rhs = Fraction(n, n + 1) * (1 - Fraction(1, axial * axial))
    return abs(lhs - rhs)


def check_zero_sum_identity(nu, tau, kappa) -> Fraction:
    """Residual of the zero-sum identity over the children of ``nu`` (exact)."""
    nu, tau, kappa = as_diagram(nu), as_diagram(tau), as_diagram(kappa)
    if tau == kappa:
        raise ValueError("tau and kappa must be distinct")
    if not (is_parent(tau, nu) and is_parent(kappa, nu)):
        raise ValueError("tau and kappa must both be parents of nu")
    c_tau = _single_box_content(nu, tau)
    c_kappa = _single_box_content(nu, kappa)
    total = Fraction(0)
    for lam in nu.children():
        c = _single_box_content(lam, nu)
        total += Fraction(dim_P(lam), dim_P(nu)) / ((c - c_tau) * (c - c_kappa))
    return abs(total)


def check_inverse_square_identity(nu, tau) -> Fraction:
    """Residual of the inverse-square sum identity (exact)."""
    nu, tau = as_diagram(nu), as_diagram(tau)
    if not is_parent(tau, nu):
        raise ValueError(f"{tau} is not a parent of {nu}")
    n = nu.n
    c_tau = _single_box_content(nu, tau)
    total = Fraction(0)
    for lam in nu.children():
        c = _single_box_content(lam, nu)
        total += Fraction(dim_P(lam), dim_P(nu)) / ((c - c_tau) ** 2)
    rhs = Fraction(n + 1, n) * Fraction(dim_P(nu), dim_P(tau))
    return abs(total - rhs)


def lagrange_sum(alphas: Sequence, betas: Sequence, m: int, power: int = 1) -> Fraction:
    """sum_i (alpha_i - beta_m)^-power * prod_{j<i} (a_i-b_j)/(a_i-a_j) * prod_{j>i} (a_i-b_{j-1})/(a_i-a_j).

    ``m`` is 1-based.
    """
    a = [Fraction(x) for x in alphas]
    b = [Fraction(x) for x in betas]
    total = Fraction(0)
    for i in range(len(a)):
        term = 1 / (a[i] - b[m - 1]) ** power
        for j in range(i):
            term *= (a[i] - b[j]) / (a[i] - a[j])
        for j in range(i + 1, len(a)):
            term *= (a[i] - b[j - 1]) / (a[i] - a[j])
        total += term
    return total


def check_lagrange_identity(alphas: Sequence, betas: Sequence, m: int) -> Fraction:
    """Residual of the partial-fraction identity on arbitrary distinct rationals."""
    if len(alphas) != len(betas) + 1:
        raise ValueError("need len(alphas) == len(betas) + 1")
    values = [Fraction(x) for x in (*alphas, *betas)]
    if len(set(values)) != len(values):
        raise ValueError("alphas and betas must be pairwise distinct")
    if not 1 <= m <= len(betas):
        raise ValueError(f"m must lie in 1..{len(betas)}")
    return abs(lagrange_sum(alphas, betas, m))


def admissible_adjacent_pairs(n: int) -> Iterator[tuple[YoungDiagram, YoungDiagram]]:
    parts = enumerate_partitions(n)
    for i, mu in enumerate(parts):
        for nu in parts[i + 1:]:
            if intersection(mu, nu).n == n - 1:
                yield mu, nu


def iter_all_partitions(max_n: int, min_n: int = 0) -> Iterable[YoungDiagram]:
    for n in range(min_n, max_n + 1):
        yield from enumerate_partitions(n)

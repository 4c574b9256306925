import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from combforge import young
from combforge.young import StandardTableau, YoungDiagram

# OEIS A000041
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


def brute_force_tableaux(rows):
    """Every filling of the diagram with 1..n that increases along rows and columns."""
    cells = [(r, c) for r, length in enumerate(rows) for c in range(length)]
    out = []
    for perm in itertools.permutations(range(1, len(cells) + 1)):
        fill = dict(zip(cells, perm))
        ok = all(fill[(r, c)] < fill[(r, c + 1)] for r, c in cells if (r, c + 1) in fill)
        ok = ok and all(fill[(r, c)] < fill[(r + 1, c)] for r, c in cells if (r + 1, c) in fill)
        if ok:
            out.append(fill)
    return out


def hook_length_count(rows):
    cols = [sum(1 for r in rows if r > c) for c in range(rows[0])] if rows else []
    hooks = 1
    for r, length in enumerate(rows):
        for c in range(length):
            hooks *= (length - c - 1) + (cols[c] - r - 1) + 1
    return math.factorial(sum(rows)) // hooks


partitions = st.integers(0, 9).flatmap(lambda n: st.sampled_from(young.enumerate_partitions(n)))


def test_partition_counts():
    for n, expected in enumerate(PARTITION_COUNTS):
        parts = young.enumerate_partitions(n)
        assert len(parts) == expected
        assert len(set(parts)) == expected
        # reverse lexicographic order
        assert [p.rows for p in parts] == sorted((p.rows for p in parts), reverse=True)


def test_max_rows_filter():
    for n in range(8):
        for d in range(1, 4):
            got = young.enumerate_partitions(n, max_rows=d)
            assert got == [p for p in young.enumerate_partitions(n) if p.length <= d]


@pytest.mark.parametrize("n", range(0, 7))
def test_tableaux_match_brute_force(n):
    for lam in young.enumerate_partitions(n):
        tabs = young.enumerate_tableaux(lam)
        brute = brute_force_tableaux(lam.rows)
        assert len(tabs) == len(brute) == young.num_tableaux(lam) == hook_length_count(lam.rows)
        fills = {tuple((r, c, v) for r, row in enumerate(t.filling()) for c, v in enumerate(row)) for t in tabs}
        assert fills == {tuple((r, c, f[(r, c)]) for r, c in sorted(f)) for f in brute}


def test_tableau_order_and_index():
    for lam in young.enumerate_partitions(6):
        tabs = young.enumerate_tableaux(lam)
        words = [t.word for t in tabs]
        assert words == sorted(words)
        index = young.tableau_index(lam.rows)
        assert all(index[t] == j for j, t in enumerate(tabs))


def test_small_named_cases():
    assert young.num_tableaux((2, 1)) == 2
    assert young.num_tableaux((3, 2)) == 5
    assert young.num_tableaux((3, 2, 1)) == 16
    assert young.num_tableaux((4, 4, 4)) == 462
    assert YoungDiagram((4, 2, 1)).conjugate.rows == (3, 2, 1, 1)
    assert YoungDiagram((3, 1)).hook(0, 0) == 4


@given(partitions)
def test_conjugate_involution(lam):
    assert lam.conjugate.conjugate == lam
    assert lam.conjugate.n == lam.n


@given(partitions)
def test_children_parents_are_inverse(lam):
    for child in lam.children():
        assert child.n == lam.n + 1
        assert lam in child.parents()
    for parent in lam.parents():
        assert lam in parent.children()


@given(partitions)
def test_branching_rule_counts(lam):
    if lam.n == 0:
        return
    assert sum(young.num_tableaux(mu) for mu in lam.parents()) == young.num_tableaux(lam)
    assert sum(len(young.tableaux_with_parent(lam, mu)) for mu in lam.parents()) == young.num_tableaux(lam)


@given(st.integers(0, 9))
def test_square_dimension_sum(n):
    assert sum(young.num_tableaux(p) ** 2 for p in young.enumerate_partitions(n)) == math.factorial(n)


@given(partitions)
def test_tableau_chain_roundtrip(lam):
    for t in young.enumerate_tableaux(lam)[:20]:
        assert StandardTableau.from_chain(t.chain) == t
        assert t.shape == lam
        if lam.n:
            assert t.down.up(lam) == t
            assert t.content(lam.n) == t.box_of(lam.n).content


@given(partitions)
def test_interlacing_properties(lam):
    seq = young.interlacing(lam)
    assert len(seq.alphas) == len(lam.addable_cells())
    assert len(seq.betas) == len(lam.removable_cells())
    # center of mass is zero: sum alpha - sum beta = 0
    assert sum(seq.alphas) == sum(seq.betas)
    # second moment encodes the size
    assert sum(a * a for a in seq.alphas) - sum(b * b for b in seq.betas) == 2 * lam.n


def test_interlacing_published_example():
    seq = young.interlacing((6, 5, 3, 3, 2, 1, 1, 1))
    assert seq.alphas == (-8, -4, -2, 1, 4, 6)
    assert seq.betas == (-7, -3, -1, 3, 5)


def test_interlacing_rejects_bad_sequences():
    with pytest.raises(ValueError):
        young.InterlacingSequences((0, 1), (2,))
    with pytest.raises(ValueError):
        young.InterlacingSequences((0,), (1,))


@given(partitions)
def test_kerov_ratios_match_hook_formula(lam):
    seq = young.interlacing(lam)
    for k, alpha in enumerate(seq.alphas):
        big = young.add_box_at_content(lam, alpha)
        assert young.add_box_ratio(lam, k) == Fraction(hook_length_count(big.rows), hook_length_count(lam.rows))
    corners = sorted(lam.removable_cells(), key=lambda rc: rc[1] - rc[0])
    for k, (r, _) in enumerate(corners):
        small = lam.remove_box(r)
        assert young.remove_box_ratio(lam, k) == Fraction(hook_length_count(small.rows), hook_length_count(lam.rows))


@pytest.mark.parametrize("n", range(1, 7))
def test_closed_form_identities_exact(n):
    for mu, nu in young.admissible_adjacent_pairs(n):
        assert young.check_hook_ratio_identity(mu, nu) == 0
    for nu in young.enumerate_partitions(n):
        for tau in nu.parents():
            assert young.check_inverse_square_identity(nu, tau) == 0
        for tau, kappa in itertools.permutations(nu.parents(), 2):
            assert young.check_zero_sum_identity(nu, tau, kappa) == 0


def test_identity_preconditions():
    with pytest.raises(ValueError):
        young.check_hook_ratio_identity((2, 1), (2, 1))
    with pytest.raises(ValueError):
        young.check_hook_ratio_identity((3,), (1, 1, 1))
    with pytest.raises(ValueError):
        young.check_inverse_square_identity((2, 1), (3,))
    with pytest.raises(ValueError):
        young.check_zero_sum_identity((2, 1), (2,), (2,))


distinct_rationals = st.lists(
    st.fractions(min_value=-50, max_value=50, max_denominator=9), min_size=3, max_size=11, unique=True
).filter(lambda v: len(v) % 2 == 1)


@settings(max_examples=200)
@given(distinct_rationals, st.data())
def test_lagrange_identity_on_arbitrary_rationals(values, data):
    length = (len(values) + 1) // 2
    alphas, betas = values[:length], values[length:]
    m = data.draw(st.integers(1, length - 1))
    assert young.check_lagrange_identity(alphas, betas, m) == 0


def test_lagrange_rejects_repeats():
    with pytest.raises(ValueError):
        young.check_lagrange_identity([0, 1], [1], 1)
    with pytest.raises(ValueError):
        young.check_lagrange_identity([0, 1], [2], 2)


def test_swap_gives_adjacent_tableau():
    t = StandardTableau.from_rows([[1, 2], [3]])
    s = t.swap(2)
    assert s == StandardTableau.from_rows([[1, 3], [2]])
    # 1 and 2 share a row so the swap is not standard
    assert t.swap(1) is None


def test_diagram_json_roundtrip():
    lam = YoungDiagram((4, 2, 2, 1))
    assert YoungDiagram.from_json(lam.to_json()) == lam
    with pytest.raises(ValueError):
        YoungDiagram((1, 2))

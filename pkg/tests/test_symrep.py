import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from combforge import symrep, young
from combforge.symrep import Permutation

# rows: irreps in partition order; columns: cycle types in partition order
# (the identity class (1^n) is therefore the last column)
S3_TABLE = [[1, 1, 1], [-1, 0, 2], [1, -1, 1]]
S4_TABLE = [
    [1, 1, 1, 1, 1],
    [-1, 0, -1, 1, 3],
    [0, -1, 2, 0, 2],
    [1, 0, -1, -1, 3],
    [-1, 1, 1, -1, 1],
]

perms = st.integers(1, 6).flatmap(lambda n: st.permutations(range(1, n + 1))).map(Permutation)


def test_character_tables_known_values():
    _, t3 = symrep.character_table(3)
    _, t4 = symrep.character_table(4)
    assert np.array_equal(t3, S3_TABLE)
    assert np.array_equal(t4, S4_TABLE)


@given(perms, st.data())
def test_composition_and_inverse(pi, data):
    sigma = Permutation(tuple(data.draw(st.permutations(range(1, pi.n + 1)))))
    for j in range(1, pi.n + 1):
        assert (pi * sigma)(j) == pi(sigma(j))
    assert pi * pi.inverse() == Permutation.identity(pi.n)
    assert (pi * sigma).sign() == pi.sign() * sigma.sign()


@given(perms)
def test_adjacent_factorization(pi):
    prod = Permutation.identity(pi.n)
    for i in pi.adjacent_factorization():
        prod = prod * Permutation.transposition(i, pi.n)
    assert prod == pi
    assert (-1) ** len(pi.adjacent_factorization()) == pi.sign()


def test_class_sizes_sum_to_factorial():
    for n in range(1, 8):
        assert sum(symrep.class_size(mu) for mu in young.enumerate_partitions(n)) == math.factorial(n)
    assert symrep.class_size((2, 1)) == 3
    assert symrep.class_representative((3, 1)).cycle_type().rows == (3, 1)


@given(perms, st.data())
def test_irrep_homomorphism_and_orthogonality(pi, data):
    sigma = Permutation(tuple(data.draw(st.permutations(range(1, pi.n + 1)))))
    for lam in young.enumerate_partitions(pi.n):
        a, b = symrep.irrep_matrix(lam, pi), symrep.irrep_matrix(lam, sigma)
        assert np.abs(symrep.irrep_matrix(lam, pi * sigma) - a @ b).max() < 1e-10
        assert np.abs(a @ a.T - np.eye(a.shape[0])).max() < 1e-10


@pytest.mark.parametrize("n", range(2, 7))
def test_coxeter_relations(n):
    for lam in young.enumerate_partitions(n):
        eye = np.eye(young.num_tableaux(lam))
        s = [symrep.transposition_action(lam, i) for i in range(1, n)]
        for i, m in enumerate(s):
            assert np.abs(m @ m - eye).max() < 1e-10
            if i + 1 < len(s):
                assert np.abs(m @ s[i + 1] @ m - s[i + 1] @ m @ s[i + 1]).max() < 1e-10
            for j in range(i + 2, len(s)):
                assert np.abs(m @ s[j] - s[j] @ m).max() < 1e-10


def test_transposition_action_entries():
    # shape (2,1), tableaux [[1,2],[3]] and [[1,3],[2]]
    m = symrep.transposition_action((2, 1), 2)
    r = 2  # c(3) - c(2) for the first tableau: -1 - 1
    expected = np.array([[-1 / r, np.sqrt(1 - 1 / r**2)], [np.sqrt(1 - 1 / r**2), 1 / r]])
    assert np.abs(m - expected).max() < 1e-12
    assert np.abs(symrep.transposition_action((3,), 1) - 1).max() < 1e-12
    assert np.abs(symrep.transposition_action((1, 1, 1), 2) + 1).max() < 1e-12


@pytest.mark.parametrize("n", range(1, 7))
def test_branching_block_diagonal(n):
    for lam in young.enumerate_partitions(n):
        blocks = symrep.restriction_blocks(lam)
        assert sum(len(idx) for _, idx in blocks) == young.num_tableaux(lam)
        for p in symrep.all_permutations(n - 1)[:24]:
            m = symrep.irrep_matrix(lam, symrep.embed_permutation(p, n))
            for mu, idx in blocks:
                assert np.abs(m[np.ix_(idx, idx)] - symrep.irrep_matrix(mu, p)).max() < 1e-10


def _natural_rep(n):
    def rep(pi):
        m = np.zeros((n, n))
        for j in range(1, n + 1):
            m[pi(j) - 1, j - 1] = 1.0
        return m

    return rep


@pytest.mark.parametrize("n", [3, 4, 5])
def test_isotypic_projector_on_natural_rep(n):
    # C^n = trivial + standard (n-1,1)
    rep = _natural_rep(n)
    total = np.zeros((n, n))
    for lam in young.enumerate_partitions(n):
        p = symrep.isotypic_projector(lam, rep)
        assert np.abs(p @ p - p).max() < 1e-10
        expected_rank = {(n,): 1, (n - 1, 1): n - 1}.get(lam.rows, 0)
        assert abs(np.trace(p) - expected_rank) < 1e-10
        total += p
    assert np.abs(total - np.eye(n)).max() < 1e-10


def test_isotypic_projector_accepts_mapping():
    rep = _natural_rep(3)
    table = {p: rep(p) for p in symrep.all_permutations(3)}
    p = symrep.isotypic_projector((3,), table)
    assert np.abs(p - np.ones((3, 3)) / 3).max() < 1e-12


def test_isotypic_projector_rejects_non_homomorphism():
    with pytest.raises(ValueError):
        symrep.isotypic_projector((2, 1), lambda p: np.eye(2) * (2.0 if p.n else 1.0))


def test_invalid_inputs():
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))
    with pytest.raises(ValueError):
        Permutation.transposition(3, 3)
    with pytest.raises(ValueError):
        symrep.irrep_matrix((2, 1), Permutation.identity(4))

from fractions import Fraction

import numpy as np
import pytest

from combforge import haarmoment
from combforge.comb import haar_unitary
from combforge.haarmoment import haar_moment_mc, haar_moment_rep, haar_moment_weingarten, weingarten_exact
from combforge.schurweyl import tensor_power


def closed_form_wg(cycle_type, d):
    """Textbook Weingarten values for k <= 3."""
    d = Fraction(d)
    if sum(cycle_type) < 3:
        return {(1,): 1 / d, (1, 1): 1 / (d * d - 1), (2,): -1 / (d * (d * d - 1))}[cycle_type]
    den = d * (d * d - 1) * (d * d - 4)
    return {(1, 1, 1): (d * d - 2) / den, (2, 1): -d / den, (3,): 2 / den}[cycle_type]


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_weingarten_closed_forms(d):
    for ct in [(1,), (1, 1), (2,)]:
        assert weingarten_exact(ct, d) == closed_form_wg(ct, d)
    if d >= 3:
        for ct in [(1, 1, 1), (2, 1), (3,)]:
            assert weingarten_exact(ct, d) == closed_form_wg(ct, d)


@pytest.mark.parametrize("k,d", [(1, 2), (2, 2), (2, 3), (3, 3), (3, 4), (4, 4)])
def test_weingarten_inverts_gram_matrix(k, d):
    assert haarmoment.gram_identity_residual(k, d) == 0


@pytest.mark.parametrize("d", [2, 3, 4])
def test_first_moment_is_maximally_mixed(d):
    m = haar_moment_rep(d, 0)
    assert m.ids == (1, 2)
    assert np.abs(m.matrix - np.eye(d * d) / d).max() < 1e-12


@pytest.mark.parametrize("d,k", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_rep_matches_weingarten(d, k):
    a, b = haar_moment_rep(d, k - 1), haar_moment_weingarten(d, k)
    assert a.ids == b.ids == tuple(range(1, 2 * k + 1))
    assert a.distance(b) < 1e-9


@pytest.mark.parametrize("d,k", [(2, 2), (3, 2), (2, 3)])
def test_moment_structure(d, k):
    m = haar_moment_rep(d, k - 1)
    # trace: each copy of |U>><<U| has trace d
    assert abs(m.trace() - d**k) < 1e-9
    assert m.hermiticity_residual() < 1e-12
    assert m.eigvalsh().min() > -1e-10
    # tracing out all outputs leaves the identity on the inputs
    reduced = m.partial_trace([2 * j + 2 for j in range(k)])
    assert np.abs(reduced.matrix - np.eye(d**k)).max() < 1e-10
    # invariance under V (x) W on every (input, output) pair
    v, w = haar_unitary(d, 1), haar_unitary(d, 2)
    big = tensor_power(np.kron(w, v), k)
    assert np.abs(big @ m.matrix @ big.conj().T - m.matrix).max() < 1e-9


def test_mc_converges_and_is_deterministic():
    d, k = 2, 2
    exact = haar_moment_rep(d, k - 1)
    mc = haar_moment_mc(d, k, 20000, seed=5)
    assert exact.distance(mc) < 5e-2
    again = haar_moment_mc(d, k, 20000, seed=5, threads=4)
    assert np.array_equal(mc.matrix, again.matrix)
    other = haar_moment_mc(d, k, 20000, seed=6)
    assert not np.array_equal(mc.matrix, other.matrix)


def test_mc_shard_layout_does_not_depend_on_threads():
    a = haar_moment_mc(2, 1, 1000, seed=1, shard_size=128, threads=1)
    b = haar_moment_mc(2, 1, 1000, seed=1, shard_size=128, threads=3)
    assert np.array_equal(a.matrix, b.matrix)


def test_splitmix64_reference_values():
    # published first outputs for state 0
    seeds = haarmoment.shard_seeds(0, 3)
    assert seeds == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_haar_unitaries_are_unitary():
    us = haarmoment.haar_unitaries(3, 50, np.random.default_rng(0))
    eye = np.eye(3)
    assert max(np.abs(u.conj().T @ u - eye).max() for u in us) < 1e-12


def test_moment_dispatch():
    assert haarmoment.moment(2, 1, "weingarten").distance(haarmoment.moment(2, 1, "rep")) < 1e-12
    with pytest.raises(ValueError):
        haarmoment.moment(2, 1, "mc")
    with pytest.raises(ValueError):
        haarmoment.moment(2, 1, "nope")
    with pytest.raises(ValueError):
        haar_moment_weingarten(2, 5)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from combforge import comb
from combforge.comb import Comb, choi_of_unitary, haar_unitary, link_product
from combforge.operators import LabeledOperator, SystemLabel, identity


def naive_link(x, y):
    """tr_a[(X^{T_a} (x) I_y) (I_x (x) Y)] with explicit identities."""
    shared = [i for i in x.ids if i in y.ids]
    x_big = x.partial_transpose(shared).kron(identity([lab for lab in y.labels if lab.id not in shared]))
    y_big = y.kron(identity([lab for lab in x.labels if lab.id not in shared]))
    return (x_big @ y_big).partial_trace(shared).canonical()


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2, 2), (2, 3, 2), (3, 2, 1)]))
def test_link_product_matches_naive(seed, dims):
    rng = np.random.default_rng(seed)
    da, db, dc = dims
    x = LabeledOperator([(0, da), (1, db)], rng.normal(size=(da * db,) * 2) + 1j * rng.normal(size=(da * db,) * 2))
    y = LabeledOperator([(1, db), (2, dc)], rng.normal(size=(db * dc,) * 2) + 1j * rng.normal(size=(db * dc,) * 2))
    out = link_product(x, y)
    assert out.ids == (0, 2)
    assert out.allclose(naive_link(x, y), 1e-10)


def test_link_product_composes_unitaries():
    u1, u2 = haar_unitary(3, 1), haar_unitary(3, 2)
    c1 = choi_of_unitary(u1, 1, 0)
    c2 = choi_of_unitary(u2, 2, 1)
    out = link_product(c1, c2)
    assert out.allclose(choi_of_unitary(u2 @ u1, 2, 0).canonical(), 1e-10)


def test_link_product_without_shared_labels_is_kron():
    a, b = identity([(0, 2)]) * 2.0, identity([(5, 3)])
    assert link_product(a, b).allclose(a.kron(b), 0)


def test_apply_channel_unitary():
    u = haar_unitary(3, 5)
    rho = np.diag([0.5, 0.3, 0.2]).astype(complex)
    out = comb.apply_channel(choi_of_unitary(u, 1, 0), rho, in_id=0, out_id=1)
    assert np.abs(out - u @ rho @ u.conj().T).max() < 1e-12


@pytest.mark.parametrize("d,n_teeth,anc", [(2, 1, None), (2, 2, None), (2, 3, 1), (3, 2, 2), (2, 2, 4)])
def test_random_combs_are_valid(d, n_teeth, anc):
    for seed in range(5):
        r = comb.random_comb(d, n_teeth, anc, seed=seed)
        check = comb.is_comb(r)
        assert check.valid, check.reason
        assert r.teeth == [(2 * j, 2 * j + 1) for j in range(n_teeth)]
        assert abs(r.op.trace() - d**n_teeth) < 1e-9


def test_random_comb_is_seeded():
    a = comb.random_comb(2, 2, seed=9)
    b = comb.random_comb(2, 2, seed=9)
    c = comb.random_comb(2, 2, seed=10)
    assert np.array_equal(a.op.matrix, b.op.matrix)
    assert not np.allclose(a.op.matrix, c.op.matrix)


def test_is_comb_rejects_signalling_from_the_future():
    r = comb.random_comb(2, 2, seed=3)
    # read the teeth in the wrong causal order
    swapped = Comb(r.op, list(reversed(r.teeth)))
    check = comb.is_comb(swapped)
    assert not check.valid
    assert "causality" in check.reason


def test_is_comb_rejects_non_psd_and_bad_trace():
    c = choi_of_unitary(np.eye(2), 1, 0)
    assert not comb.is_comb(Comb(c * -1.0, [(0, 1)])).valid
    check = comb.is_comb(Comb(c * 2.0, [(0, 1)]))
    assert not check.valid
    # the unitary comb itself is fine
    assert comb.is_comb(Comb(c, [(0, 1)])).valid


def test_c_u_is_a_comb_and_a_projector():
    u = haar_unitary(2, 4)
    cu = comb.c_u(u, 1)
    assert cu.op.ids == (1, 2, 3, 4)
    assert comb.is_comb(cu).valid
    assert np.abs(cu.op.matrix @ cu.op.matrix - 4 * cu.op.matrix).max() < 1e-10


def _avg_fidelity_by_sampling(channel, u, samples, rng):
    d = u.shape[0]
    total = 0.0
    for _ in range(samples):
        psi = rng.normal(size=d) + 1j * rng.normal(size=d)
        psi /= np.linalg.norm(psi)
        target = u @ psi
        out = channel(np.outer(psi, psi.conj()))
        total += float((target.conj() @ out @ target).real)
    return total / samples


def test_average_distance_matches_state_sampling():
    rng = np.random.default_rng(0)
    d = 2
    u = haar_unitary(d, rng)
    noisy = choi_of_unitary(haar_unitary(d, rng), 1, 0) * 0.6 + comb.depolarizing_choi(d, 1, 0) * 0.4
    channel = lambda rho: comb.apply_channel(noisy, rho, 0, 1)  # noqa: E731
    estimate = 1.0 - _avg_fidelity_by_sampling(channel, u, 20000, rng)
    assert abs(comb.avg_case_distance_to_unitary(noisy, u) - estimate) < 1e-2


def test_average_distance_closed_forms():
    for d in (2, 3, 4):
        u = haar_unitary(d, d)
        assert abs(comb.avg_case_distance_to_unitary(choi_of_unitary(u, 1, 0), u)) < 1e-12
        dep = comb.depolarizing_choi(d, 1, 0)
        assert abs(comb.avg_case_distance_to_unitary(dep, u) - (d / (d + 1)) * (1 - 1 / d**2)) < 1e-12
        # label order is read from the comb teeth when given a Comb
        flipped = Comb(choi_of_unitary(u, 1, 0).reorder([0, 1]), [(0, 1)])
        assert abs(comb.avg_case_distance_to_unitary(flipped, u)) < 1e-12


def test_choi_trace_distance():
    u = haar_unitary(2, 6)
    c = choi_of_unitary(u, 1, 0)
    assert comb.choi_trace_distance(c, c) < 1e-12
    # orthogonal pure Choi states: distance 2
    x = choi_of_unitary(np.array([[0, 1], [1, 0]]), 1, 0)
    z = choi_of_unitary(np.diag([1, -1]), 1, 0)
    assert abs(comb.choi_trace_distance(x, z) - 2.0) < 1e-12


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 3.0))
def test_rank_one_loewner_test_matches_eigenvalues(seed, scale):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    m = a @ a.conj().T  # rank 3
    psi = a @ rng.normal(size=3)
    psi = psi / np.linalg.norm(psi) * scale
    # M - |psi><psi| is singular on ker M, so compare on the range of M
    q = np.linalg.qr(a)[0]
    gap = np.linalg.eigvalsh(q.conj().T @ (m - np.outer(psi, psi.conj())) @ q).min()
    # skip draws too close to the boundary to decide in floating point
    if abs(gap) > 1e-6:
        assert comb.loewner_dominates_rank_one(m, psi) == (gap > 0)
    outside = np.linalg.svd(a.conj().T)[2][-1].conj()
    assert not comb.loewner_dominates_rank_one(m, outside)


def test_comb_label_validation():
    with pytest.raises(ValueError):
        Comb(identity([SystemLabel(0, 2), SystemLabel(1, 2)]), [(0, 2)])
    with pytest.raises(ValueError):
        Comb.with_default_teeth(identity([SystemLabel(0, 2)]))
    with pytest.raises(ValueError):
        comb.random_comb(2, 0)

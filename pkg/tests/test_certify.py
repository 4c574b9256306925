import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from combforge import certify as cert
from combforge.comb import Comb, link_product, random_comb
from combforge.haarmoment import haar_moment_weingarten


def weingarten_score(r, d, n):
    """Score through the Weingarten-assembled moment instead of the Young-basis one."""
    out = link_product(r.op, haar_moment_weingarten(d, n + 1))
    v = np.eye(d).reshape(-1)
    return float((v @ out.matrix @ v).real)


@pytest.mark.parametrize("d,n", [(2, 1), (2, 2), (3, 1)])
def test_score_matches_independent_route(d, n):
    for seed in range(5):
        r = random_comb(d, n + 1, seed=seed)
        assert abs(cert.timereversal_score(r, d, n) - weingarten_score(r, d, n)) < 1e-9


@pytest.mark.parametrize("d,n", [(2, 1), (2, 2), (3, 1)])
def test_reference_protocols_score_one(d, n):
    # both ignore the queries, so the final Haar query depolarizes the output
    assert abs(cert.timereversal_score(cert.identity_protocol(d, n), d, n) - 1.0) < 1e-9
    assert abs(cert.timereversal_score(cert.depolarizing_protocol(d, n), d, n) - 1.0) < 1e-9


def test_mixture_is_a_comb_and_scores_linearly():
    d, n = 2, 1
    a, b = random_comb(d, n + 1, seed=1), random_comb(d, n + 1, seed=2)
    mix = cert.mix_combs([0.25, 0.75], [a, b])
    expected = 0.25 * cert.timereversal_score(a, d, n) + 0.75 * cert.timereversal_score(b, d, n)
    assert abs(cert.timereversal_score(mix, d, n) - expected) < 1e-10


def test_implied_bounds_published_values():
    assert cert.implied_query_bound(2, 0.0, "average") == 3
    assert cert.implied_query_bound(2, 0.0, "diamond") == 3
    assert cert.implied_query_bound(3, 0.0, "average") == 8
    assert cert.implied_query_bound(3, 0.0, "diamond") == 8
    assert cert.implied_query_bound(2, 1.0, "average") == 0


@given(st.integers(2, 8), st.floats(0.0, 1.0))
def test_implied_bounds_monotone_and_score_roundtrip(d, eps):
    for metric in ("average", "diamond"):
        bound = cert.implied_query_bound(d, eps, metric)
        assert bound >= 0
        assert cert.implied_query_bound(d, min(1.0, eps + 0.05), metric) <= bound
    score = d * d - d * (d + 1) * eps
    assert abs(cert.implied_avg_error(score, d) - eps) < 1e-12


def test_implied_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        cert.implied_query_bound(2, 1.5)
    with pytest.raises(ValueError):
        cert.implied_query_bound(2, 0.1, "worst")


@pytest.mark.parametrize("d,n", [(2, 1), (2, 2), (3, 1)])
def test_certificates_pass_with_consistent_fields(d, n):
    for seed in range(10):
        c = cert.certify(random_comb(d, n + 1, seed=seed), d, n)
        assert c.passed
        assert abs(c.score - (d * d - d * (d + 1) * c.implied_avg_error)) < 1e-10
        assert c.score <= n + 1 + 1e-8
        assert c.max_eig <= (n + 1) / d + 1e-8
        assert n >= c.bounds["average"]
        assert n >= c.bounds["diamond"]
        data = c.to_dict()
        assert data["pass"] is True
        assert len(data["input_sha256"]) == 64


def test_certify_rejects_wrong_layout():
    r = random_comb(2, 2, seed=0, first_id=1)
    with pytest.raises(ValueError):
        cert.certify(r, 2, 1)
    with pytest.raises(ValueError):
        cert.certify(random_comb(2, 3, seed=0), 2, 1)
    bad = Comb(random_comb(2, 2, seed=0).op * 2.0, [(0, 1), (2, 3)])
    with pytest.raises(ValueError):
        cert.certify(bad, 2, 1)


def brute_dirichlet(t, n_max):
    for b in range(1, n_max + 1):
        for a in (math.floor(b * t), math.ceil(b * t)):
            if abs(b * t - a) < 1 / n_max:
                return b
    return None


@given(st.floats(0.1, 50.0), st.integers(1, 400))
def test_dirichlet_matches_brute_force(t, n_max):
    a, b = cert.dirichlet_approx(t, n_max)
    assert 1 <= b <= n_max
    assert abs(b * t - a) < 1 / n_max
    assert b == brute_dirichlet(t, n_max)


def test_dirichlet_small_values():
    assert cert.dirichlet_approx(math.pi, 100) == (22, 7)
    assert cert.dirichlet_approx(math.pi, 1000) == (355, 113)
    assert cert.dirichlet_approx(0.5, 1000) == (1, 2)


@given(st.floats(0.1, 100.0), st.floats(0.0, 1e-5))
def test_generalized_budget(t, eps):
    rep = cert.generalized_budget(t, eps)
    assert rep.passed
    assert rep.b == 10 * rep.b_prime and rep.a == 10 * rep.a_prime
    assert rep.approx_error <= 0.01 + 1e-12
    assert rep.error_bound < 0.2
    assert rep.extra_queries == rep.a - 1


def test_generalized_budget_rejects_out_of_range():
    with pytest.raises(ValueError):
        cert.generalized_budget(0.05, 0.0)
    with pytest.raises(ValueError):
        cert.generalized_budget(1.0, 1e-3)

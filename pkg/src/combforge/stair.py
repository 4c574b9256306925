"""Stair operators A_k and the Löwner-order checks built on them.

``A_k`` acts on the (k+1)-factor register ``(H_2, H_4, ..., H_2k, H_{2n+2})``
and the k-factor register ``(H_1, H_3, ..., H_{2k-1})``:

    A_k = sum_{lambda |-_d k+1} sum_{mu -> lambda} dimP_lambda / (dimP_mu dimQ_lambda)
          I_Q_lambda (x) I_Q_mu (x) sum_{T,S in Tab(lambda, mu)} |T><S| (x) |T_down><S_down|
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .comb import Comb, is_comb, link_product, loewner_dominates_rank_one
from .haarmoment import haar_moment_rep
from .operators import LabeledOperator, SystemLabel, check_budget, identity, make_labels
from .report import Check, VerificationReport
from .schurweyl import dim_Q, schur_basis
from .young import (
    YoungDiagram,
    as_diagram,
    enumerate_partitions,
    num_tableaux,
    tableau_index,
    tableaux_with_parent,
)


@dataclass(frozen=True)
class StairBlock:
    lam: YoungDiagram
    mu: YoungDiagram
    coeff: Fraction
    pairs: tuple  # (index of T in Tab(lam), index of T_down in Tab(mu))


@dataclass(frozen=True)
class StairOperator:
    d: int
    n: int
    k: int
    blocks: tuple[StairBlock, ...]

    @property
    def a_ids(self) -> list[int]:
        return stair_a_ids(self.n, self.k)

    @property
    def b_ids(self) -> list[int]:
        return stair_b_ids(self.k)


def stair_a_ids(n: int, k: int) -> list[int]:
    return [2 * j for j in range(1, k + 1)] + [2 * n + 2]


def stair_b_ids(k: int) -> list[int]:
    return [2 * j - 1 for j in range(1, k + 1)]


def stair_blocks(d: int, n: int, k: int) -> StairOperator:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    blocks = []
    for lam in enumerate_partitions(k + 1, max_rows=d):
        index = tableau_index(lam.rows)
        for mu in lam.parents():
            coeff = Fraction(num_tableaux(lam), num_tableaux(mu) * dim_Q(lam, d))
            mu_index = tableau_index(mu.rows)
            pairs = tuple((index[t], mu_index[t.down]) for t in tableaux_with_parent(lam, mu))
            blocks.append(StairBlock(lam, mu, coeff, pairs))
    return StairOperator(d, n, k, tuple(blocks))


def stair_embed(d: int, n: int, k: int) -> LabeledOperator:
    """Dense A_k with labels sorted ascending."""
    dim_a, dim_b = d ** (k + 1), d**k
    check_budget((dim_a * dim_b) ** 2, "stair operator", itemsize=8)
    basis_a, basis_b = schur_basis(d, k + 1), schur_basis(d, k)
    out = np.zeros((dim_a * dim_b, dim_a * dim_b))
    for blk in stair_blocks(d, n, k).blocks:
        va = basis_a.block(blk.lam)
        vb = basis_b.block(blk.mu)
        t_idx = [p[0] for p in blk.pairs]
        s_idx = [p[1] for p in blk.pairs]
        w = np.einsum("xqt,yrt->xyqr", va[:, :, t_idx], vb[:, :, s_idx], optimize=True)
        w = w.reshape(dim_a * dim_b, -1)
        out += float(blk.coeff) * (w @ w.T)
    labels = make_labels(stair_a_ids(n, k) + stair_b_ids(k), d)
    return LabeledOperator(labels, out).canonical()


def phi_vector(lam, mu) -> np.ndarray:
    """sum_{T in Tab(lam, mu)} |T>|T> in P_lam (x) P_lam."""
    lam, mu = as_diagram(lam), as_diagram(mu)
    if mu not in lam.parents():
        raise ValueError(f"{mu} is not obtained from {lam} by removing one box")
    size = num_tableaux(lam)
    index = tableau_index(lam.rows)
    v = np.zeros(size * size)
    for t in tableaux_with_parent(lam, mu):
        i = index[t]
        v[i * size + i] = 1.0
    return v


def stair_gram_exact(lam) -> Fraction:
    """<sum Phi| (sum_mu c_mu Phi_mu Phi_mu^T)^+ |sum Phi> with c_mu = dimP_lam / dimP_mu.

    The Phi_mu are orthogonal with squared norm |Tab(lam, mu)|, so the
    pseudo-inverse acts on each as 1 / (c_mu |Tab(lam, mu)|) and the sum
    collapses to sum_mu <Phi_mu|Phi_mu> / (c_mu |Tab(lam, mu)|).
    """
    lam = as_diagram(lam)
    total = Fraction(0)
    for mu in lam.parents():
        norm2 = len(tableaux_with_parent(lam, mu))
        c = Fraction(num_tableaux(lam), num_tableaux(mu))
        total += Fraction(norm2) / (c * norm2)
    return total


def stair_gram_float(lam) -> tuple[float, bool]:
    """Floating-point evaluation of the same quantity plus the rank-one Löwner test."""
    lam = as_diagram(lam)
    size = num_tableaux(lam)
    m = np.zeros((size * size, size * size))
    psi = np.zeros(size * size)
    for mu in lam.parents():
        phi = phi_vector(lam, mu)
        m += (num_tableaux(lam) / num_tableaux(mu)) * np.outer(phi, phi)
        psi += phi
    value = float(psi @ np.linalg.pinv(m, hermitian=True) @ psi)
    return value, loewner_dominates_rank_one(m, psi)


def _min_eig(x: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (x + x.conj().T)).min())


def _max_eig(x: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (x + x.conj().T)).max())


def padded_stair(d: int, n: int, k: int) -> LabeledOperator:
    """I_{H_{2k+1}} (x) A_k."""
    return identity([SystemLabel(2 * k + 1, d)]).kron(stair_embed(d, n, k))


def check_stair_dominates_moment(d: int, n: int, tol: float = 1e-8) -> VerificationReport:
    """min eig(I_{H_{2n+1}} (x) A_n - E[C_U]) >= -tol * scale."""
    report = VerificationReport("lemma38", {"d": d, "n": n, "tol": tol})
    bound = padded_stair(d, n, n)
    moment = haar_moment_rep(d, n)
    diff = bound - moment
    scale = max(bound.op_norm(), moment.op_norm(), 1.0)
    report.add(Check("stair_minus_moment_min_eig", _min_eig(diff.matrix), -tol * scale, ">=", {"d": d, "n": n, "scale": scale}))
    return report


def check_stair_contraction(d: int, n: int, k: int, tol: float = 1e-8) -> VerificationReport:
    """Contraction of A_k under tr_{H_2k}; equality with (2/d) I at k = 1."""
    report = VerificationReport("lemma39", {"d": d, "n": n, "k": k, "tol": tol})
    a_k = stair_embed(d, n, k)
    reduced = a_k.partial_trace([2 * k])
    params = {"d": d, "n": n, "k": k}
    if k == 1:
        target = identity(reduced.labels) * (2.0 / d)
        report.add(Check("base_case_residual", reduced.distance(target), tol, "<=", params))
        return report
    upper = padded_stair(d, n, k - 1) * ((k + 1) / k)
    diff = upper - reduced
    scale = max(upper.op_norm(), reduced.op_norm(), 1.0)
    report.add(Check("contraction_min_eig", _min_eig(diff.matrix), -tol * scale, ">=", {**params, "scale": scale}))
    return report


def check_stair_bound(x: Comb, d: int, n: int, k: int, tol: float = 1e-8, stair: LabeledOperator | None = None) -> VerificationReport:
    """max eig(X * (I_{H_{2k+1}} (x) A_k)) <= (k+1)/d + tol for a (k+1)-comb X on H_0..H_{2k+1}."""
    report = VerificationReport("cor310", {"d": d, "n": n, "k": k, "tol": tol})
    check = is_comb(x)
    if not check.valid:
        raise ValueError(f"X is not a valid comb: {check.reason}")
    expected_ids = list(range(0, 2 * k + 2))
    if sorted(x.op.ids) != expected_ids:
        raise ValueError(f"X must act on H_0..H_{2 * k + 1}, got {x.op.ids}")
    stair = padded_stair(d, n, k) if stair is None else stair
    out = link_product(x.op, stair)
    params = {"d": d, "n": n, "k": k}
    report.add(Check("output_labels", list(out.ids), [0, 2 * n + 2], "==", params))
    report.add(Check("max_eig", _max_eig(out.matrix), (k + 1) / d + tol, "<=", params))
    return report


def commutant_residual(op: LabeledOperator, v: np.ndarray, w: np.ndarray, a_ids, b_ids) -> float:
    """|| [op, V^{(x)|a|} (x) W^{(x)|b|}] || with factors placed on the given ids."""
    factors = {i: v for i in a_ids}
    factors.update({i: w for i in b_ids})
    u = np.ones((1, 1), dtype=np.complex128)
    for i in op.ids:
        u = np.kron(u, factors[i])
    return float(np.linalg.norm(op.matrix @ u - u @ op.matrix, 2))

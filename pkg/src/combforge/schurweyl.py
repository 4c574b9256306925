"""Schur-Weyl decomposition of (C^d)^{otimes n} in the Young basis.

The basis vector ``|lambda, q, T>`` spans, for fixed ``lambda`` and ``T``, a
copy of the unitary-group irrep ``Q_lambda`` (index ``q``), and for fixed
``q`` the vectors over ``T`` transform under permutations of tensor factors
exactly as Young's orthogonal form.

Construction: for the first tableau ``T0`` of each shape, the product of the
isotypic projectors of its growth chain (each acting on the leading ``k``
factors) is ``I_Q (x) |T0><T0|``; a pivoted QR of that projector gives the
multiplicity frame.  Every other tableau is reached by adjacent swaps,
``|s_i T> = (P(s_i) - 1/r) |T> / sqrt(1 - 1/r^2)``.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.linalg

from . import kernels
from .operators import LabeledOperator, check_budget, make_labels
from .symrep import Permutation, all_permutations, axial_distance, character_by_class
from .young import (
    StandardTableau,
    YoungDiagram,
    as_diagram,
    enumerate_partitions,
    enumerate_tableaux,
    num_tableaux,
    tableau_index,
)


def perm_images(pi: Permutation) -> np.ndarray:
    """0-based slot map of P(pi): the factor in slot j moves to slot pi(j)."""
    return np.asarray(pi.images, dtype=np.int64) - 1


def perm_matrix(pi: Permutation, d: int) -> np.ndarray:
    """Real 0/1 matrix of P(pi) on n = pi.n factors of dimension d."""
    dim = d**pi.n
    check_budget(dim * dim, "permutation matrix", itemsize=8)
    idx = kernels.perm_index_map(perm_images(pi), d)
    out = np.zeros((dim, dim))
    out[idx, np.arange(dim)] = 1.0
    return out


def apply_perm(pi: Permutation, vecs: np.ndarray, d: int) -> np.ndarray:
    """P(pi) applied to the rows of ``vecs`` (first axis is the tensor index)."""
    idx = kernels.perm_index_map(perm_images(pi), d)
    out = np.empty_like(vecs)
    out[idx] = vecs
    return out


def perm_action(pi: Permutation, labels) -> LabeledOperator:
    """P(pi) permuting the given ordered factors; the order, not the ids, fixes the action."""
    labels = tuple(labels)
    if len(labels) != pi.n:
        raise ValueError(f"{pi.n} factors needed, got {len(labels)}")
    dims = {lab.dim for lab in labels}
    if len(dims) > 1:
        raise ValueError(f"permutation action needs equal dimensions, got {sorted(dims)}")
    d = dims.pop() if dims else 1
    return LabeledOperator(labels, perm_matrix(pi, d))


def dim_Q(shape, d: int) -> int:
    """Dimension of the U(d) irrep: prod (d + c) / h over boxes, 0 if too many rows."""
    shape = as_diagram(shape)
    if shape.length > d:
        return 0
    value = Fraction(1)
    for box in shape.boxes():
        value *= Fraction(d + box.content, box.hook)
    assert value.denominator == 1
    return int(value)


@lru_cache(maxsize=64)
def _perm_maps(k: int, d: int) -> tuple[tuple[Permutation, ...], np.ndarray]:
    perms = tuple(all_permutations(k))
    maps = np.stack([kernels.perm_index_map(perm_images(p), d) for p in perms]) if perms else np.zeros((0, 1), np.int64)
    return perms, maps


@lru_cache(maxsize=256)
def tensor_isotypic_projector(rows: tuple[int, ...], d: int) -> np.ndarray:
    """e_lambda acting on (C^d)^{otimes k}, k = |lambda| (real, read-only)."""
    shape = YoungDiagram(rows)
    k = shape.n
    if k == 0:
        out = np.ones((1, 1))
        out.flags.writeable = False
        return out
    check_budget(d ** (2 * k), "isotypic projector", itemsize=8)
    perms, maps = _perm_maps(k, d)
    scale = num_tableaux(shape) / math.factorial(k)
    coeffs = np.array([scale * character_by_class(rows, p.cycle_type().rows) for p in perms])
    out = kernels.perm_sum(maps, coeffs, d**k)
    out.flags.writeable = False
    return out


@dataclass
class SchurBasis:
    """Young-basis vectors ``blocks[lambda][:, q, t]`` of (C^d)^{otimes n}.

    ``t`` indexes tableaux in canonical order; all blocks are real.
    """

    d: int
    n: int
    blocks: dict = field(default_factory=dict)

    @property
    def shapes(self) -> list[YoungDiagram]:
        return [YoungDiagram(rows) for rows in self.blocks]

    def block(self, shape) -> np.ndarray:
        shape = as_diagram(shape)
        try:
            return self.blocks[shape.rows]
        except KeyError:
            raise KeyError(f"{shape} is not a shape of the (d={self.d}, n={self.n}) Schur basis") from None

    def dim_Q(self, shape) -> int:
        return dim_Q(shape, self.d)

    def vector(self, shape, q: int, tableau: StandardTableau) -> np.ndarray:
        shape = as_diagram(shape)
        return self.block(shape)[:, q, tableau_index(shape.rows)[tableau]]

    def unitary(self) -> np.ndarray:
        """Columns ordered by shape, then q, then tableau."""
        cols = [v.reshape(v.shape[0], -1) for v in self.blocks.values()]
        return np.concatenate(cols, axis=1)


def _frame_for_reference(shape: YoungDiagram, d: int, n: int) -> np.ndarray:
    """Orthonormal frame of the range of the chain projector of the first tableau."""
    t0 = enumerate_tableaux(shape)[0]
    proj = np.eye(d**n)
    dim = d**n
    for k, sub in enumerate(t0.chain, start=1):
        e = tensor_isotypic_projector(sub.rows, d)
        rest = d ** (n - k)
        # (e (x) I_rest) @ proj without forming the Kronecker product
        proj = np.einsum("ab,bxc->axc", e, proj.reshape(d**k, rest, dim)).reshape(dim, dim)
    rank = dim_Q(shape, d)
    q, _, _ = scipy.linalg.qr(proj, pivoting=True, mode="economic")
    return q[:, :rank]


@lru_cache(maxsize=32)
def schur_basis(d: int, n: int) -> SchurBasis:
    """Young-basis decomposition of (C^d)^{otimes n} (cached, treat as read-only)."""
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    dim = d**n
    check_budget(dim * dim, "Schur basis construction", itemsize=8)
    basis = SchurBasis(d, n)
    for shape in enumerate_partitions(n, max_rows=d):
        tabs = enumerate_tableaux(shape)
        index = tableau_index(shape.rows)
        rank = dim_Q(shape, d)
        block = np.zeros((dim, rank, len(tabs)))
        if n == 0:
            block[0, 0, 0] = 1.0
            basis.blocks[shape.rows] = block
            continue
        block[:, :, 0] = _frame_for_reference(shape, d, n)
        done = {0}
        queue = deque([tabs[0]])
        while queue:
            t = queue.popleft()
            src = block[:, :, index[t]]
            for i in range(1, n):
                nxt = t.swap(i)
                if nxt is None or index[nxt] in done:
                    continue
                r = axial_distance(t, i)
                moved = apply_perm(Permutation.transposition(i, n), src, d)
                block[:, :, index[nxt]] = (moved - src / r) / math.sqrt(1.0 - 1.0 / (r * r))
                done.add(index[nxt])
                queue.append(nxt)
        assert len(done) == len(tabs)
        block.flags.writeable = False
        basis.blocks[shape.rows] = block
    return basis


def _tableau_matrix(shape: YoungDiagram, tableau_op) -> np.ndarray:
    op = np.asarray(tableau_op)
    size = num_tableaux(shape)
    if op.shape != (size, size):
        raise ValueError(f"tableau operator for {shape} must be {size}x{size}, got {op.shape}")
    return op


def unit_tableau_op(shape, t: StandardTableau, s: StandardTableau) -> np.ndarray:
    """|T><S| on the tableau space of ``shape``."""
    shape = as_diagram(shape)
    index = tableau_index(shape.rows)
    op = np.zeros((num_tableaux(shape),) * 2)
    op[index[t], index[s]] = 1.0
    return op


def embed_matrix(basis: SchurBasis, shape, tableau_op) -> np.ndarray:
    """sum_q sum_{T,S} op[T,S] |lambda,q,T><lambda,q,S| as a dense matrix."""
    shape = as_diagram(shape)
    if dim_Q(shape, basis.d) == 0:
        raise ValueError(f"{shape} has no multiplicity space for d={basis.d}")
    op = _tableau_matrix(shape, tableau_op)
    v = basis.block(shape)
    return np.einsum("xqt,ts,yqs->xy", v, op, v, optimize=True)


def embed_block(basis: SchurBasis, shape, tableau_op, labels=None) -> LabeledOperator:
    if labels is None:
        labels = make_labels(range(1, basis.n + 1), basis.d)
    return LabeledOperator(labels, embed_matrix(basis, shape, tableau_op))


def extract_block(basis: SchurBasis, shape, operator) -> np.ndarray:
    """Tableau matrix (1/dimQ) sum_q <lambda,q,T| X |lambda,q,S>."""
    shape = as_diagram(shape)
    x = operator.matrix if isinstance(operator, LabeledOperator) else np.asarray(operator)
    v = basis.block(shape)
    return np.einsum("xqt,xy,yqs->ts", v, x, v, optimize=True) / v.shape[1]


def _trace_last(x: np.ndarray, d: int) -> np.ndarray:
    m = x.shape[0] // d
    return x.reshape(m, d, m, d).trace(axis1=1, axis2=3)


def verify_raising(basis_prev: SchurBasis, basis: SchurBasis, mu, t: StandardTableau, s: StandardTableau) -> float:
    """Operator-norm gap between embed(mu, |T><S|) (x) I and the sum over mu -> lambda."""
    mu = as_diagram(mu)
    d = basis.d
    if basis_prev.d != d or basis_prev.n + 1 != basis.n:
        raise ValueError("bases must have the same d and consecutive n")
    if t.shape != mu or s.shape != mu:
        raise ValueError("tableaux must have shape mu")
    lhs = np.kron(embed_matrix(basis_prev, mu, unit_tableau_op(mu, t, s)), np.eye(d))
    rhs = np.zeros_like(lhs)
    for lam in mu.children():
        if lam.length > d:
            continue
        rhs += embed_matrix(basis, lam, unit_tableau_op(lam, t.up(lam), s.up(lam)))
    return float(np.linalg.norm(lhs - rhs, 2))


def verify_lowering(basis: SchurBasis, lam, t: StandardTableau, s: StandardTableau, basis_prev: SchurBasis | None = None) -> float:
    """Operator-norm gap between tr_last embed(lambda, |T><S|) and its lowered form."""
    lam = as_diagram(lam)
    d = basis.d
    if basis_prev is None:
        basis_prev = schur_basis(d, basis.n - 1)
    if t.shape != lam or s.shape != lam:
        raise ValueError("tableaux must have shape lambda")
    lhs = _trace_last(embed_matrix(basis, lam, unit_tableau_op(lam, t, s)), d)
    t_down, s_down = t.down, s.down
    if t_down.shape != s_down.shape:
        rhs = np.zeros_like(lhs)
    else:
        mu = t_down.shape
        ratio = dim_Q(lam, d) / dim_Q(mu, d)
        rhs = ratio * embed_matrix(basis_prev, mu, unit_tableau_op(mu, t_down, s_down))
    return float(np.linalg.norm(lhs - rhs, 2))


def max_raising_residual(d: int, n: int) -> float:
    """Largest raising residual over all mu |-_d n-1 and T, S in Tab(mu)."""
    prev, cur = schur_basis(d, n - 1), schur_basis(d, n)
    worst = 0.0
    for mu in enumerate_partitions(n - 1, max_rows=d):
        tabs = enumerate_tableaux(mu)
        for t in tabs:
            for s in tabs:
                worst = max(worst, verify_raising(prev, cur, mu, t, s))
    return worst


def max_lowering_residual(d: int, n: int) -> float:
    prev, cur = schur_basis(d, n - 1), schur_basis(d, n)
    worst = 0.0
    for lam in enumerate_partitions(n, max_rows=d):
        tabs = enumerate_tableaux(lam)
        for t in tabs:
            for s in tabs:
                worst = max(worst, verify_lowering(cur, lam, t, s, basis_prev=prev))
    return worst


def equivariance_residual(basis: SchurBasis, pi: Permutation) -> float:
    """max |P(pi)|lambda,q,T> - sum_T' P_lambda(pi)[T',T] |lambda,q,T'>|."""
    from .symrep import irrep_matrix

    worst = 0.0
    for rows, v in basis.blocks.items():
        moved = apply_perm(pi, v, basis.d)
        expected = np.einsum("xqs,st->xqt", v, irrep_matrix(YoungDiagram(rows), pi))
        worst = max(worst, float(np.abs(moved - expected).max()))
    return worst


def tensor_power(u: np.ndarray, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.result_type(u, np.float64))
    for _ in range(n):
        out = np.kron(out, u)
    return out


def shapes_for(d: int, n: int) -> Sequence[YoungDiagram]:
    return enumerate_partitions(n, max_rows=d)

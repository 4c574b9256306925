"""Choi operators, link products and quantum combs.

Vectorization is row-major, ``|X>> = sum_ij X_ij |i>|j>``, so the Choi
operator of a unitary channel is ``|U>><<U|`` on ``(output, input)``.
A comb's teeth are ``(input_id, output_id)`` pairs listed in causal order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .operators import LabeledOperator, SystemLabel, check_budget, identity

MEMORY_LABEL_BASE = 1000


@dataclass
class Comb:
    op: LabeledOperator
    teeth: list[tuple[int, int]]

    def __post_init__(self):
        self.teeth = [(int(a), int(b)) for a, b in self.teeth]
        tooth_ids = [i for pair in self.teeth for i in pair]
        if sorted(tooth_ids) != sorted(self.op.ids):
            raise ValueError(f"teeth {self.teeth} do not match operator labels {self.op.ids}")

    @property
    def n_teeth(self) -> int:
        return len(self.teeth)

    @classmethod
    def with_default_teeth(cls, op: LabeledOperator) -> "Comb":
        """Teeth taken as consecutive pairs of the ascending label ids."""
        ids = sorted(op.ids)
        if len(ids) % 2:
            raise ValueError("a comb needs an even number of labels")
        return cls(op, [(ids[i], ids[i + 1]) for i in range(0, len(ids), 2)])


@dataclass
class CombCheck:
    valid: bool
    min_eig: float
    hermiticity: float
    causality_residuals: list[float] = field(default_factory=list)
    normalization: float = 0.0
    reason: str = ""


def vectorize(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).reshape(-1)


def unvectorize(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v).reshape(rows, cols)


def _label(lab, d: int) -> SystemLabel:
    return lab if isinstance(lab, SystemLabel) else SystemLabel(int(lab), d)


def choi_of_unitary(u: np.ndarray, out_label, in_label) -> LabeledOperator:
    """|U>><<U| with labels ordered (out, in)."""
    u = np.asarray(u, dtype=np.complex128)
    out_lab, in_lab = _label(out_label, u.shape[0]), _label(in_label, u.shape[1])
    v = vectorize(u)
    return LabeledOperator((out_lab, in_lab), np.outer(v, v.conj()))


def choi_of_isometry(v: np.ndarray, out_labels: Sequence[SystemLabel], in_labels: Sequence[SystemLabel]) -> LabeledOperator:
    """|V>><<V| for V mapping the ``in_labels`` space into the ``out_labels`` space."""
    vec = vectorize(np.asarray(v, dtype=np.complex128))
    return LabeledOperator(tuple(out_labels) + tuple(in_labels), np.outer(vec, vec.conj()))


def apply_channel(choi: LabeledOperator, x: np.ndarray, in_id: int, out_id: int) -> np.ndarray:
    """E(X) = tr_in(C (I_out (x) X^T))."""
    c = choi.reorder([out_id, in_id])
    d_out, d_in = c.dims
    t = c.matrix.reshape(d_out, d_in, d_out, d_in)
    return np.einsum("aibj,ji->ab", t, np.asarray(x).T)


def partial_trace(x: LabeledOperator, ids) -> LabeledOperator:
    return x.partial_trace(ids)


def partial_transpose(x: LabeledOperator, ids) -> LabeledOperator:
    return x.partial_transpose(ids)


def link_product(x: LabeledOperator, y: LabeledOperator) -> LabeledOperator:
    """X * Y = tr_a(X^{T_a} Y) over shared labels a; output labels ascending."""
    shared = [i for i in x.ids if i in set(y.ids)]
    for i in shared:
        if x.dim_of(i) != y.dim_of(i):
            raise ValueError(f"label {i} has dimension {x.dim_of(i)} in X but {y.dim_of(i)} in Y")
    x_only = [i for i in x.ids if i not in shared]
    y_only = [i for i in y.ids if i not in shared]
    dx = int(np.prod([x.dim_of(i) for i in x_only], dtype=np.int64))
    dy = int(np.prod([y.dim_of(i) for i in y_only], dtype=np.int64))
    da = int(np.prod([x.dim_of(i) for i in shared], dtype=np.int64))
    check_budget((dx * dy) ** 2, "link product result")
    xs = x.reorder(x_only + shared).matrix.reshape(dx, da, dx, da)
    ys = y.reorder(shared + y_only).matrix.reshape(da, dy, da, dy)
    # sum over row-a and col-a of both, pairing X's row-a with Y's row-a
    xm = xs.transpose(0, 2, 1, 3).reshape(dx * dx, da * da)
    ym = ys.transpose(0, 2, 1, 3).reshape(da * da, dy * dy)
    z = (xm @ ym).reshape(dx, dx, dy, dy).transpose(0, 2, 1, 3).reshape(dx * dy, dx * dy)
    labels = [lab for lab in x.labels if lab.id in x_only] + [lab for lab in y.labels if lab.id in y_only]
    return LabeledOperator(labels, z).canonical()


def _psd_stats(m: np.ndarray) -> tuple[float, float, float]:
    norm = float(np.linalg.norm(m, 2)) if m.size else 0.0
    herm = float(np.linalg.norm(m - m.conj().T, 2)) if m.size else 0.0
    min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()) if m.size else 0.0
    return norm, herm, min_eig


def is_comb(comb: Comb, tol: float = 1e-9) -> CombCheck:
    """PSD test followed by the recursive trace conditions, last tooth first."""
    x = comb.op
    norm, herm, min_eig = _psd_stats(x.matrix)
    if herm > 1e-9 * max(norm, 1.0):
        return CombCheck(False, min_eig, herm, reason="not Hermitian")
    if min_eig < -1e-8 * (1.0 + norm):
        return CombCheck(False, min_eig, herm, reason="not positive semidefinite")
    cur = LabeledOperator(x.labels, x.hermitian_part())
    residuals = []
    valid = True
    reason = ""
    for in_id, out_id in reversed(comb.teeth):
        y = cur.partial_trace([out_id])
        d_in = cur.dim_of(in_id)
        prev = y.partial_trace([in_id]) / d_in
        expected = identity([SystemLabel(in_id, d_in)]).kron(prev)
        res = y.distance(expected)
        residuals.append(res)
        if res > tol * max(1.0, y.op_norm()):
            valid = False
            reason = reason or f"causality fails at tooth ({in_id}, {out_id})"
        cur = prev
    normalization = abs(cur.trace() - 1.0)
    if normalization > tol:
        valid = False
        reason = reason or "final normalization differs from 1"
    return CombCheck(valid, min_eig, herm, residuals, normalization, reason)


# --- random unitaries and combs -------------------------------------------


def haar_isometry(d_out: int, d_in: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random isometry C^d_in -> C^d_out (Ginibre + QR with phase fix)."""
    if d_out < d_in:
        raise ValueError("an isometry needs d_out >= d_in")
    g = (rng.standard_normal((d_out, d_in)) + 1j * rng.standard_normal((d_out, d_in))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_unitary(d: int, rng: np.random.Generator | int | None = None) -> np.ndarray:
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return haar_isometry(d, d, rng)


def random_comb(d: int, n_teeth: int, ancilla_dim: int | None = None, seed: int = 0, first_id: int = 0) -> Comb:
    """Choi operator of a sequential strategy of Haar-random isometries.

    Tooth ``j`` is ``(first_id + 2j, first_id + 2j + 1)``.  Memory between
    teeth has dimension ``ancilla_dim`` (default ``d``) and the final memory
    is traced out.
    """
    if n_teeth < 1:
        raise ValueError("need at least one tooth")
    a = d if ancilla_dim is None else int(ancilla_dim)
    if a < 1:
        raise ValueError("ancilla_dim must be >= 1")
    rng = np.random.default_rng(seed)
    teeth = [(first_id + 2 * j, first_id + 2 * j + 1) for j in range(n_teeth)]
    total = None
    for j, (in_id, out_id) in enumerate(teeth):
        mem_out = SystemLabel(MEMORY_LABEL_BASE + j, a)
        ins = [SystemLabel(in_id, d)] if j == 0 else [SystemLabel(MEMORY_LABEL_BASE + j - 1, a), SystemLabel(in_id, d)]
        d_in = int(np.prod([lab.dim for lab in ins]))
        v = haar_isometry(d * a, d_in, rng)
        step = choi_of_isometry(v, [SystemLabel(out_id, d), mem_out], ins)
        total = step if total is None else link_product(total, step)
    total = total.partial_trace([MEMORY_LABEL_BASE + n_teeth - 1])
    return Comb(total.canonical(), teeth)


def c_u(u: np.ndarray, n: int, first_id: int = 1) -> Comb:
    """(n+1)-fold tensor power of |U>><<U| on teeth (first_id + 2i, first_id + 2i + 1)."""
    u = np.asarray(u, dtype=np.complex128)
    d = u.shape[0]
    check_budget(d ** (4 * (n + 1)), "C_U")
    v = vectorize(u)
    # |U>>^{(x) n+1} with factors ordered (out, in) per tooth, canonicalized below
    vec = np.ones(1, dtype=np.complex128)
    for _ in range(n + 1):
        vec = np.kron(vec, v)
    labels = []
    for i in range(n + 1):
        labels += [SystemLabel(first_id + 2 * i + 1, d), SystemLabel(first_id + 2 * i, d)]
    op = LabeledOperator(labels, np.outer(vec, vec.conj())).canonical()
    return Comb(op, [(first_id + 2 * i, first_id + 2 * i + 1) for i in range(n + 1)])


# --- distances -------------------------------------------------------------


def _choi_out_in(e_choi, out_id=None, in_id=None) -> LabeledOperator:
    if isinstance(e_choi, Comb):
        if e_choi.n_teeth != 1:
            raise ValueError("a channel Choi operator has exactly one tooth")
        in_id, out_id = e_choi.teeth[0]
        e_choi = e_choi.op
    if len(e_choi.labels) != 2:
        raise ValueError("a channel Choi operator has exactly two labels")
    if out_id is None or in_id is None:
        return e_choi
    return e_choi.reorder([out_id, in_id])


def entanglement_fidelity(e_choi, u: np.ndarray, out_id=None, in_id=None) -> float:
    """tr(|U>><<U| C) / d^2 (labels of a bare operator are read as (out, in))."""
    c = _choi_out_in(e_choi, out_id, in_id)
    d = np.asarray(u).shape[0]
    v = vectorize(np.asarray(u, dtype=np.complex128))
    return float((v.conj() @ c.matrix @ v).real) / d**2


def avg_case_distance_to_unitary(e_choi, u: np.ndarray, out_id=None, in_id=None) -> float:
    d = np.asarray(u).shape[0]
    return (d / (d + 1)) * (1.0 - entanglement_fidelity(e_choi, u, out_id, in_id))


def choi_trace_distance(e1, e2) -> float:
    """(1/d) ||C1 - C2||_1 with d the input dimension."""
    c1 = e1.op if isinstance(e1, Comb) else e1
    c2 = e2.op if isinstance(e2, Comb) else e2
    diff = c1 - c2
    d = int(round(np.sqrt(diff.dim)))
    if isinstance(e1, Comb):
        d = c1.dim_of(e1.teeth[0][0])
    return float(np.linalg.svd(diff.matrix, compute_uv=False).sum()) / d


def loewner_dominates_rank_one(m: np.ndarray, psi: np.ndarray, tol: float = 1e-9) -> bool:
    """M >= |psi><psi| for PSD M, via <psi| M^+ |psi> <= 1 on the support of M."""
    m = np.asarray(m)
    psi = np.asarray(psi).ravel()
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    scale = max(float(np.abs(w).max()) if w.size else 0.0, 1.0)
    keep = w > tol * scale
    coeffs = v.conj().T @ psi
    outside = float(np.linalg.norm(coeffs[~keep]))
    if outside > tol * max(1.0, float(np.linalg.norm(psi))):
        return False
    value = float(np.sum(np.abs(coeffs[keep]) ** 2 / w[keep]))
    return value <= 1.0 + tol


def depolarizing_choi(d: int, out_id: int, in_id: int) -> LabeledOperator:
    """Choi operator I (x) I / d of the completely depolarizing channel."""
    return LabeledOperator((SystemLabel(out_id, d), SystemLabel(in_id, d)), np.eye(d * d) / d)

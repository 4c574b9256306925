"""Dense operators over ordered, labelled tensor factors.

A :class:`LabeledOperator` carries a square complex matrix together with the
list of registers it acts on.  The Kronecker convention is "first label most
significant": for labels ``(a, b)`` the basis index is ``i_a * dim_b + i_b``.
Binary operations return their result with labels sorted ascending by id.
"""
from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

DEFAULT_BUDGET_BYTES = 2 * 1024**3


class BudgetError(MemoryError):
    """Raised when an operation would exceed the configured memory budget."""


_budget_override: int | None = None


def budget_bytes() -> int:
    if _budget_override is not None:
        return _budget_override
    env = os.environ.get("COMBFORGE_BUDGET_BYTES")
    if env:
        return int(env)
    return DEFAULT_BUDGET_BYTES


def set_budget_bytes(value: int | None) -> None:
    """Set a process-wide budget; ``None`` restores the env/default lookup."""
    global _budget_override
    _budget_override = None if value is None else int(value)


def check_budget(num_elements: int, what: str, itemsize: int = 16) -> None:
    need = int(num_elements) * itemsize
    limit = budget_bytes()
    if need > limit:
        raise BudgetError(
            f"{what} needs {need / 2**20:.1f} MiB but the memory budget is {limit / 2**20:.1f} MiB "
            "(raise it with --budget-bytes or COMBFORGE_BUDGET_BYTES)"
        )


@dataclass(frozen=True, order=True)
class SystemLabel:
    id: int
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"label {self.id} has non-positive dimension {self.dim}")


def make_labels(ids: Iterable[int], dim: int) -> tuple[SystemLabel, ...]:
    return tuple(SystemLabel(int(i), int(dim)) for i in ids)


def _as_labels(labels) -> tuple[SystemLabel, ...]:
    out = []
    for lab in labels:
        if isinstance(lab, SystemLabel):
            out.append(lab)
        else:
            i, d = lab
            out.append(SystemLabel(int(i), int(d)))
    return tuple(out)


class LabeledOperator:
    """Square matrix acting on ``labels`` (ordered tensor factors)."""

    __slots__ = ("labels", "matrix")

    def __init__(self, labels, matrix):
        labels = _as_labels(labels)
        ids = [lab.id for lab in labels]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate label ids: {ids}")
        matrix = np.asarray(matrix)
        dim = int(np.prod([lab.dim for lab in labels], dtype=np.int64)) if labels else 1
        if matrix.shape != (dim, dim):
            raise ValueError(f"matrix shape {matrix.shape} does not match label dimensions ({dim}, {dim})")
        if not np.iscomplexobj(matrix):
            matrix = matrix.astype(np.complex128)
        self.labels = labels
        self.matrix = matrix

    # -- basic accessors ---------------------------------------------------

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(lab.id for lab in self.labels)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(lab.dim for lab in self.labels)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dim_of(self, label_id: int) -> int:
        for lab in self.labels:
            if lab.id == label_id:
                return lab.dim
        raise KeyError(f"label {label_id} not present in {self.ids}")

    def __repr__(self) -> str:
        return f"LabeledOperator(ids={self.ids}, dims={self.dims})"

    def tensor(self) -> np.ndarray:
        return self.matrix.reshape(self.dims + self.dims)

    def copy(self) -> "LabeledOperator":
        return LabeledOperator(self.labels, self.matrix.copy())

    # -- reordering --------------------------------------------------------

    def reorder(self, ids: Sequence[int]) -> "LabeledOperator":
        """Same operator with tensor factors listed in the order ``ids``."""
        ids = [int(i) for i in ids]
        if sorted(ids) != sorted(self.ids):
            raise ValueError(f"{ids} is not a reordering of {self.ids}")
        if tuple(ids) == self.ids:
            return self
        pos = [self.ids.index(i) for i in ids]
        m = len(pos)
        t = self.tensor().transpose(pos + [m + p for p in pos])
        labels = [self.labels[p] for p in pos]
        return LabeledOperator(labels, np.ascontiguousarray(t).reshape(self.dim, self.dim))

    def canonical(self) -> "LabeledOperator":
        return self.reorder(sorted(self.ids))

    def aligned(self, other: "LabeledOperator") -> "LabeledOperator":
        """``other`` reordered to this operator's label order (dims must agree)."""
        if sorted(self.labels) != sorted(other.labels):
            raise ValueError(f"label sets differ: {self.labels} vs {other.labels}")
        return other.reorder(self.ids)

    # -- algebra -----------------------------------------------------------

    def dagger(self) -> "LabeledOperator":
        return LabeledOperator(self.labels, self.matrix.conj().T)

    def __add__(self, other: "LabeledOperator") -> "LabeledOperator":
        return LabeledOperator(self.labels, self.matrix + self.aligned(other).matrix)

    def __sub__(self, other: "LabeledOperator") -> "LabeledOperator":
        return LabeledOperator(self.labels, self.matrix - self.aligned(other).matrix)

    def __mul__(self, scalar) -> "LabeledOperator":
        return LabeledOperator(self.labels, self.matrix * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "LabeledOperator":
        return LabeledOperator(self.labels, self.matrix / scalar)

    def __matmul__(self, other: "LabeledOperator") -> "LabeledOperator":
        return LabeledOperator(self.labels, self.matrix @ self.aligned(other).matrix)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def kron(self, other: "LabeledOperator") -> "LabeledOperator":
        """Tensor product on disjoint labels (result in canonical order)."""
        shared = set(self.ids) & set(other.ids)
        if shared:
            raise ValueError(f"kron needs disjoint labels, shared: {sorted(shared)}")
        check_budget((self.dim * other.dim) ** 2, "tensor product")
        out = LabeledOperator(self.labels + other.labels, np.kron(self.matrix, other.matrix))
        return out.canonical()

    def partial_trace(self, ids: Iterable[int]) -> "LabeledOperator":
        """Trace out the listed labels; the remaining labels keep their order."""
        ids = set(int(i) for i in ids)
        missing = ids - set(self.ids)
        if missing:
            raise KeyError(f"labels {sorted(missing)} not present in {self.ids}")
        if not ids:
            return self
        m = len(self.labels)
        row = list(range(m))
        col = [m + j if self.labels[j].id not in ids else j for j in range(m)]
        keep = [j for j in range(m) if self.labels[j].id not in ids]
        out_sub = keep + [m + j for j in keep]
        t = np.einsum(self.tensor(), row + col, out_sub)
        labels = [self.labels[j] for j in keep]
        d = int(np.prod([lab.dim for lab in labels], dtype=np.int64)) if labels else 1
        return LabeledOperator(labels, t.reshape(d, d))

    def partial_transpose(self, ids: Iterable[int]) -> "LabeledOperator":
        ids = set(int(i) for i in ids)
        missing = ids - set(self.ids)
        if missing:
            raise KeyError(f"labels {sorted(missing)} not present in {self.ids}")
        m = len(self.labels)
        axes = list(range(2 * m))
        for j, lab in enumerate(self.labels):
            if lab.id in ids:
                axes[j], axes[m + j] = m + j, j
        t = np.ascontiguousarray(self.tensor().transpose(axes))
        return LabeledOperator(self.labels, t.reshape(self.dim, self.dim))

    # -- spectral helpers --------------------------------------------------

    def hermiticity_residual(self) -> float:
        return float(np.linalg.norm(self.matrix - self.matrix.conj().T, 2)) if self.dim else 0.0

    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.matrix + self.matrix.conj().T)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.hermitian_part())

    def op_norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    def distance(self, other: "LabeledOperator") -> float:
        """Operator-norm distance after aligning label orders."""
        return float(np.linalg.norm(self.matrix - self.aligned(other).matrix, 2))

    def allclose(self, other: "LabeledOperator", atol: float = 1e-10) -> bool:
        return np.abs(self.matrix - self.aligned(other).matrix).max() <= atol


def identity(labels) -> LabeledOperator:
    labels = _as_labels(labels)
    d = int(np.prod([lab.dim for lab in labels], dtype=np.int64)) if labels else 1
    return LabeledOperator(labels, np.eye(d, dtype=np.complex128))


def scalar(value: complex) -> LabeledOperator:
    return LabeledOperator((), np.array([[value]], dtype=np.complex128))


def projector(vec: np.ndarray, labels) -> LabeledOperator:
    """|v><v| on ``labels``."""
    vec = np.asarray(vec, dtype=np.complex128).ravel()
    return LabeledOperator(labels, np.outer(vec, vec.conj()))


def kron_all(ops: Sequence[LabeledOperator]) -> LabeledOperator:
    out = scalar(1.0)
    for op in ops:
        out = out.kron(op)
    return out


# --- file formats ----------------------------------------------------------

_MAGIC = b"LOP1"
_TEETH_MAGIC = b"TTH1"


def to_json_dict(op: LabeledOperator, teeth=None) -> dict:
    data = {
        "labels": [{"id": lab.id, "dim": lab.dim} for lab in op.labels],
        "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in op.matrix],
    }
    if teeth is not None:
        data["teeth"] = [[int(a), int(b)] for a, b in teeth]
    return data


def from_json_dict(data: dict) -> tuple[LabeledOperator, list[tuple[int, int]] | None]:
    try:
        labels = [SystemLabel(int(lab["id"]), int(lab["dim"])) for lab in data["labels"]]
        arr = np.asarray(data["matrix"], dtype=np.float64)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed operator JSON: {exc}") from exc
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("matrix entries must be [re, im] pairs")
    op = LabeledOperator(labels, arr[..., 0] + 1j * arr[..., 1])
    teeth = data.get("teeth")
    if teeth is not None:
        teeth = [(int(a), int(b)) for a, b in teeth]
    return op, teeth


def to_binary(op: LabeledOperator, teeth=None) -> bytes:
    parts = [_MAGIC, struct.pack("<I", len(op.labels))]
    for lab in op.labels:
        parts.append(struct.pack("<II", lab.id, lab.dim))
    inter = np.empty(op.matrix.shape + (2,), dtype="<f8")
    inter[..., 0] = op.matrix.real
    inter[..., 1] = op.matrix.imag
    parts.append(inter.tobytes())
    if teeth is not None:
        parts.append(_TEETH_MAGIC + struct.pack("<I", len(teeth)))
        for a, b in teeth:
            parts.append(struct.pack("<II", a, b))
    return b"".join(parts)


def from_binary(buf: bytes) -> tuple[LabeledOperator, list[tuple[int, int]] | None]:
    if buf[:4] != _MAGIC:
        raise ValueError("not a LOP1 operator file")
    (count,) = struct.unpack_from("<I", buf, 4)
    offset = 8
    labels = []
    for _ in range(count):
        i, d = struct.unpack_from("<II", buf, offset)
        labels.append(SystemLabel(i, d))
        offset += 8
    dim = int(np.prod([lab.dim for lab in labels], dtype=np.int64)) if labels else 1
    nbytes = dim * dim * 16
    if len(buf) < offset + nbytes:
        raise ValueError("truncated LOP1 operator file")
    arr = np.frombuffer(buf, dtype="<f8", count=dim * dim * 2, offset=offset).reshape(dim, dim, 2)
    op = LabeledOperator(labels, arr[..., 0] + 1j * arr[..., 1])
    offset += nbytes
    teeth = None
    if len(buf) > offset:
        if buf[offset:offset + 4] != _TEETH_MAGIC:
            raise ValueError("unexpected trailing data in LOP1 file")
        (n_teeth,) = struct.unpack_from("<I", buf, offset + 4)
        offset += 8
        teeth = []
        for _ in range(n_teeth):
            a, b = struct.unpack_from("<II", buf, offset)
            teeth.append((a, b))
            offset += 8
    return op, teeth


def save_operator(path, op: LabeledOperator, teeth=None, fmt: str | None = None) -> None:
    """Write ``op`` as JSON (``.json``) or LOP1 binary (anything else)."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "binary")
    if fmt == "json":
        path.write_text(json.dumps(to_json_dict(op, teeth)))
    elif fmt == "binary":
        path.write_bytes(to_binary(op, teeth))
    else:
        raise ValueError(f"unknown operator format {fmt!r}")


def load_operator(path) -> tuple[LabeledOperator, list[tuple[int, int]] | None]:
    """Read either format, sniffing the LOP1 magic."""
    buf = Path(path).read_bytes()
    if buf[:4] == _MAGIC:
        return from_binary(buf)
    return from_json_dict(json.loads(buf.decode("utf-8")))

"""Three constructions of the Haar moment E_U[ (|U>><<U|)^{otimes k} ].

``haar_moment_rep`` assembles the block formula in the Young basis,
``haar_moment_weingarten`` sums permutation operators weighted by the
Weingarten function, and ``haar_moment_mc`` averages sampled unitaries.
All three return operators on labels ``first_id .. first_id + 2k - 1``, with
tooth ``m`` (0-based) being ``(input, output) = (first_id + 2m, first_id + 2m + 1)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .operators import LabeledOperator, check_budget, make_labels
from .schurweyl import dim_Q, schur_basis
from .symrep import Permutation, all_permutations, character_by_class
from .young import YoungDiagram, as_diagram, enumerate_partitions, num_tableaux

MASK64 = (1 << 64) - 1


def _moment_labels(d: int, k: int, first_id: int):
    """Output register (even offsets + 1) followed by input register."""
    outs = make_labels([first_id + 2 * m + 1 for m in range(k)], d)
    ins = make_labels([first_id + 2 * m for m in range(k)], d)
    return outs + ins


def haar_moment_rep(d: int, n: int, first_id: int = 1) -> LabeledOperator:
    """sum_lambda (1/dimQ) I_Q (x) I_Q (x) |I_P>><<I_P| for k = n + 1 copies."""
    k = n + 1
    dim = d**k
    check_budget(dim**4, "Haar moment")
    basis = schur_basis(d, k)
    out = np.zeros((dim * dim, dim * dim))
    for rows, v in basis.blocks.items():
        q = v.shape[1]
        # W[(x, y), (q, r)] = sum_T V[x, q, T] V[y, r, T]
        w = np.einsum("xqt,yrt->xyqr", v, v, optimize=True).reshape(dim * dim, q * q)
        out += (w @ w.T) / q
    return LabeledOperator(_moment_labels(d, k, first_id), out).canonical()


# --- Weingarten calculus ------------------------------------------------------


def weingarten_exact(sigma_class, d: int) -> Fraction:
    """Wg(sigma, d) = (1/k!^2) sum_{lambda |- k, l(lambda) <= d} dimP^2 chi(sigma) / dimQ."""
    sigma_class = as_diagram(sigma_class)
    return _weingarten_exact(sigma_class.rows, int(d))


@lru_cache(maxsize=None)
def _weingarten_exact(cycle_type: tuple[int, ...], d: int) -> Fraction:
    k = sum(cycle_type)
    total = Fraction(0)
    for lam in enumerate_partitions(k, max_rows=d):
        total += Fraction(num_tableaux(lam) ** 2 * character_by_class(lam.rows, cycle_type), dim_Q(lam, d))
    return total / math.factorial(k) ** 2


def weingarten(sigma_class, d: int) -> float:
    return float(weingarten_exact(sigma_class, d))


@dataclass(frozen=True)
class WeingartenTable:
    k: int
    d: int
    values: dict

    def __call__(self, pi: Permutation) -> Fraction:
        return self.values[pi.cycle_type().rows]


def weingarten_table(k: int, d: int) -> WeingartenTable:
    return WeingartenTable(k, d, {lam.rows: weingarten_exact(lam, d) for lam in enumerate_partitions(k)})


def gram_identity_residual(k: int, d: int) -> Fraction:
    """max_sigma | sum_tau Wg(sigma tau^-1) d^{cycles(tau)} - delta(sigma, e) | (exact)."""
    table = weingarten_table(k, d)
    perms = all_permutations(k)
    worst = Fraction(0)
    e = Permutation.identity(k)
    for sigma in perms:
        total = sum((table(sigma * tau.inverse()) * d ** tau.num_cycles() for tau in perms), Fraction(0))
        worst = max(worst, abs(total - (1 if sigma == e else 0)))
    return worst


def haar_moment_weingarten(d: int, k: int, first_id: int = 1) -> LabeledOperator:
    """sum_{sigma,tau} Wg(sigma tau^-1) P_out(sigma^-1) (x) P_in(tau^-1)."""
    if k > 4:
        raise ValueError("the Weingarten assembly is limited to k <= 4")
    dim = d ** (2 * k)
    check_budget(dim * dim, "Weingarten moment", itemsize=8)
    table = weingarten_table(k, d)
    perms = all_permutations(k)
    maps = []
    coeffs = []
    for sigma in perms:
        s_inv = np.asarray(sigma.inverse().images) - 1
        for tau in perms:
            t_inv = np.asarray(tau.inverse().images) - 1
            images = np.concatenate([s_inv, t_inv + k])
            maps.append(kernels.perm_index_map(images, d))
            coeffs.append(float(table(sigma * tau.inverse())))
    mat = kernels.perm_sum(np.stack(maps), np.asarray(coeffs), dim)
    return LabeledOperator(_moment_labels(d, k, first_id), mat).canonical()


# --- Monte Carlo ------------------------------------------------------------------


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def shard_seeds(seed: int, count: int) -> list[int]:
    """Per-shard seeds: successive splitmix64 outputs starting from ``seed``."""
    state = int(seed) & MASK64
    out = []
    for _ in range(count):
        state, z = splitmix64(state)
        out.append(z)
    return out


def haar_unitaries(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Batch of Haar unitaries, shape (count, d, d)."""
    g = (rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=1, axis2=2)
    return q * (diag / np.abs(diag))[:, None, :]


def _shard_sum(d: int, k: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    us = haar_unitaries(d, count, rng)
    vecs = us.reshape(count, d * d)
    full = vecs
    for _ in range(k - 1):
        full = np.einsum("ba,bc->bac", full, vecs).reshape(count, -1)
    return full.T @ full.conj()


def haar_moment_mc(
    d: int,
    k: int,
    samples: int,
    seed: int,
    first_id: int = 1,
    shard_size: int = 4096,
    threads: int = 1,
) -> LabeledOperator:
    """Empirical mean of (|U>><<U|)^{otimes k}; deterministic for a given seed.

    Samples are split into shards of ``shard_size``; shard ``s`` draws from
    a generator seeded with the ``s``-th splitmix64 output of ``seed``.  Shard
    sums are added in shard order, so the result does not depend on
    ``threads``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    dim = d ** (2 * k)
    check_budget(dim * dim, "Monte Carlo moment")
    n_shards = -(-samples // shard_size)
    counts = [shard_size] * (n_shards - 1) + [samples - shard_size * (n_shards - 1)]
    seeds = shard_seeds(seed, n_shards)
    jobs = list(zip(counts, seeds))
    if threads > 1 and n_shards > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _shard_sum(d, k, *job), jobs))
    else:
        parts = [_shard_sum(d, k, c, s) for c, s in jobs]
    total = np.zeros((dim, dim), dtype=np.complex128)
    for part in parts:
        total += part
    total /= samples
    total = 0.5 * (total + total.conj().T)
    # vec(U)^{otimes k} lists (out, in) per copy
    labels = []
    for m in range(k):
        labels += make_labels([first_id + 2 * m + 1, first_id + 2 * m], d)
    return LabeledOperator(labels, total).canonical()


def moment(d: int, k: int, method: str = "rep", samples: int = 100_000, seed: int | None = None, threads: int = 1) -> LabeledOperator:
    if method == "rep":
        return haar_moment_rep(d, k - 1)
    if method == "weingarten":
        return haar_moment_weingarten(d, k)
    if method == "mc":
        if seed is None:
            raise ValueError("the Monte Carlo method needs a seed")
        return haar_moment_mc(d, k, samples, seed, threads=threads)
    raise ValueError(f"unknown moment method {method!r}")

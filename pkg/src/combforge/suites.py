"""Verification suites shared by the CLI and the acceptance tests."""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import young
from .certify import certify, check_moment_bound, identity_protocol
from .comb import haar_unitary, random_comb
from .haarmoment import gram_identity_residual, haar_moment_mc, haar_moment_rep, haar_moment_weingarten
from .report import Check, VerificationReport
from .schurweyl import (
    dim_Q,
    embed_matrix,
    equivariance_residual,
    max_lowering_residual,
    max_raising_residual,
    perm_matrix,
    schur_basis,
    tensor_power,
)
from .stair import check_stair_bound, check_stair_dominates_moment, check_stair_contraction, stair_gram_exact, padded_stair
from .symrep import (
    Permutation,
    all_permutations,
    character,
    embed_permutation,
    irrep_matrix,
    restriction_blocks,
    transposition_action,
)

SUITES = (
    "young-identities",
    "symrep",
    "schurweyl",
    "raising-lowering",
    "haar",
    "lemma38",
    "lemma39",
    "cor310",
    "thm36",
)
RANDOMIZED = {"schurweyl", "haar", "cor310", "thm36"}

IDENTITY_MAX_N = 8
KEROV_MAX_N = 12
SYMREP_MAX_N = 6
LAGRANGE_INSTANCES = 1000
DEFAULT_RANDOM_COMBS = 50
DEFAULT_MC_SAMPLES = 100_000


class ConfigError(ValueError):
    """Invalid suite configuration (maps to exit status 2)."""


@dataclass
class SuiteConfig:
    suite: str
    d: int = 2
    n: int = 1
    k: int | None = None
    tol: float = 1e-8
    seed: int | None = None
    samples: int | None = None
    threads: int = 1
    budget_bytes: int | None = None
    fmt: str = "json"
    out: str | None = None

    def validate(self) -> None:
        if self.suite not in SUITES + ("all",):
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.d < 2:
            raise ConfigError("--d must be >= 2")
        if self.n < 1:
            raise ConfigError("--n must be >= 1")
        if self.k is not None and not 1 <= self.k <= self.n:
            raise ConfigError("--k must satisfy 1 <= k <= n")
        if not self.tol > 0:
            raise ConfigError("--tol must be positive")
        if self.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if self.samples is not None and self.samples < 0:
            raise ConfigError("--samples must be >= 0")
        needs_seed = self.suite in RANDOMIZED or self.suite == "all"
        if needs_seed and self.seed is None:
            raise ConfigError(f"suite {self.suite!r} is randomized and needs --seed")

    def params(self) -> dict:
        return {
            "suite": self.suite,
            "d": self.d,
            "n": self.n,
            "k": self.k,
            "tol": self.tol,
            "seed": self.seed,
            "samples": self.samples,
        }


def _ordered_map(fn: Callable, items, threads: int) -> list:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# --- young ------------------------------------------------------------------------


def kerov_residuals(max_n: int) -> tuple[int, int]:
    """Counts of (add, remove) transition ratios that differ from the hook-formula ratio."""
    bad_add = bad_remove = 0
    for lam in young.iter_all_partitions(max_n):
        seq = young.interlacing(lam)
        for k, alpha in enumerate(seq.alphas):
            if lam.n + 1 <= max_n:
                bigger = young.add_box_at_content(lam, alpha)
                if young.add_box_ratio(lam, k) != Fraction(young.num_tableaux(bigger), young.num_tableaux(lam)):
                    bad_add += 1
        corners = sorted(lam.removable_cells(), key=lambda rc: rc[1] - rc[0])
        for k, (r, _) in enumerate(corners):
            smaller = lam.remove_box(r)
            if young.remove_box_ratio(lam, k) != Fraction(young.num_tableaux(smaller), young.num_tableaux(lam)):
                bad_remove += 1
    return bad_add, bad_remove


def identity_residuals(max_n: int) -> dict[str, tuple[Fraction, int]]:
    """Largest exact residual and tuple count for each closed-form identity."""
    out = {}
    worst, count = Fraction(0), 0
    for n in range(1, max_n + 1):
        for mu, nu in young.admissible_adjacent_pairs(n):
            worst = max(worst, young.check_hook_ratio_identity(mu, nu))
            count += 1
    out["hook_ratio"] = (worst, count)
    worst_z = worst_i = Fraction(0)
    count_z = count_i = 0
    for nu in young.iter_all_partitions(max_n, min_n=1):
        parents = nu.parents()
        for tau in parents:
            worst_i = max(worst_i, young.check_inverse_square_identity(nu, tau))
            count_i += 1
        for tau, kappa in itertools.permutations(parents, 2):
            worst_z = max(worst_z, young.check_zero_sum_identity(nu, tau, kappa))
            count_z += 1
    out["zero_sum"] = (worst_z, count_z)
    out["inverse_square"] = (worst_i, count_i)
    return out


def random_lagrange_instances(count: int, seed: int, max_len: int = 6):
    """Distinct rationals p/q with |p| <= 40, 1 <= q <= 6; L in 2..max_len."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        length = int(rng.integers(2, max_len + 1))
        values: list[Fraction] = []
        while len(values) < 2 * length - 1:
            v = Fraction(int(rng.integers(-40, 41)), int(rng.integers(1, 7)))
            if v not in values:
                values.append(v)
        m = int(rng.integers(1, length))
        out.append((values[:length], values[length:], m))
    return out


def suite_young(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("young-identities")
    for name, (worst, count) in identity_residuals(IDENTITY_MAX_N).items():
        rep.add(Check(f"{name}_identity_max_residual", worst, Fraction(0), "==", {"max_n": IDENTITY_MAX_N, "tuples": count}))
    seed = 0 if cfg.seed is None else cfg.seed
    worst = max(young.check_lagrange_identity(a, b, m) for a, b, m in random_lagrange_instances(LAGRANGE_INSTANCES, seed))
    rep.add(Check("lagrange_identity_max_residual", worst, Fraction(0), "==", {"instances": LAGRANGE_INSTANCES, "seed": seed, "max_len": 6}))
    bad_add, bad_remove = kerov_residuals(KEROV_MAX_N)
    rep.add(Check("kerov_add_box_mismatches", bad_add, 0, "==", {"max_n": KEROV_MAX_N}))
    rep.add(Check("kerov_remove_box_mismatches", bad_remove, 0, "==", {"max_n": KEROV_MAX_N}))
    bad_interlace = 0
    for lam in young.iter_all_partitions(KEROV_MAX_N):
        seq = young.interlacing(lam)
        if sum(seq.alphas) != sum(seq.betas):
            bad_interlace += 1
    rep.add(Check("interlacing_center_mismatches", bad_interlace, 0, "==", {"max_n": KEROV_MAX_N}))
    seq = young.interlacing((6, 5, 3, 3, 2, 1, 1, 1))
    rep.add(Check("interlacing_example", [list(seq.alphas), list(seq.betas)], [[-8, -4, -2, 1, 4, 6], [-7, -3, -1, 3, 5]], "==", {"shape": [6, 5, 3, 3, 2, 1, 1, 1]}))
    bad_count = 0
    for n in range(0, 11):
        parts = young.enumerate_partitions(n)
        if sum(young.num_tableaux(p) ** 2 for p in parts) != math.factorial(n):
            bad_count += 1
        for lam in parts:
            if len(young.enumerate_tableaux(lam)) != young.num_tableaux(lam):
                bad_count += 1
            if n and sum(young.num_tableaux(mu) for mu in lam.parents()) != young.num_tableaux(lam):
                bad_count += 1
    rep.add(Check("tableau_count_mismatches", bad_count, 0, "==", {"max_n": 10}))
    return rep


# --- symrep -----------------------------------------------------------------------


def symrep_residuals(max_n: int, seed: int = 0) -> dict[str, float]:
    rng = np.random.default_rng(seed)
    out = {"involution": 0.0, "commutation": 0.0, "braid": 0.0, "orthogonality": 0.0, "homomorphism": 0.0, "branching": 0.0, "char_orthogonality": 0.0}
    for n in range(1, max_n + 1):
        parts = young.enumerate_partitions(n)
        perms = all_permutations(n)
        for lam in parts:
            size = young.num_tableaux(lam)
            eye = np.eye(size)
            mats = [transposition_action(lam, i) for i in range(1, n)]
            for i, m in enumerate(mats):
                out["involution"] = max(out["involution"], np.abs(m @ m - eye).max())
                out["orthogonality"] = max(out["orthogonality"], np.abs(m @ m.T - eye).max())
                if i + 1 < len(mats):
                    braid = np.linalg.matrix_power(m @ mats[i + 1], 3)
                    out["braid"] = max(out["braid"], np.abs(braid - eye).max())
                for j in range(i + 2, len(mats)):
                    out["commutation"] = max(out["commutation"], np.abs(m @ mats[j] - mats[j] @ m).max())
            for _ in range(10):
                a, b = perms[rng.integers(len(perms))], perms[rng.integers(len(perms))]
                err = np.abs(irrep_matrix(lam, a * b) - irrep_matrix(lam, a) @ irrep_matrix(lam, b)).max()
                out["homomorphism"] = max(out["homomorphism"], err)
            if n >= 2:
                blocks = restriction_blocks(lam)
                mask = np.zeros((size, size), dtype=bool)
                for _, idx in blocks:
                    mask[np.ix_(idx, idx)] = True
                for p in all_permutations(n - 1):
                    full = embed_permutation(p, n)
                    m = irrep_matrix(lam, full)
                    err = np.abs(m[~mask]).max() if (~mask).any() else 0.0
                    for mu, idx in blocks:
                        err = max(err, np.abs(m[np.ix_(idx, idx)] - irrep_matrix(mu, p)).max())
                    out["branching"] = max(out["branching"], err)
        chars = np.array([[character(lam, p) for p in perms] for lam in parts])
        gram = chars @ chars.T / math.factorial(n)
        out["char_orthogonality"] = max(out["char_orthogonality"], np.abs(gram - np.eye(len(parts))).max())
    return {k: float(v) for k, v in out.items()}


def suite_symrep(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("symrep")
    seed = 0 if cfg.seed is None else cfg.seed
    for name, value in symrep_residuals(SYMREP_MAX_N, seed).items():
        rep.add(Check(f"{name}_residual", value, 1e-10, "<=", {"max_n": SYMREP_MAX_N}))
    bad = sum(
        sum(young.num_tableaux(p) ** 2 for p in young.enumerate_partitions(n)) != math.factorial(n)
        for n in range(SYMREP_MAX_N + 1)
    )
    rep.add(Check("dim_square_sum_mismatches", bad, 0, "==", {"max_n": SYMREP_MAX_N}))
    return rep


# --- schurweyl --------------------------------------------------------------------


def suite_schurweyl(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("schurweyl")
    d, n = cfg.d, cfg.n
    rng = np.random.default_rng(cfg.seed)
    for m in range(1, n + 1):
        params = {"d": d, "n": m}
        basis = schur_basis(d, m)
        u = basis.unitary()
        rep.add(Check("basis_unitarity", float(np.abs(u.T @ u - np.eye(d**m)).max()), 1e-10, "<=", params))
        count = sum(dim_Q(lam, d) * young.num_tableaux(lam) for lam in young.enumerate_partitions(m, max_rows=d))
        rep.add(Check("dimension_count", count, d**m, "==", params))
        equiv = max(equivariance_residual(basis, p) for p in all_permutations(m))
        rep.add(Check("equivariance", equiv, 1e-9, "<=", params))
        worst = 0.0
        for _ in range(20):
            big = tensor_power(haar_unitary(d, rng), m)
            for lam in basis.shapes:
                x = embed_matrix(basis, lam, np.eye(young.num_tableaux(lam)))
                worst = max(worst, float(np.linalg.norm(big @ x - x @ big, 2)))
        rep.add(Check("commutant", worst, 1e-8, "<=", params))
        perms = all_permutations(m)
        hom = 0.0
        for _ in range(5):
            a, b = perms[rng.integers(len(perms))], perms[rng.integers(len(perms))]
            hom = max(hom, float(np.abs(perm_matrix(a, d) @ perm_matrix(b, d) - perm_matrix(a * b, d)).max()))
        rep.add(Check("perm_action_homomorphism", hom, 0.0, "<=", params))
    return rep


def suite_raising_lowering(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("raising-lowering")
    for m in range(1, cfg.n + 1):
        params = {"d": cfg.d, "n": m}
        rep.add(Check("raising_max_residual", max_raising_residual(cfg.d, m), 1e-8, "<=", params))
        rep.add(Check("lowering_max_residual", max_lowering_residual(cfg.d, m), 1e-8, "<=", params))
    return rep


# --- haar -------------------------------------------------------------------------


def suite_haar(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("haar")
    d = cfg.d
    k = cfg.k if cfg.k is not None else cfg.n + 1
    params = {"d": d, "k": k}
    moment = haar_moment_rep(d, k - 1)
    rep.add(Check("rep_vs_weingarten", moment.distance(haar_moment_weingarten(d, k)), 1e-9, "<=", params))
    if d >= k:
        rep.add(Check("weingarten_gram_identity", gram_identity_residual(k, d), Fraction(0), "==", params))
    even = [2 * m + 2 for m in range(k)]
    reduced = moment.partial_trace(even)
    rep.add(Check("trace_over_outputs_is_identity", float(np.abs(reduced.matrix - np.eye(reduced.dim)).max()), 1e-10, "<=", params))
    rep.add(Check("min_eig", float(moment.eigvalsh().min()), -1e-10, ">=", params))
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(10):
        v, w = haar_unitary(d, rng), haar_unitary(d, rng)
        # ids ascending: input (odd) then output (even) per copy
        big = tensor_power(np.kron(w, v), k)
        worst = max(worst, float(np.linalg.norm(big @ moment.matrix - moment.matrix @ big, 2)))
    rep.add(Check("unitary_invariance", worst, 1e-8, "<=", params))
    if k <= 3:
        worst = 0.0
        for pi in all_permutations(k):
            p = perm_matrix(pi, d)
            both = moment.reorder(even + [2 * m + 1 for m in range(k)])
            big = np.kron(p, p)
            worst = max(worst, float(np.linalg.norm(big @ both.matrix @ big.T - both.matrix, 2)))
        rep.add(Check("simultaneous_permutation_invariance", worst, 1e-8, "<=", params))
    samples = DEFAULT_MC_SAMPLES if cfg.samples is None else cfg.samples
    if samples > 0:
        mc = haar_moment_mc(d, k, samples, cfg.seed, threads=cfg.threads)
        rep.add(Check("rep_vs_mc", moment.distance(mc), 3e-2, "<=", {**params, "samples": samples}))
    return rep


# --- stair / certify ----------------------------------------------------------------


def suite_lemma38(cfg: SuiteConfig) -> VerificationReport:
    rep = check_stair_dominates_moment(cfg.d, cfg.n, cfg.tol)
    bad = sum(stair_gram_exact(lam) != 1 for lam in young.enumerate_partitions(cfg.n + 1))
    rep.add(Check("gram_quantity_mismatches", bad, 0, "==", {"n": cfg.n}))
    return rep


def suite_lemma39(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("lemma39")
    ks = [cfg.k] if cfg.k is not None else list(range(1, cfg.n + 1))
    for k in ks:
        tol = 1e-10 if k == 1 else cfg.tol
        rep.extend(check_stair_contraction(cfg.d, cfg.n, k, tol))
    return rep


def comb_seeds(seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count, dtype=np.uint32)]


def suite_cor310(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("cor310")
    count = DEFAULT_RANDOM_COMBS if cfg.samples is None else cfg.samples
    ks = [cfg.k] if cfg.k is not None else list(range(1, cfg.n + 1))
    for k in ks:
        stair = padded_stair(cfg.d, cfg.n, k)
        seeds = comb_seeds(cfg.seed + 1000 * k, count)

        def one(s, k=k, stair=stair):
            r = check_stair_bound(random_comb(cfg.d, k + 1, seed=s), cfg.d, cfg.n, k, cfg.tol, stair=stair)
            return r.checks[1].value, r.checks[0].passed

        results = _ordered_map(one, seeds, cfg.threads)
        params = {"d": cfg.d, "n": cfg.n, "k": k, "combs": count}
        rep.add(Check("worst_max_eig", max(v for v, _ in results), (k + 1) / cfg.d + cfg.tol, "<=", params))
        rep.add(Check("label_failures", sum(not ok for _, ok in results), 0, "==", params))
        ident = check_stair_bound(identity_protocol(cfg.d, k), cfg.d, cfg.n, k, cfg.tol, stair=stair)
        rep.add(Check("identity_protocol_max_eig", ident.checks[1].value, (k + 1) / cfg.d + cfg.tol, "<=", params))
    return rep


def suite_thm36(cfg: SuiteConfig) -> VerificationReport:
    rep = VerificationReport("thm36")
    d, n = cfg.d, cfg.n
    count = DEFAULT_RANDOM_COMBS if cfg.samples is None else cfg.samples
    seeds = comb_seeds(cfg.seed, count)

    def one(s):
        return certify(random_comb(d, n + 1, seed=s), d, n, cfg.tol)

    certs = _ordered_map(one, seeds, cfg.threads)
    params = {"d": d, "n": n, "combs": count}
    rep.add(Check("worst_max_eig", max((c.max_eig for c in certs), default=0.0), (n + 1) / d + cfg.tol, "<=", params))
    rep.add(Check("worst_score", max((c.score for c in certs), default=0.0), n + 1 + cfg.tol, "<=", params))
    rep.add(Check("certificate_failures", sum(not c.passed for c in certs), 0, "==", params))
    chain = sum(n < c.bounds["average"] for c in certs)
    rep.add(Check("query_bound_violations", chain, 0, "==", params))
    ident = check_moment_bound(identity_protocol(d, n), d, n, cfg.tol)
    rep.add(Check("identity_protocol_score_error", abs(ident.checks[1].value - 1.0), 1e-9, "<=", params))
    return rep


RUNNERS = {
    "young-identities": suite_young,
    "symrep": suite_symrep,
    "schurweyl": suite_schurweyl,
    "raising-lowering": suite_raising_lowering,
    "haar": suite_haar,
    "lemma38": suite_lemma38,
    "lemma39": suite_lemma39,
    "cor310": suite_cor310,
    "thm36": suite_thm36,
}


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    cfg.validate()
    start = time.perf_counter()
    report = VerificationReport(cfg.suite, cfg.params())
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    for name in names:
        sub = RUNNERS[name](cfg)
        for check in sub.checks:
            check.name = f"{name}/{check.name}" if cfg.suite == "all" else check.name
            report.add(check)
    report.runtime_ms = (time.perf_counter() - start) * 1e3
    return report

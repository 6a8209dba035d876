"""
Random-restart projected gradient search for small ``P(T > k)``.

The objective ``p^T B_k p`` is nonconvex on the simplex, so this is a
heuristic: it reports the best strategy found, re-verified exactly after
snapping to small-denominator rationals, and never claims optimality.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import PathVector
from .game import aw_distribution, tail_prob, uniform_distribution

SEARCH_MAX_K = 6


@dataclass(frozen=True)
class SearchConfig:
    k: int
    restarts: int = 200
    seed: int = 0
    max_iters: int = 2000
    snap_denominator_bound: int = 1000
    tol: float = 1e-13

    def __post_init__(self):
        if not 1 <= self.k <= SEARCH_MAX_K:
            raise ValueError(f"search supports 1 <= k <= {SEARCH_MAX_K}, got {self.k}")
        if self.snap_denominator_bound < 1:
            raise ValueError("snap denominator bound must be >= 1")
        if self.restarts < 1:
            raise ValueError("need at least one restart")


@dataclass
class SearchResult:
    best_strategy: PathVector
    float_value: float
    exact_value: Fraction
    restarts_used: int
    best_restart: int


_ROW = np.array([1.0, 1.0, 0.0])
_ROW_T = _ROW[[0, 2, 1]]


def _apply(p: np.ndarray, k: int, row: np.ndarray) -> np.ndarray:
    arr = p.reshape((3,) * k)
    for axis in range(k):
        arr = row[0] * arr + row[1] * np.roll(arr, -1, axis=axis) + row[2] * np.roll(arr, -2, axis=axis)
    return arr.reshape(-1)


def local_quad_value(k: int, p: np.ndarray) -> tuple[float, np.ndarray]:
    """``p^T A p`` and its gradient ``2 A p`` for ``A = (B_k + B_k^T) / 2``."""
    p = np.asarray(p, dtype=float)
    ap = 0.5 * (_apply(p, k, _ROW) + _apply(p, k, _ROW_T))
    return float(p @ ap), 2.0 * ap


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto ``{p >= 0, sum p = 1}`` (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


def descend(k: int, p0: np.ndarray, max_iters: int, tol: float) -> tuple[np.ndarray, float]:
    """Projected gradient with Armijo backtracking along the projection arc."""
    p = project_simplex(p0)
    f, g = local_quad_value(k, p)
    step = 1.0
    for _ in range(max_iters):
        while True:
            q = project_simplex(p - step * g)
            fq, gq = local_quad_value(k, q)
            d = q - p
            if fq <= f + 1e-4 * float(g @ d) or step < 1e-12:
                break
            step *= 0.5
        if f - fq < tol:
            p, f = (q, fq) if fq < f else (p, f)
            break
        p, f, g = q, fq, gq
        step = min(step * 2.0, 1e3)
    return p, f


def snap(p: np.ndarray, bound: int) -> PathVector:
    """Round each coordinate by continued fractions, then renormalise exactly."""
    fr = [Fraction(float(v)).limit_denominator(bound) if v > 0 else Fraction(0) for v in p]
    total = sum(fr)
    if total == 0:
        raise ValueError("cannot snap the zero vector")
    return PathVector.from_values([f / total for f in fr])


def _start(config: SearchConfig, index: int) -> np.ndarray:
    n = 3 ** config.k
    if index == 0:
        return aw_distribution(config.k).to_float()
    if index == 1:
        return uniform_distribution(config.k).to_float()
    rng = np.random.default_rng([config.seed, index])
    # mix dense and sparse Dirichlet starts; sparse ones reach low-support optima
    alpha = 1.0 if index % 2 else 0.1
    return rng.dirichlet(np.full(n, alpha))


def _one(config: SearchConfig, index: int):
    p, f = descend(config.k, _start(config, index), config.max_iters, config.tol)
    cand = snap(p, config.snap_denominator_bound)
    exact = tail_prob(config.k, cand)
    if exact > f + 1e-9:
        # snapping lost too much; keep the float candidate out of the pool
        return index, f, None, None
    return index, f, cand, exact


def search_tail(config: SearchConfig, threads: int = 1) -> SearchResult:
    """Best exactly verified ``P(T > k)`` over all restarts.

    Restart 0 starts from AW and restart 1 from the uniform strategy; the rest
    use per-restart random streams derived from ``(seed, index)``.  Ties are
    broken by restart index, so the output does not depend on ``threads``.
    """
    idx = range(config.restarts)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda i: _one(config, i), idx))
    else:
        results = [_one(config, i) for i in idx]
    best = None
    for index, f, cand, exact in results:
        if cand is None:
            continue
        if best is None or exact < best[3]:
            best = (index, f, cand, exact)
    if best is None:
        raise RuntimeError("no restart produced a snappable candidate")
    index, f, cand, exact = best
    return SearchResult(cand, f, exact, config.restarts, index)


def float_tail(k: int, p: PathVector) -> float:
    return local_quad_value(k, p.to_float())[0]


def is_stationary(k: int, p: np.ndarray, atol: float = 1e-12) -> bool:
    """Gradient components agree on the support of ``p`` (KKT on the simplex)."""
    _, g = local_quad_value(k, p)
    support = p > 0
    gs = g[support]
    return bool(np.ptp(gs) <= atol and np.all(g[~support] >= gs.min() - atol)) if gs.size else False


__all__ = [
    "SearchConfig",
    "SearchResult",
    "descend",
    "float_tail",
    "is_stationary",
    "local_quad_value",
    "project_simplex",
    "search_tail",
    "snap",
]

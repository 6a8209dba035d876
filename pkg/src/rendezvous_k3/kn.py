"""
Anderson-Weber strategies on K_n, evaluated by enumerating one block.

In each block of ``n - 1`` steps a player either stays at its starting
location or tours the other ``n - 1`` locations in a uniformly random order.
Blocks are independent, so the expected meeting time follows from the
distribution of the first meeting step inside a single block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from scipy.optimize import minimize_scalar

KN_MIN, KN_MAX = 3, 6


@dataclass(frozen=True)
class BlockPolynomials:
    """Per-step first-meeting probabilities as ``A p^2 + B p(1-p) + C (1-p)^2``."""

    n: int
    coeffs: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def meet_dist(self, stay):
        stay_c = 1 - stay
        return [a * stay * stay + b * stay * stay_c + c * stay_c * stay_c
                for a, b, c in self.coeffs]


@dataclass
class KnAwResult:
    n: int
    stay_prob: float
    expected_time: float
    per_block_meet_dist: list
    exact_expected_time: Fraction | None = None

    @property
    def meets(self) -> bool:
        return math.isfinite(self.expected_time)


def _check_n(n: int) -> None:
    if not KN_MIN <= n <= KN_MAX:
        raise ValueError(f"n must lie in [{KN_MIN}, {KN_MAX}], got {n}")


@lru_cache(maxsize=None)
def block_polynomials(n: int) -> BlockPolynomials:
    """Enumerate all (plan, plan, offset) triples of one block exactly."""
    _check_n(n)
    steps = n - 1
    tours = math.factorial(steps)
    counts = [[0, 0, 0] for _ in range(steps)]  # [both stay, one stays, both tour]
    for offset in range(1, n):
        plans_i = [(0, (0,) * steps)] + [(1, t) for t in permutations(range(1, n))]
        others = [loc for loc in range(n) if loc != offset]
        plans_ii = [(0, (offset,) * steps)] + [(1, t) for t in permutations(others)]
        for kind_i, path_i in plans_i:
            for kind_ii, path_ii in plans_ii:
                for t in range(steps):
                    if path_i[t] == path_ii[t]:
                        counts[t][kind_i + kind_ii] += 1
                        break
    coeffs = []
    for both_stay, mixed, both_tour in counts:
        coeffs.append((
            Fraction(both_stay, steps),
            Fraction(mixed, steps * tours),
            Fraction(both_tour, steps * tours * tours),
        ))
    return BlockPolynomials(n, tuple(coeffs))


def _expected_time(dist):
    miss = 1 - sum(dist)
    if miss == 1:
        return None
    survive = 1
    acc = 0
    for q in dist:
        acc += survive
        survive -= q
    return acc / (1 - miss)


def kn_aw_evaluate(n: int, stay) -> KnAwResult:
    """Expected meeting time of AW on ``K_n`` with the given stay probability.

    Pass a :class:`Fraction` for an exact value as well as the float one.
    """
    _check_n(n)
    if not 0 <= stay <= 1:
        raise ValueError(f"stay probability must lie in [0, 1], got {stay}")
    poly = block_polynomials(n)
    exact = None
    if isinstance(stay, (Fraction, int)):
        dist = poly.meet_dist(Fraction(stay))
        exact = _expected_time(dist)
        et = math.inf if exact is None else float(exact)
        dist_f = [float(q) for q in dist]
    else:
        dist_f = [float(q) for q in poly.meet_dist(float(stay))]
        et = _expected_time(dist_f)
        et = math.inf if et is None else float(et)
    return KnAwResult(n, float(stay), et, dist_f, exact)


def kn_aw_optimize(n: int, tol: float = 1e-6) -> KnAwResult:
    """Golden-section minimisation of ET over the stay probability."""
    _check_n(n)
    poly = block_polynomials(n)

    def et(p):
        v = _expected_time([float(q) for q in poly.meet_dist(p)])
        return math.inf if v is None else v

    res = minimize_scalar(et, bracket=(0.0, 0.3, 0.95), method="golden", options={"xtol": tol})
    return kn_aw_evaluate(n, float(res.x))

"""
Meeting matrices, quadratic forms and Anderson-Weber strategies on K3.

Matrices are never materialised.  ``B_k`` and ``M_k`` are sums of the commuting
permutations ``P_i`` and are represented by their first rows; products with
vectors use the Kronecker structure and cost ``O(k 3**k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    INT_LIMIT,
    PathVector,
    _guard,
    _maxabs,
    kron_vec,
)


@dataclass(frozen=True)
class MeetingModel:
    """Per-step non-meeting weights; ``overlook`` is the chance co-located players miss."""

    overlook: Fraction = Fraction(0)

    def __post_init__(self):
        eps = Fraction(self.overlook)
        if not 0 <= eps < 1:
            raise ValueError(f"overlook probability must lie in [0, 1), got {eps}")
        object.__setattr__(self, "overlook", eps)

    @property
    def b1row(self) -> tuple[Fraction, Fraction, Fraction]:
        return (Fraction(1), Fraction(1), self.overlook)

    def scaled_row(self) -> tuple[tuple[int, int, int], int]:
        """First row of ``B_1`` as integers over a common denominator."""
        q = self.overlook.denominator
        return (q, q, self.overlook.numerator), q


BASELINE = MeetingModel()


def _model(model) -> MeetingModel:
    if model is None:
        return BASELINE
    if isinstance(model, MeetingModel):
        return model
    return MeetingModel(Fraction(model))


def _check_strategy(p: PathVector, k: int | None = None) -> None:
    if k is not None and p.level != k:
        raise ValueError(f"strategy has level {p.level}, expected {k}")


def is_simplex(p: PathVector) -> bool:
    return p.is_nonnegative() and p.total() == 1


# ---------------------------------------------------------------------------
# first rows

def b_vector(k: int, model=None) -> PathVector:
    """First row of ``B_k``, the Kronecker power of ``(1, 1, eps)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    b1 = PathVector.from_values(_model(model).b1row)
    out = b1
    for _ in range(k - 1):
        out = kron_vec(b1, out)
    return out


def m_vector(k: int, model=None) -> PathVector:
    """First row of ``M_k = J_k + B_1 (x) M_{k-1}``, with ``M_0 = (1)``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    b1 = PathVector.from_values(_model(model).b1row)
    out = PathVector.ones(0)
    for j in range(1, k + 1):
        out = PathVector.ones(j) + kron_vec(b1, out)
    return out


# ---------------------------------------------------------------------------
# structured products

def _circulant_axis(arr: np.ndarray, row, axis: int) -> np.ndarray:
    # out[r] = sum_s row[s] * arr[r + s]
    out = None
    for s, c in enumerate(row):
        if c == 0:
            continue
        term = np.roll(arr, -s, axis=axis) if s else arr
        term = term * c if c != 1 else term
        out = term if out is None else out + term
    if out is None:
        out = np.zeros_like(arr)
    return out


def _transpose_row(row):
    return (row[0], row[2], row[1])


def _matvec_b(num: np.ndarray, k: int, row) -> np.ndarray:
    arr = num.reshape((3,) * k) if k else num
    for axis in range(k):
        arr = _circulant_axis(arr, row, axis)
    return arr.reshape(-1)


def _matvec_m(arr: np.ndarray, k: int, row, q: int) -> np.ndarray:
    """``q**k M_k`` applied to every row of ``arr`` (shape ``(batch, 3**k)``)."""
    if k == 0:
        return arr
    batch = arr.shape[0]
    total = arr.sum(axis=1, keepdims=True) * q ** k
    blocks = arr.reshape(batch, 3, -1)
    mixed = _circulant_axis(blocks, row, axis=1)
    inner = _matvec_m(mixed.reshape(batch * 3, -1), k - 1, row, q)
    return total + inner.reshape(batch, -1)


def matvec_b(k: int, v: PathVector, model=None, transpose: bool = False) -> PathVector:
    """``B_k v`` (or ``B_k^T v``) without forming ``B_k``."""
    if v.level != k:
        raise ValueError(f"vector level {v.level} does not match k={k}")
    row, q = _model(model).scaled_row()
    if transpose:
        row = _transpose_row(row)
    (num,) = _guard(_maxabs(v.num) * (3 * q) ** k, v.num)
    return PathVector(_matvec_b(num, k, row), v.den * q ** k)


def matvec_m(k: int, v: PathVector, model=None) -> PathVector:
    """``M_k v`` by the block recursion on the three level-(k-1) thirds of ``v``."""
    if v.level != k:
        raise ValueError(f"vector level {v.level} does not match k={k}")
    row, q = _model(model).scaled_row()
    (num,) = _guard((k + 1) * _maxabs(v.num) * (3 * q) ** k, v.num)
    out = _matvec_m(num.reshape(1, -1), k, row, q)
    return PathVector(out.reshape(-1), v.den * q ** k)


def quad_form_m(k: int, p: PathVector, model=None) -> Fraction:
    """Exact ``p^T M_k p`` = ``E[min(T, k+1)]`` when both players use ``p``."""
    _check_strategy(p, k)
    return p.dot(matvec_m(k, p, model))


def tail_prob(k: int, p: PathVector, model=None) -> Fraction:
    """Exact ``P(T > k)`` = ``p^T B_k p``."""
    _check_strategy(p, k)
    if k == 0:
        return p.total() ** 2
    return p.dot(matvec_b(k, p, model))


def marginal(p: PathVector, j: int) -> PathVector:
    """Distribution of the first ``j`` moves (sums out the trailing digits)."""
    k = p.level
    if not 0 <= j <= k:
        raise ValueError(f"cannot truncate level {k} to {j}")
    (num,) = _guard(_maxabs(p.num) * 3 ** (k - j), p.num)
    return PathVector(num.reshape(3 ** j, -1).sum(axis=1), p.den)


def tail_sequence(p: PathVector, model=None) -> list[Fraction]:
    """``[P(T > 1), ..., P(T > k)]`` for the strategy ``p``."""
    return [tail_prob(j, marginal(p, j), model) for j in range(1, p.level + 1)]


# ---------------------------------------------------------------------------
# Anderson-Weber family

def aw_block(stay) -> tuple[Fraction, Fraction, Fraction]:
    stay = Fraction(stay)
    if not 0 <= stay <= 1:
        raise ValueError(f"stay probability must lie in [0, 1], got {stay}")
    tour = (1 - stay) / 2
    return stay, tour, tour


def parametric_aw(k: int, stay=Fraction(1, 3)) -> PathVector:
    """AW-type strategy truncated to ``k`` steps.

    Each two-step block is ``00`` with probability ``stay`` and ``12`` or
    ``21`` with probability ``(1 - stay)/2`` each.  For odd ``k`` the lone
    final digit is the first step of an unfinished block.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    s, t, _ = aw_block(stay)
    block = PathVector.from_values([s, 0, 0, 0, 0, t, 0, t, 0])
    lone = PathVector.from_values([s, t, t])
    out = PathVector.ones(0)
    for _ in range(k // 2):
        out = kron_vec(out, block)
    if k % 2:
        out = kron_vec(out, lone)
    return out


def aw_distribution(k: int) -> PathVector:
    return parametric_aw(k, Fraction(1, 3))


def uniform_distribution(k: int) -> PathVector:
    return PathVector.ones(k) / 3 ** k


def parametric_aw_value(k: int, stay, model=None) -> Fraction:
    """``E[min(T, k+1)]`` for the AW family with the given stay probability."""
    return quad_form_m(k, parametric_aw(k, stay), model)


def best_stay_on_grid(k: int, model=None, steps: int = 100) -> tuple[Fraction, Fraction]:
    """Minimise :func:`parametric_aw_value` over ``stay`` in ``{0, 1/steps, ..., 1}``."""
    best = None
    for i in range(steps + 1):
        q = Fraction(i, steps)
        v = parametric_aw_value(k, q, model)
        if best is None or v < best[1]:
            best = (q, v)
    return best


__all__ = [
    "INT_LIMIT",
    "MeetingModel",
    "BASELINE",
    "aw_distribution",
    "b_vector",
    "best_stay_on_grid",
    "is_simplex",
    "m_vector",
    "marginal",
    "matvec_b",
    "matvec_m",
    "parametric_aw",
    "parametric_aw_value",
    "quad_form_m",
    "tail_prob",
    "tail_sequence",
    "uniform_distribution",
]

"""
Construction and verification of the optimality certificate for AW on K3.

For each level ``k`` a vector ``x_k`` defines ``H_k = sum_i x_k(i) P_i``.  The
bound ``w_k`` is proven once ``m_k >= x_k`` entrywise and ``U_k x_k >= 0``; then
``p^T M_k p >= p^T H_k p >= (sum x_k) / 3**k`` on the whole simplex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import (
    PathVector,
    dense_apply,
    dense_character_matrix,
    decode_path,
    encode_path,
    kron_vec,
    real_spectrum,
)
from .game import m_vector

X1 = (2, 2, 1)
X2 = (3, 3, 2, 3, 3, 2, 1, 1, 0)

#: Above this level ``U_k x_k`` comes from the recursion instead of the transform.
TRANSFORM_MAX_K = 12


def a_value(j: int) -> Fraction:
    """Schedule entry ``a_j``; ``3 - a_j`` runs ``1, 2/3, 1/3, 2/9, 1/9, ...``."""
    if j < 3:
        raise ValueError(f"a_j is defined for j >= 3, got {j}")
    if j % 2:
        return 3 - Fraction(1, 3 ** ((j - 3) // 2))
    return 3 - Fraction(2, 3 ** ((j - 2) // 2))


def w_value(k: int) -> Fraction:
    """AW value of ``E[min(T, k+1)]``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k % 2:
        return Fraction(5, 2) - Fraction(5, 2) / 3 ** ((k + 1) // 2)
    return Fraction(5, 2) - Fraction(3, 2) / 3 ** (k // 2)


@dataclass(frozen=True)
class Schedule:
    k: int
    values: tuple[Fraction, ...]

    @classmethod
    def for_level(cls, k: int) -> "Schedule":
        return cls(k, tuple(a_value(j) for j in range(3, k + 1)))

    def __getitem__(self, j: int) -> Fraction:
        if not 3 <= j <= self.k:
            raise KeyError(j)
        return self.values[j - 3]


def _gadget(a: Fraction) -> PathVector:
    return PathVector.from_values([a, a, 2, 2, a, 2, 1, 1, 1])


def x_vector(k: int, base: Sequence | None = None) -> PathVector:
    """Certificate vector ``x_k``.

    ``base`` replaces the level-2 vector; the canonical choice is
    ``(3, 3, 2, 3, 3, 2, 1, 1, 0)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return PathVector.from_values(X1)
    x = PathVector.from_values(X2 if base is None else base)
    if x.level != 2:
        raise ValueError("base vector must have 9 entries")
    first = PathVector.from_values([1, 0, 0])
    middle = PathVector.from_values([0, 1, 0])
    for j in range(3, k + 1):
        x = (PathVector.ones(j) + kron_vec(first, x)
             + kron_vec(kron_vec(middle, _gadget(a_value(j))), PathVector.ones(j - 3)))
    return x


def r_vector(a) -> PathVector:
    """The 27-vector ``U_3((0,1,0) (x) gadget(a))``, written out entry by entry."""
    a = Fraction(a)
    entries = [
        6 + 2 * a, 0, 0, a - 1, 0, a - 2, a - 1, a - 2, 0,
        -3 - a, 2 - a, a - 2, -a, 0, 0, 1, 2 - a, 0,
        -3 - a, a - 2, 2 - a, 1, 0, 2 - a, -a, 0, 0,
    ]
    return PathVector.from_values([Fraction(3, 2) * e for e in entries])


def verify_domination(k: int, x: PathVector | None = None) -> tuple[bool, int | None]:
    """Check ``m_k >= x_k``; returns ``(ok, first violating index)``."""
    if x is None:
        x = x_vector(k)
    idx = (m_vector(k) - x).first_negative()
    return idx is None, idx


def _dense_real_spectrum(x: PathVector) -> PathVector:
    v = dense_character_matrix(x.level)
    return PathVector.from_values([z.real for z in dense_apply(v, x.tolist())])


def spectrum_recursive(k: int, base: Sequence | None = None) -> PathVector:
    """``U_k x_k`` from ``3^k f_k + 1_1 (x) U_{k-1} x_{k-1} + 3^{k-3} r_k (x) f_{k-3}``.

    Only the nine-entry base ``U_2 x_2`` is computed densely; no transform is used.
    """
    if k < 3:
        raise ValueError(f"recursion starts at k=3, got {k}")
    u = _dense_real_spectrum(x_vector(2, base))
    for j in range(3, k + 1):
        u = (PathVector.unit(j) * 3 ** j + kron_vec([1, 1, 1], u)
             + kron_vec(r_vector(a_value(j)), PathVector.unit(j - 3)) * 3 ** (j - 3))
    return u


@dataclass
class SpectrumReport:
    ok: bool
    minimum: Fraction
    first_negative: int | None
    zeros: int
    three_halves: int
    twice_integral: bool
    spectrum: PathVector = field(repr=False)
    method: str = "transform"
    cross_checked: bool = False

    @property
    def size(self) -> int:
        return len(self.spectrum)


def spectrum_of(k: int, x: PathVector | None = None, base=None, method: str = "auto") -> tuple[PathVector, str, bool]:
    """``U_k x_k`` with the preferred method and whether a second route agreed."""
    if x is not None:
        return real_spectrum(x), "transform", False
    if method == "auto":
        method = "transform" if k <= TRANSFORM_MAX_K or k < 3 else "recursive"
    if method == "recursive":
        return spectrum_recursive(k, base), "recursive", False
    if method == "transform":
        u = real_spectrum(x_vector(k, base))
        checked = False
        if 3 <= k <= TRANSFORM_MAX_K:
            if spectrum_recursive(k, base) != u:
                raise AssertionError(f"transform and recursion disagree at k={k}")
            checked = True
        return u, "transform", checked
    raise ValueError(f"unknown method {method!r}")


def verify_spectrum(k: int, x: PathVector | None = None, base=None, method: str = "auto") -> SpectrumReport:
    """Check ``U_k x_k >= 0`` and take a census of the spectrum."""
    u, used, checked = spectrum_of(k, x, base, method)
    neg = u.first_negative()
    twice = u * 2
    return SpectrumReport(
        ok=neg is None,
        minimum=u.min(),
        first_negative=neg,
        zeros=u.count(0),
        three_halves=u.count(Fraction(3, 2)),
        twice_integral=twice.is_integral(),
        spectrum=u,
        method=used,
        cross_checked=checked,
    )


# ---------------------------------------------------------------------------
# the four delicate components of the middle third

T_DIGITS = ((1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 2, 1))


def t_indices(k: int) -> tuple[int, int, int, int]:
    base = 3 ** (k - 1)
    step = 3 ** (k - 3)
    return base, base + step, base + 3 * step, base + 7 * step


def t_direct(k: int, spectrum: PathVector | None = None) -> tuple[Fraction, ...]:
    """Read ``t_k1..t_k4`` straight out of ``U_k x_k``."""
    if k < 3:
        raise ValueError("t-values need k >= 3")
    if spectrum is None:
        spectrum = spectrum_recursive(k)
    return tuple(spectrum[i] for i in t_indices(k))


def _head_sum(hi: int) -> Fraction:
    return sum((3 ** (i - 2) * a_value(i) for i in range(3, hi + 1)), Fraction(0))


def t1_closed(k: int) -> Fraction:
    if k < 3:
        raise ValueError("closed form for t_k1 needs k >= 3")
    return Fraction(3 ** k, 2) + _head_sum(k - 1) - Fraction(3 ** (k - 2), 2) * a_value(k)


def t2_closed(k: int) -> Fraction:
    if k < 5:
        raise ValueError("closed form for t_k2 needs k >= 5")
    return (4 * 3 ** (k - 3) + _head_sum(k - 3)
            - Fraction(3 ** (k - 4), 2) * a_value(k - 2)
            + Fraction(3 ** (k - 3), 2) * a_value(k - 1)
            - Fraction(3 ** (k - 2), 2) * a_value(k))


def t3_closed(k: int) -> Fraction:
    if k < 4:
        raise ValueError("closed form for t_k3 needs k >= 4")
    return (Fraction(3 ** (k - 1), 2) + _head_sum(k - 2)
            - Fraction(3 ** (k - 3), 2) * a_value(k - 1)
            - Fraction(3 ** (k - 2), 2) * a_value(k))


def t4_closed(k: int) -> Fraction:
    if k < 5:
        raise ValueError("closed form for t_k4 needs k >= 5")
    return (5 * 3 ** (k - 3) + _head_sum(k - 3)
            - Fraction(3 ** (k - 4), 2) * a_value(k - 2)
            - Fraction(3 ** (k - 2), 2) * a_value(k))


def first_entry_closed(k: int) -> Fraction:
    """``(U_k x_k)_1 = 2 * 3^k + sum_{i=3..k} 3^{i-2} a_i``."""
    return 2 * 3 ** k + _head_sum(k)


@dataclass
class TValues:
    k: int
    direct: tuple[Fraction, ...]
    closed: tuple[Fraction | None, ...]

    @property
    def agree(self) -> bool:
        return all(c is None or c == d for c, d in zip(self.closed, self.direct))


def t_closed_forms(k: int, spectrum: PathVector | None = None) -> TValues:
    """Closed forms where valid, checked against direct extraction.

    Below the validity threshold of a formula its slot in ``closed`` is
    ``None`` and the direct value stands alone.
    """
    direct = t_direct(k, spectrum)
    closed = (
        t1_closed(k),
        t2_closed(k) if k >= 5 else None,
        t3_closed(k) if k >= 4 else None,
        t4_closed(k) if k >= 5 else None,
    )
    out = TValues(k, direct, closed)
    if not out.agree:
        raise AssertionError(f"closed-form t-values disagree with U_k x_k at k={k}: {out}")
    return out


# ---------------------------------------------------------------------------
# dense certificate matrix

def dense_certificate_matrix(k: int, x: PathVector | None = None, max_k: int = 4) -> list[list[Fraction]]:
    """``H_k = sum_i x(i) P_i``: entry ``(r, c)`` is ``x`` at ``c - r`` digitwise."""
    if k > max_k:
        raise ValueError(f"dense H_k limited to k <= {max_k}")
    if x is None:
        x = x_vector(k)
    n = 3 ** k
    digits = [decode_path(i, k) for i in range(n)]
    vals = x.tolist()
    return [[vals[encode_path((c - r) % 3 for r, c in zip(digits[i], digits[j]))]
             for j in range(n)] for i in range(n)]


def symmetrized(matrix) -> np.ndarray:
    """``(H + H^T) / 2`` as an object array of Fractions."""
    h = np.array(matrix, dtype=object)
    return (h + h.T) / 2


# ---------------------------------------------------------------------------
# bundled verdict

@dataclass
class Certificate:
    k: int
    x: PathVector = field(repr=False)
    schedule: Schedule
    domination_ok: bool
    domination_witness: int | None
    spectrum: SpectrumReport = field(repr=False)
    bound: Fraction
    expected: Fraction
    t_values: TValues | None

    @property
    def spectrum_ok(self) -> bool:
        return self.spectrum.ok

    @property
    def passed(self) -> bool:
        return self.domination_ok and self.spectrum_ok and self.bound == self.expected

    @property
    def failures(self) -> list[str]:
        out = []
        if not self.domination_ok:
            out.append(f"domination m_k >= x_k fails at index {self.domination_witness}")
        if not self.spectrum_ok:
            out.append(f"spectrum U_k x_k >= 0 fails at index {self.spectrum.first_negative}"
                       f" (value {self.spectrum.minimum})")
        if self.bound != self.expected:
            out.append(f"bound {self.bound} differs from w_k = {self.expected}")
        return out


def certify(k: int, base: Sequence | None = None, method: str = "auto") -> Certificate:
    """Build ``x_k`` and run every check; the verdict lists each failed condition."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = x_vector(k, base)
    dom_ok, witness = verify_domination(k, x)
    if k < 3:
        report = verify_spectrum(k, x)
    else:
        report = verify_spectrum(k, base=base, method=method)
    tv = t_closed_forms(k, report.spectrum) if k >= 3 and base is None else None
    return Certificate(
        k=k,
        x=x,
        schedule=Schedule.for_level(k),
        domination_ok=dom_ok,
        domination_witness=witness,
        spectrum=report,
        bound=x.total() / 3 ** k,
        expected=w_value(k),
        t_values=tv,
    )

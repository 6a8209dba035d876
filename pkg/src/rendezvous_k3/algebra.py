"""
Exact arithmetic over Q and Q(omega) for vectors indexed by ternary paths.

A path of length ``k`` is a tuple of digits ``(i_1, ..., i_k)`` in ``{0, 1, 2}``;
digit ``t`` is the player's clockwise offset from its own start at step ``t``.
The flat index of a path reads the digits most-significant first, so the first
move is the leading base-3 digit.

Vectors of rationals are stored as one integer numerator array plus a single
positive denominator.  Numerators live in ``int64`` while they provably fit and
fall back to Python integers (``dtype=object``) otherwise, so no operation in
this module ever rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

#: Magnitude above which numerators are moved to arbitrary-precision storage.
INT_LIMIT = 2 ** 62

#: Largest level for which dense character matrices are built.
DENSE_ORACLE_MAX_K = 3

Rational = Fraction


# ---------------------------------------------------------------------------
# integer array plumbing

def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.flat)
    return int(np.abs(a).max())


def _widen(*arrays: np.ndarray) -> tuple[np.ndarray, ...]:
    return tuple(a.astype(object) if a.dtype != object else a for a in arrays)


def _guard(bound: int, *arrays: np.ndarray) -> tuple[np.ndarray, ...]:
    """Return the arrays, widened to Python ints if ``bound`` may overflow."""
    if bound >= INT_LIMIT:
        return _widen(*arrays)
    return arrays


def _compact(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and _maxabs(a) < INT_LIMIT:
        return a.astype(np.int64)
    return a


def _gcd_all(a: np.ndarray, start: int) -> int:
    if a.size == 0:
        return start
    if a.dtype == object:
        return reduce(math.gcd, (int(v) for v in a.flat), start)
    return math.gcd(int(np.gcd.reduce(a, axis=None)), start)


def _int_array(values: Sequence[int]) -> np.ndarray:
    arr = np.array([int(v) for v in values], dtype=object)
    return _compact(arr)


def _scale(a: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return a
    (a,) = _guard(_maxabs(a) * abs(factor), a)
    return a * factor


def _exact_dot(u: np.ndarray, v: np.ndarray) -> int:
    if u.size == 0:
        return 0
    if u.dtype != object and v.dtype != object:
        if _maxabs(u) * _maxabs(v) * u.size < INT_LIMIT:
            return int(np.dot(u, v))
    return sum(int(x) * int(y) for x, y in zip(u.tolist(), v.tolist()))


def level_of(n: int) -> int:
    """Level ``k`` with ``3**k == n``; raises if ``n`` is not a power of three."""
    k = 0
    m = n
    while m > 1 and m % 3 == 0:
        m //= 3
        k += 1
    if m != 1:
        raise ValueError(f"length {n} is not a power of 3")
    return k


# ---------------------------------------------------------------------------
# path codec

def decode_path(index: int, k: int) -> tuple[int, ...]:
    """Digits of ``index`` in base 3, leading digit first, always ``k`` long."""
    if not 0 <= index < 3 ** k:
        raise IndexError(f"path index {index} out of range for level {k}")
    digits = []
    for _ in range(k):
        index, d = divmod(index, 3)
        digits.append(d)
    return tuple(reversed(digits))


def encode_path(digits: Iterable[int]) -> int:
    index = 0
    for d in digits:
        if d not in (0, 1, 2):
            raise ValueError(f"bad ternary digit {d!r}")
        index = 3 * index + d
    return index


# ---------------------------------------------------------------------------
# Eisenstein rationals

@dataclass(frozen=True)
class Eisenstein:
    """The number ``a + b*omega`` with ``omega = -1/2 + i*sqrt(3)/2``."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def __add__(self, other):
        other = _eis(other)
        return Eisenstein(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Eisenstein(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_eis(other))

    def __rsub__(self, other):
        return _eis(other) - self

    def __mul__(self, other):
        other = _eis(other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return Eisenstein(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1 - b1 * b2)

    __rmul__ = __mul__

    def conj(self) -> "Eisenstein":
        return Eisenstein(self.a - self.b, -self.b)

    @property
    def real(self) -> Fraction:
        return self.a - self.b / 2

    def abs2(self) -> Fraction:
        """``|z|**2``, which is ``a*a - a*b + b*b``."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __complex__(self):
        return complex(float(self.real), float(self.b) * math.sqrt(3) / 2)

    def __repr__(self):
        return f"Eisenstein({self.a}, {self.b})"


def _eis(x) -> Eisenstein:
    if isinstance(x, Eisenstein):
        return x
    return Eisenstein(Fraction(x), Fraction(0))


OMEGA = Eisenstein(0, 1)
OMEGA2 = Eisenstein(-1, -1)


def eis_mul(u: Eisenstein, v: Eisenstein) -> Eisenstein:
    return u * v


# ---------------------------------------------------------------------------
# rational path vectors

class PathVector:
    """Dense vector of ``3**k`` exact rationals, stored as ``num / den``.

    Instances are treated as immutable; every operation returns a new vector
    in lowest terms.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den: int = 1):
        num = np.asarray(num)
        if num.dtype != object and num.dtype != np.int64:
            if not np.issubdtype(num.dtype, np.integer):
                raise TypeError("numerators must be integers; use from_values")
            num = num.astype(np.int64)
        num = num.reshape(-1)
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        level_of(num.size)
        g = _gcd_all(num, den)
        if g > 1:
            num = num // g
            den //= g
        self.num = _compact(num)
        self.num.setflags(write=False)
        self.den = den

    # construction ----------------------------------------------------------

    @classmethod
    def from_values(cls, values: Iterable) -> "PathVector":
        fr = [Fraction(v) for v in values]
        den = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in fr), 1)
        return cls(_int_array([f.numerator * (den // f.denominator) for f in fr]), den)

    @classmethod
    def ones(cls, k: int) -> "PathVector":
        return cls(np.ones(3 ** k, dtype=np.int64))

    @classmethod
    def zeros(cls, k: int) -> "PathVector":
        return cls(np.zeros(3 ** k, dtype=np.int64))

    @classmethod
    def unit(cls, k: int, index: int = 0) -> "PathVector":
        """The indicator of one path; ``unit(k)`` is the first basis vector."""
        num = np.zeros(3 ** k, dtype=np.int64)
        num[index] = 1
        return cls(num)

    # sequence protocol -------------------------------------------------------

    @property
    def level(self) -> int:
        return level_of(self.num.size)

    def __len__(self):
        return self.num.size

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(int(self.num[i]), self.den)

    def __iter__(self):
        for v in self.num.tolist():
            yield Fraction(int(v), self.den)

    def tolist(self) -> list[Fraction]:
        return list(self)

    def to_float(self) -> np.ndarray:
        if self.num.dtype == object:
            return np.array([float(f) for f in self])
        return self.num / self.den

    def __repr__(self):
        head = ", ".join(str(v) for v in self.tolist()[:12])
        more = ", ..." if len(self) > 12 else ""
        return f"PathVector(k={self.level}, [{head}{more}])"

    # arithmetic -------------------------------------------------------------

    def _aligned(self, other: "PathVector") -> tuple[np.ndarray, np.ndarray, int]:
        if len(self) != len(other):
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")
        den = self.den * other.den // math.gcd(self.den, other.den)
        return _scale(self.num, den // self.den), _scale(other.num, den // other.den), den

    def __add__(self, other: "PathVector") -> "PathVector":
        a, b, den = self._aligned(other)
        a, b = _guard(_maxabs(a) + _maxabs(b), a, b)
        return PathVector(a + b, den)

    def __sub__(self, other: "PathVector") -> "PathVector":
        a, b, den = self._aligned(other)
        a, b = _guard(_maxabs(a) + _maxabs(b), a, b)
        return PathVector(a - b, den)

    def __neg__(self) -> "PathVector":
        return PathVector(-self.num, self.den)

    def __mul__(self, c) -> "PathVector":
        c = Fraction(c)
        return PathVector(_scale(self.num, c.numerator), self.den * c.denominator)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "PathVector":
        return self * (1 / Fraction(c))

    def __eq__(self, other):
        if not isinstance(other, PathVector):
            return NotImplemented
        return self.den == other.den and len(self) == len(other) and bool(
            np.all(self.num == other.num))

    __hash__ = None

    def total(self) -> Fraction:
        if self.num.dtype == object or _maxabs(self.num) * len(self) >= INT_LIMIT:
            s = sum(int(v) for v in self.num.tolist())
        else:
            s = int(self.num.sum())
        return Fraction(s, self.den)

    def dot(self, other: "PathVector") -> Fraction:
        if len(self) != len(other):
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")
        return Fraction(_exact_dot(self.num, other.num), self.den * other.den)

    def kron(self, other: "PathVector") -> "PathVector":
        return kron_vec(self, other)

    # order queries ----------------------------------------------------------

    def min(self) -> Fraction:
        if self.num.dtype == object:
            return Fraction(min(int(v) for v in self.num.flat), self.den)
        return Fraction(int(self.num.min()), self.den)

    def first_negative(self) -> int | None:
        """Index of the first strictly negative entry, or ``None``."""
        neg = np.flatnonzero(self.num < 0)
        return int(neg[0]) if neg.size else None

    def is_nonnegative(self) -> bool:
        return self.first_negative() is None

    def count(self, value) -> int:
        value = Fraction(value) * self.den
        if value.denominator != 1:
            return 0
        return int(np.count_nonzero(self.num == int(value)))

    def is_integral(self) -> bool:
        return self.den == 1


def as_path_vector(v) -> PathVector:
    if isinstance(v, PathVector):
        return v
    return PathVector.from_values(v)


def kron_vec(u, v) -> PathVector:
    """Kronecker product; blocks indexed by ``u`` each hold a scaled copy of ``v``."""
    u = as_path_vector(u)
    v = as_path_vector(v)
    a, b = _guard(_maxabs(u.num) * _maxabs(v.num), u.num, v.num)
    return PathVector(np.kron(a, b), u.den * v.den)


# ---------------------------------------------------------------------------
# group actions

def _cube(num: np.ndarray, k: int) -> np.ndarray:
    return num.reshape((3,) * k) if k else num.reshape(())


def apply_permutation(index: int, v: PathVector) -> PathVector:
    """``P_i v``: entry at path ``j`` becomes entry of ``v`` at ``j + i`` digitwise mod 3."""
    k = v.level
    digits = decode_path(index, k)
    arr = _cube(v.num, k)
    for axis, d in enumerate(digits):
        if d:
            arr = np.roll(arr, -d, axis=axis)
    return PathVector(arr.reshape(-1), v.den)


def apply_symmetry(v: PathVector) -> PathVector:
    """Swap digits 1 and 2 in every path index; an involution."""
    k = v.level
    arr = _cube(v.num, k)
    for axis in range(k):
        arr = np.take(arr, [0, 2, 1], axis=axis)
    return PathVector(arr.reshape(-1), v.den)


def primed_index(index: int, k: int) -> int:
    """Index ``i'`` with ``P_i^T = P_{i'}``: digits 1 and 2 exchanged."""
    return encode_path((0, 2, 1)[d] for d in decode_path(index, k))


def permutation_matrix(index: int, k: int) -> np.ndarray:
    """Dense 0/1 matrix of ``P_i`` (small ``k`` only)."""
    n = 3 ** k
    out = np.zeros((n, n), dtype=np.int64)
    digits = decode_path(index, k)
    for r in range(n):
        rd = decode_path(r, k)
        out[r, encode_path((x + y) % 3 for x, y in zip(rd, digits))] = 1
    return out


# ---------------------------------------------------------------------------
# character transform

class EisVector:
    """Dense vector of ``3**k`` Eisenstein rationals ``(a + b*omega) / den``."""

    __slots__ = ("a", "b", "den")

    def __init__(self, a, b, den: int = 1):
        a = np.asarray(a).reshape(-1)
        b = np.asarray(b).reshape(-1)
        if a.shape != b.shape:
            raise ValueError("component length mismatch")
        level_of(a.size)
        den = int(den)
        g = _gcd_all(b, _gcd_all(a, den))
        if g > 1:
            a, b, den = a // g, b // g, den // g
        self.a = _compact(a)
        self.b = _compact(b)
        self.den = den

    @classmethod
    def from_real(cls, v: PathVector) -> "EisVector":
        return cls(v.num, np.zeros_like(v.num), v.den)

    @property
    def level(self) -> int:
        return level_of(self.a.size)

    def __len__(self):
        return self.a.size

    def __getitem__(self, i: int) -> Eisenstein:
        return Eisenstein(Fraction(int(self.a[i]), self.den), Fraction(int(self.b[i]), self.den))

    def tolist(self) -> list[Eisenstein]:
        return [self[i] for i in range(len(self))]

    def real_part(self) -> PathVector:
        a, b = _guard(2 * _maxabs(self.a) + _maxabs(self.b), self.a, self.b)
        return PathVector(2 * a - b, 2 * self.den)

    def conj(self) -> "EisVector":
        a, b = _guard(_maxabs(self.a) + _maxabs(self.b), self.a, self.b)
        return EisVector(a - b, -b, self.den)

    def __eq__(self, other):
        if not isinstance(other, EisVector):
            return NotImplemented
        return (self.den == other.den and len(self) == len(other)
                and bool(np.all(self.a == other.a)) and bool(np.all(self.b == other.b)))

    __hash__ = None

    def __repr__(self):
        return f"EisVector(k={self.level}, den={self.den})"


def _butterflies(a: np.ndarray, b: np.ndarray, k: int, conjugate: bool):
    n = 3 ** k
    for t in range(k):
        # entries grow by at most a factor 7 per pass
        a, b = _guard(7 * max(_maxabs(a), _maxabs(b)), a, b)
        a3 = a.reshape(3 ** t, 3, n // 3 ** (t + 1))
        b3 = b.reshape(3 ** t, 3, n // 3 ** (t + 1))
        a0, a1, a2 = a3[:, 0], a3[:, 1], a3[:, 2]
        b0, b1, b2 = b3[:, 0], b3[:, 1], b3[:, 2]
        # omega*(x + y w) = -y + (x - y) w ; omega^2*(x + y w) = (y - x) - x w
        wa1, wb1 = -b1, a1 - b1
        ua1, ub1 = b1 - a1, -a1
        wa2, wb2 = -b2, a2 - b2
        ua2, ub2 = b2 - a2, -a2
        out_a = np.empty_like(a3)
        out_b = np.empty_like(b3)
        out_a[:, 0] = a0 + a1 + a2
        out_b[:, 0] = b0 + b1 + b2
        if conjugate:
            wa1, wb1, ua1, ub1 = ua1, ub1, wa1, wb1
            wa2, wb2, ua2, ub2 = ua2, ub2, wa2, wb2
        out_a[:, 1] = a0 + wa1 + ua2
        out_b[:, 1] = b0 + wb1 + ub2
        out_a[:, 2] = a0 + ua1 + wa2
        out_b[:, 2] = b0 + ub1 + wb2
        a = out_a.reshape(-1)
        b = out_b.reshape(-1)
    return a, b


def char_transform(v) -> EisVector:
    """``V_k v`` by ``k`` radix-3 butterfly passes, leading digit first.

    Accepts a :class:`PathVector` or an :class:`EisVector`.
    """
    if isinstance(v, PathVector):
        v = EisVector.from_real(v)
    a, b = _butterflies(v.a, v.b, v.level, conjugate=False)
    return EisVector(a, b, v.den)


def conj_transform(v) -> EisVector:
    """``conj(V_k) v``; satisfies ``conj_transform(char_transform(v)) == 3**k v``."""
    if isinstance(v, PathVector):
        v = EisVector.from_real(v)
    a, b = _butterflies(v.a, v.b, v.level, conjugate=True)
    return EisVector(a, b, v.den)


def real_spectrum(v: PathVector) -> PathVector:
    """``U_k v``, the real part of the character transform."""
    return char_transform(v).real_part()


# ---------------------------------------------------------------------------
# dense oracles

V1 = (
    (Eisenstein(1), Eisenstein(1), Eisenstein(1)),
    (Eisenstein(1), OMEGA, OMEGA2),
    (Eisenstein(1), OMEGA2, OMEGA),
)


def kron_matrix(x, y):
    """Kronecker product of two list-of-lists matrices over any ring."""
    return [[xa * yb for xa in xr for yb in yr] for xr in x for yr in y]


def dense_character_matrix(k: int, max_k: int = DENSE_ORACLE_MAX_K) -> list[list[Eisenstein]]:
    """Explicit ``V_k`` as nested lists, built as a Kronecker power of ``V_1``."""
    if k < 0 or k > max_k:
        raise ValueError(f"dense character matrix limited to 0 <= k <= {max_k}, got {k}")
    out = [[Eisenstein(1)]]
    for _ in range(k):
        out = kron_matrix([list(r) for r in V1], out)
    return out


def dense_apply(matrix, vector) -> list:
    """Plain row-by-row matrix-vector product; the slow reference path."""
    vector = list(vector)
    out = []
    for row in matrix:
        acc = 0
        for m, x in zip(row, vector):
            if x:
                acc = m * x + acc
        out.append(acc)
    return out

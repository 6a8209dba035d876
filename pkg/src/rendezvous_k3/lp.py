"""
Dense two-phase primal simplex over the rationals.

Small problems only (a few hundred rows and columns).  Every pivot is exact and
Bland's rule is used throughout, so the method terminates on degenerate LPs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

LE, GE, EQ = "<=", ">=", "=="


@dataclass
class LpProblem:
    """``sense`` objective over ``x`` subject to ``rows[i] . x  relations[i]  rhs[i]``.

    ``bounds[j]`` is ``(lower, upper)`` with ``None`` meaning unbounded; the
    default is ``x >= 0``.
    """

    objective: list[Fraction]
    rows: list[list[Fraction]]
    relations: list[str]
    rhs: list[Fraction]
    sense: str = "max"
    bounds: list[tuple[Fraction | None, Fraction | None]] | None = None
    name: str = ""

    def __post_init__(self):
        n = len(self.objective)
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        if not len(self.rows) == len(self.relations) == len(self.rhs):
            raise ValueError("rows, relations and rhs must have equal length")
        for r in self.rows:
            if len(r) != n:
                raise ValueError("constraint row length does not match objective")
        for rel in self.relations:
            if rel not in (LE, GE, EQ):
                raise ValueError(f"unknown relation {rel!r}")
        if self.bounds is None:
            self.bounds = [(Fraction(0), None)] * n
        if len(self.bounds) != n:
            raise ValueError("bounds length does not match objective")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def violations(self, x: Sequence[Fraction]) -> list[str]:
        """Every constraint or bound that ``x`` breaks, as readable strings."""
        bad = []
        for i, (row, rel, b) in enumerate(zip(self.rows, self.relations, self.rhs)):
            lhs = sum((a * v for a, v in zip(row, x) if a), Fraction(0))
            if (rel == LE and lhs > b) or (rel == GE and lhs < b) or (rel == EQ and lhs != b):
                bad.append(f"row {i}: {lhs} {rel} {b} is false")
        for j, (lo, hi) in enumerate(self.bounds):
            if lo is not None and x[j] < lo:
                bad.append(f"x[{j}] = {x[j]} below {lo}")
            if hi is not None and x[j] > hi:
                bad.append(f"x[{j}] = {x[j]} above {hi}")
        return bad

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), Fraction(0))


@dataclass
class LpSolution:
    status: str
    x: list[Fraction] | None = None
    objective: Fraction | None = None
    basis: tuple[int, ...] = ()
    duals: list[Fraction] | None = None
    ray: list[Fraction] | None = None
    farkas: list[Fraction] | None = None
    pivots: int = 0
    info: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Standard:
    """``max c.z  s.t.  A z = b,  z >= 0,  b >= 0`` plus maps back to the user's ``x``."""

    def __init__(self, prob: LpProblem):
        self.prob = prob
        # each user variable x_j = offset_j + sum(coef * z_col)
        self.var_map: list[tuple[Fraction, list[tuple[int, int]]]] = []
        ncols = 0
        extra_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
        for lo, hi in prob.bounds:
            lo = None if lo is None else Fraction(lo)
            hi = None if hi is None else Fraction(hi)
            if lo is not None and hi is not None and hi < lo:
                raise ValueError("empty variable bound interval")
            if lo is not None:
                self.var_map.append((lo, [(ncols, 1)]))
                if hi is not None:
                    extra_rows.append(({ncols: Fraction(1)}, LE, hi - lo))
                ncols += 1
            elif hi is not None:
                self.var_map.append((hi, [(ncols, -1)]))
                ncols += 1
            else:
                self.var_map.append((Fraction(0), [(ncols, 1), (ncols + 1, -1)]))
                ncols += 2
        self.num_struct = ncols

        rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
        for row, rel, b in zip(prob.rows, prob.relations, prob.rhs):
            coeffs: dict[int, Fraction] = {}
            shift = Fraction(b)
            for j, a in enumerate(row):
                if not a:
                    continue
                a = Fraction(a)
                off, cols = self.var_map[j]
                shift -= a * off
                for col, s in cols:
                    coeffs[col] = coeffs.get(col, Fraction(0)) + s * a
            rows.append((coeffs, rel, shift))
        self.user_rows = len(rows)
        rows.extend(extra_rows)

        sign = 1 if prob.sense == "max" else -1
        c = [Fraction(0)] * ncols
        self.obj_offset = Fraction(0)
        for j, cj in enumerate(prob.objective):
            cj = Fraction(cj) * sign
            off, cols = self.var_map[j]
            self.obj_offset += cj * off
            for col, s in cols:
                c[col] += cj * s
        self.sign = sign

        # slacks, then sign normalisation so that b >= 0
        self.row_flip: list[int] = []
        for coeffs, rel, _ in rows:
            if rel != EQ:
                coeffs[ncols] = Fraction(1 if rel == LE else -1)
                ncols += 1
        c.extend([Fraction(0)] * (ncols - len(c)))
        self.A = []
        self.b = []
        for coeffs, rel, b in rows:
            flip = -1 if b < 0 else 1
            self.row_flip.append(flip)
            dense = [Fraction(0)] * ncols
            for col, a in coeffs.items():
                dense[col] = a * flip
            self.A.append(dense)
            self.b.append(b * flip)
        self.c = c
        self.n = ncols
        self.m = len(rows)

    def user_x(self, z: list[Fraction]) -> list[Fraction]:
        return [off + sum((s * z[col] for col, s in cols), Fraction(0)) for off, cols in self.var_map]


def _pivot(T: list[list[Fraction]], r: int, col: int) -> None:
    prow = T[r]
    piv = prow[col]
    if piv != 1:
        inv = 1 / piv
        T[r] = prow = [v * inv if v else v for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[col]
        if f:
            for j in nz:
                row[j] -= f * prow[j]


def _run_simplex(T, basis, allowed, obj_row, max_pivots):
    """Bland's-rule iterations on tableau ``T`` (objective row at ``obj_row``).

    The objective row stores ``z_j - c_j``; a negative entry may enter.
    Returns ``("optimal"|"unbounded", pivots, entering column)``.
    """
    m = len(basis)
    pivots = 0
    while True:
        z = T[obj_row]
        enter = next((j for j in allowed if z[j] < 0), None)
        if enter is None:
            return "optimal", pivots, None
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded", pivots, enter
        r = best[1]
        _pivot(T, r, enter)
        basis[r] = enter
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("pivot limit exceeded")


def solve_lp_exact(prob: LpProblem, max_pivots: int = 100_000) -> LpSolution:
    """Solve ``prob`` exactly; infeasible and unbounded outcomes carry certificates."""
    std = _Standard(prob)
    m, n = std.m, std.n
    # tableau columns: structural+slack (n), artificial (m), rhs
    T = []
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(std.A[i] + art + [std.b[i]])
    basis = [n + i for i in range(m)]

    # phase 1: maximise -sum(artificials)
    w = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n):
            w[j] -= T[i][j]
        w[-1] -= T[i][-1]
    T.append(w)
    status, p1, _ = _run_simplex(T, basis, range(n), m, max_pivots)
    if T[m][-1] != 0:
        # y with y.A >= 0 on structural columns and y.b < 0
        y = [T[m][n + i] - 1 for i in range(m)]
        farkas = [f * v for f, v in zip(std.row_flip, y)]
        return LpSolution("infeasible", farkas=farkas, pivots=p1,
                          info={"phase1_infeasibility": -T[m][-1]})
    # drive any zero-level artificial out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, i, col)
                basis[i] = col
    T.pop()

    obj = [Fraction(0)] * (n + m + 1)
    for j in range(n):
        obj[j] = -std.c[j]
    for i in range(m):
        cb = std.c[basis[i]] if basis[i] < n else Fraction(0)
        if cb:
            for j, v in enumerate(T[i]):
                if v:
                    obj[j] += cb * v
    T.append(obj)
    status, p2, enter = _run_simplex(T, basis, range(n), m, max_pivots)
    pivots = p1 + p2

    z = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        if bcol < n:
            z[bcol] = T[i][-1]

    if status == "unbounded":
        dz = [Fraction(0)] * n
        dz[enter] = Fraction(1)
        for i, bcol in enumerate(basis):
            if bcol < n:
                dz[bcol] = -T[i][enter]
        ray = [sum((s * dz[col] for col, s in cols), Fraction(0)) for _, cols in std.var_map]
        return LpSolution("unbounded", x=std.user_x(z), ray=ray, pivots=pivots,
                          basis=tuple(basis))

    # reduced cost of artificial column i equals y_i for the flipped row
    y_std = [T[m][n + i] for i in range(m)]
    x = std.user_x(z)
    sol = LpSolution(
        "optimal",
        x=x,
        objective=prob.value(x),
        basis=tuple(basis),
        duals=_user_duals(std, y_std),
        pivots=pivots,
    )
    bad = prob.violations(x)
    if bad:
        raise AssertionError(f"simplex returned an infeasible point: {bad[:3]}")
    return sol


def _user_duals(std: _Standard, y: list[Fraction]) -> list[Fraction]:
    # undo the row sign flips and the max/min sign change; bound rows are dropped
    return [std.sign * f * v for f, v in zip(std.row_flip[:std.user_rows], y[:std.user_rows])]

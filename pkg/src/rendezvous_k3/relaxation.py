"""
LP and SDP relaxations of ``min p^T M_k p`` over the simplex.

The SDP ``max trace(J H) : H <= M_k, H psd`` collapses, for ``H`` in the group
algebra of the ``P_i``, to the LP ``max sum(x) : x <= m_k, U_k x >= 0``.  Dense
builders are for small ``k``; :func:`verify_feasible_bound` is the scalable
check for any candidate ``x``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .algebra import (
    V1,
    PathVector,
    dense_character_matrix,
    kron_matrix,
    primed_index,
    real_spectrum,
)
from .certificate import dense_certificate_matrix
from .game import m_vector
from .lp import EQ, GE, LpProblem, LpSolution, solve_lp_exact

DENSE_LP_MAX_K = 4
SDPA_MAX_K = 3


class InfeasibleCertificate(ValueError):
    """A candidate ``x`` failed ``x <= m_k`` or ``U_k x >= 0``."""

    def __init__(self, condition: str, index: int, value):
        super().__init__(f"{condition} violated at index {index} (value {value})")
        self.condition = condition
        self.index = index
        self.value = value


def dense_real_character_matrix(k: int) -> list[list[Fraction]]:
    """``U_k`` as nested Fractions; ``k = 4`` is one Kronecker step past the oracle."""
    if k > DENSE_LP_MAX_K:
        raise ValueError(f"dense U_k limited to k <= {DENSE_LP_MAX_K}, got {k}")
    if k <= 3:
        v = dense_character_matrix(k)
    else:
        v = kron_matrix([list(r) for r in V1], dense_character_matrix(k - 1))
    return [[z.real for z in row] for row in v]


def build_primal_lp(k: int) -> LpProblem:
    """``max sum(x)`` subject to ``x <= m_k`` and ``U_k x >= 0``; ``x`` is free below."""
    u = dense_real_character_matrix(k)
    m = m_vector(k).tolist()
    n = 3 ** k
    return LpProblem(
        objective=[Fraction(1)] * n,
        rows=u,
        relations=[GE] * n,
        rhs=[Fraction(0)] * n,
        sense="max",
        bounds=[(None, mi) for mi in m],
        name=f"primal-k{k}",
    )


def build_dual_lp(k: int, symmetric: bool = True) -> LpProblem:
    """``min y.m_k`` subject to ``y^T U_k >= 0``, ``sum(y) = 1``, ``y >= 0``.

    With ``symmetric`` the rows ``y_i = y_{i'}`` (digits 1 and 2 swapped) are
    added, which makes ``Y = sum y_i P_i`` a symmetric matrix.  Without them
    the objective can exploit the asymmetry of ``m_k`` and the optimum drops
    below ``w_k`` (``4/3`` at ``k = 1``).
    """
    u = dense_real_character_matrix(k)
    m = m_vector(k).tolist()
    n = 3 ** k
    rows = [[u[i][j] for i in range(n)] for j in range(n)]
    relations = [GE] * n
    rows.append([Fraction(1)] * n)
    relations.append(EQ)
    if symmetric:
        for i in range(n):
            j = primed_index(i, k)
            if j > i:
                row = [Fraction(0)] * n
                row[i], row[j] = Fraction(1), Fraction(-1)
                rows.append(row)
                relations.append(EQ)
    rhs = [Fraction(0)] * len(rows)
    rhs[n] = Fraction(1)
    return LpProblem(
        objective=m,
        rows=rows,
        relations=relations,
        rhs=rhs,
        sense="min",
        name=f"dual-k{k}" + ("" if symmetric else "-literal"),
    )


def solve_primal(k: int) -> tuple[LpSolution, Fraction]:
    """Exact primal optimum and the implied bound ``optimum / 3**k``."""
    sol = solve_lp_exact(build_primal_lp(k))
    if not sol.optimal:
        raise RuntimeError(f"primal LP at k={k} is {sol.status}")
    return sol, sol.objective / 3 ** k


def solve_dual(k: int, symmetric: bool = True) -> LpSolution:
    sol = solve_lp_exact(build_dual_lp(k, symmetric))
    if not sol.optimal:
        raise RuntimeError(f"dual LP at k={k} is {sol.status}")
    return sol


def verify_feasible_bound(k: int, x) -> Fraction:
    """Certified lower bound ``sum(x) / 3**k`` on ``w_k`` for a feasible ``x``.

    Raises :class:`InfeasibleCertificate` naming the first failing entry.
    """
    x = x if isinstance(x, PathVector) else PathVector.from_values(x)
    if x.level != k:
        raise ValueError(f"vector level {x.level} does not match k={k}")
    gap = m_vector(k) - x
    idx = gap.first_negative()
    if idx is not None:
        raise InfeasibleCertificate("x <= m_k", idx, x[idx])
    u = real_spectrum(x)
    idx = u.first_negative()
    if idx is not None:
        raise InfeasibleCertificate("U_k x >= 0", idx, u[idx])
    return x.total() / 3 ** k


# ---------------------------------------------------------------------------
# SDPA sparse format

@dataclass
class SdpaProblem:
    """``max F0 . Y  s.t.  F_l . Y = c_l,  Y psd`` in SDPA block layout.

    ``entries`` holds ``(matno, block, i, j, value)`` with 1-based ``i <= j``.
    """

    c: list[Fraction]
    block_struct: list[int]
    entries: list[tuple[int, int, int, int, Fraction]] = field(default_factory=list)
    comment: str = ""

    @property
    def m(self) -> int:
        return len(self.c)


def build_sdp(k: int) -> SdpaProblem:
    """SDP lower bound ``t / 3**k`` on ``w_k`` in SDPA dual form.

    The unknowns are a possibly nonsymmetric ``H <= M_k`` (elementwise, one
    constraint per ordered pair) and a scalar ``t`` with
    ``(H + H^T)/2 - (t/n) J  psd``.  Then ``p^T M_k p >= p^T H p >= t/n`` on
    the simplex.  Block 1 holds ``Y = (H + H^T)/2 - (t/n) J``; block 2 is
    diagonal and holds ``t``, the antisymmetric part of ``H`` split into
    positive and negative halves, and one slack per ordered pair.
    The objective is ``max t``, which equals ``3**k w_k`` for small ``k``.
    """
    if k > SDPA_MAX_K:
        raise ValueError(f"SDP export limited to k <= {SDPA_MAX_K}")
    n = 3 ** k
    m = m_vector(k).tolist()
    big_m = dense_certificate_matrix(k, PathVector.from_values(m))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    # diagonal block layout: t, then (a+, a-) per unordered pair, then slacks
    t_pos = 1
    anti = {pair: 2 + 2 * q for q, pair in enumerate(pairs)}
    slack0 = 2 + 2 * len(pairs)
    entries = [(0, 2, t_pos, t_pos, Fraction(1))]
    c = []
    half = Fraction(1, 2)
    inv_n = Fraction(1, n)
    for i in range(n):
        for j in range(n):
            ln = len(c) + 1
            lo, hi = min(i, j), max(i, j)
            entries.append((ln, 1, lo + 1, hi + 1, Fraction(1) if i == j else half))
            entries.append((ln, 2, t_pos, t_pos, inv_n))
            if i != j:
                pos = anti[(lo, hi)]
                sign = 1 if i < j else -1
                entries.append((ln, 2, pos, pos, Fraction(sign)))
                entries.append((ln, 2, pos + 1, pos + 1, Fraction(-sign)))
            slot = slack0 + ln - 1
            entries.append((ln, 2, slot, slot, Fraction(1)))
            c.append(big_m[i][j])
    diag = 1 + 2 * len(pairs) + n * n
    return SdpaProblem(c=c, block_struct=[n, -diag], entries=entries,
                       comment=f"rendezvous K3 SDP relaxation, k={k}; bound = optimum / {n}")


def _dec(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return repr(float(v))


def _rat(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def write_sdpa(prob: SdpaProblem, path) -> tuple[Path, Path]:
    """Write ``path`` (``.dat-s``) and a lossless ``.exact.json`` sidecar."""
    path = Path(path)
    lines = [f'"{prob.comment}"', f"{prob.m} = mDIM", f"{len(prob.block_struct)} = nBLOCK",
             " ".join(str(b) for b in prob.block_struct) + " = bLOCKsTRUCT",
             " ".join(_dec(v) for v in prob.c)]
    for mat, blk, i, j, v in prob.entries:
        lines.append(f"{mat} {blk} {i} {j} {_dec(v)}")
    path.write_text("\n".join(lines) + "\n")
    sidecar = path.with_name(path.name.removesuffix(".dat-s") + ".exact.json")
    sidecar.write_text(json.dumps({
        "format": "sdpa-exact",
        "version": 1,
        "comment": prob.comment,
        "block_struct": prob.block_struct,
        "c": [_rat(v) for v in prob.c],
        "entries": [[mat, blk, i, j, _rat(v)] for mat, blk, i, j, v in prob.entries],
    }))
    return path, sidecar


def export_sdpa(k: int, path) -> tuple[Path, Path]:
    return write_sdpa(build_sdp(k), path)


_NUM = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def parse_sdpa(path) -> SdpaProblem:
    """Read a sparse SDPA file; values come back as Fractions of the printed decimals."""
    text = Path(path).read_text().splitlines()
    comment = []
    body = []
    for line in text:
        s = line.strip()
        if not s:
            continue
        if not body and s[0] in '"*':
            comment.append(s.strip('"*').strip())
            continue
        body.append(s)
    # the header lines may carry trailing labels or braces
    m = int(_NUM.findall(body[0])[0])
    nblock = int(_NUM.findall(body[1])[0])
    block_struct = [int(t) for t in _NUM.findall(body[2])[:nblock]]
    rest = " ".join(body[3:])
    tokens = _NUM.findall(rest)
    c = [Fraction(t) for t in tokens[:m]]
    tokens = tokens[m:]
    if len(tokens) % 5:
        raise ValueError("malformed SDPA entry list")
    entries = []
    for q in range(0, len(tokens), 5):
        mat, blk, i, j = (int(t) for t in tokens[q:q + 4])
        entries.append((mat, blk, i, j, Fraction(tokens[q + 4])))
    return SdpaProblem(c=c, block_struct=block_struct, entries=entries, comment=" ".join(comment))


def load_exact_sidecar(path) -> SdpaProblem:
    data = json.loads(Path(path).read_text())
    return SdpaProblem(
        c=[Fraction(v) for v in data["c"]],
        block_struct=list(data["block_struct"]),
        entries=[(a, b, i, j, Fraction(v)) for a, b, i, j, v in data["entries"]],
        comment=data.get("comment", ""),
    )

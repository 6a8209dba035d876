"""JSON formats: rational strings, certificate files and strategy files."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .algebra import PathVector, level_of

SCHEMA_VERSION = 1


def rat(v) -> str:
    """Exact ``"num/den"`` string; integers keep ``/1``."""
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"rationals must be 'num/den' strings, got {s!r}")
    s = s.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"decimal rational {s!r} not allowed; use 'num/den'")
    return Fraction(s)


def rle_encode(values) -> list[list]:
    """``[[value, count], ...]`` over consecutive equal entries."""
    runs: list[list] = []
    prev = None
    for v in values:
        if runs and v == prev:
            runs[-1][1] += 1
        else:
            runs.append([rat(v), 1])
            prev = v
    return runs


def rle_decode(runs) -> list[Fraction]:
    out: list[Fraction] = []
    for value, count in runs:
        if int(count) < 1:
            raise ValueError("run lengths must be positive")
        out.extend([parse_rat(value)] * int(count))
    return out


def certificate_to_json(cert) -> dict:
    return {
        "schema": "rendezvous-k3/certificate",
        "version": SCHEMA_VERSION,
        "k": cert.k,
        "a": [rat(v) for v in cert.schedule.values],
        "x": rle_encode(cert.x),
        "bound": rat(cert.bound),
        "checks": {
            "domination": cert.domination_ok,
            "spectrum": cert.spectrum_ok,
            "bound_equals_w": cert.bound == cert.expected,
            "spectrum_min": rat(cert.spectrum.minimum),
        },
    }


def write_certificate(cert, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(certificate_to_json(cert), separators=(",", ":")))
    return path


def read_certificate(path) -> tuple[int, PathVector, Fraction]:
    """Return ``(k, x, claimed bound)``; the caller re-verifies ``x`` itself."""
    data = json.loads(Path(path).read_text())
    if data.get("schema") != "rendezvous-k3/certificate":
        raise ValueError("not a certificate file")
    k = int(data["k"])
    x = PathVector.from_values(rle_decode(data["x"]))
    if x.level != k:
        raise ValueError(f"certificate vector has level {x.level}, header says {k}")
    return k, x, parse_rat(data["bound"])


def read_strategy(path) -> PathVector:
    """Strategy file: ``{"k": k, "p": ["num/den", ...]}`` or RLE pairs under ``"p_rle"``."""
    data = json.loads(Path(path).read_text())
    if "p" in data:
        values = [parse_rat(v) for v in data["p"]]
    elif "p_rle" in data:
        values = rle_decode(data["p_rle"])
    else:
        raise ValueError("strategy file needs a 'p' or 'p_rle' field")
    level_of(len(values))
    p = PathVector.from_values(values)
    if "k" in data and int(data["k"]) != p.level:
        raise ValueError(f"strategy length {len(values)} does not match k={data['k']}")
    return p


def strategy_to_json(p: PathVector) -> dict:
    return {"k": p.level, "p": [rat(v) for v in p]}

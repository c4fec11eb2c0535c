"""JSON job documents and report serialization.

One schema serves every subcommand::

    {
      "r": [...], "s": [...], "t": [...],          # numbers or "p/q" strings
      "preset": {"name": "euler", "alpha": "1/2", "u": [...], "v": [...]},
      "x": [...], "y": [...], "a": [...],
      "A": [[...], ...],                             # rows, implicit zero tail
      "N": 12, "M": 20, "tol": "1e-9", "trend_window": 8,
      "mode": "exact"
    }

Exact values are written back as integers or ``"p/q"`` strings so that a
document survives a parse/serialize round trip without loss.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from .core import LowerTable, Mode, SeqPrefix, Tail, parse_rational, to_scalar
from .genmeans import ParamTriple, preset
from .verdict import Verdict

log = logging.getLogger(__name__)

KNOWN_FIELDS = ("r", "s", "t", "preset", "x", "y", "a", "A", "N", "M", "tol", "trend_window", "mode")


class InputError(ValueError):
    """Malformed job document; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def loads(text: str) -> dict:
    """Parse JSON keeping decimal literals exact."""
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InputError("$", f"malformed JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise InputError("$", "top level must be an object")
    return doc


def _num(value, mode: Mode, path: str):
    if isinstance(value, bool) or not isinstance(value, (int, str, Decimal, float, Fraction)):
        raise InputError(path, f"expected a number or 'p/q' string, got {value!r}")
    try:
        if mode is Mode.EXACT:
            return parse_rational(value)
        return to_scalar(float(value) if isinstance(value, Decimal) else value, mode)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(path, str(exc)) from None


def _seq(values, mode: Mode, path: str, tail=Tail.UNKNOWN) -> SeqPrefix:
    if isinstance(values, str):
        values = [v for v in values.split(",") if v.strip()]
    if not isinstance(values, list) or not values:
        raise InputError(path, "expected a nonempty array")
    return SeqPrefix(tuple(_num(v, mode, f"{path}[{i}]") for i, v in enumerate(values)), mode, tail)


def _rows(values, mode: Mode, path: str) -> list:
    if not isinstance(values, list) or not values:
        raise InputError(path, "expected a nonempty array of rows")
    return [_seq(row, mode, f"{path}[{n}]", Tail.ZERO) for n, row in enumerate(values)]


@dataclass
class Job:
    """A parsed job document; every field is optional."""

    mode: Mode = Mode.EXACT
    r: SeqPrefix | None = None
    s: SeqPrefix | None = None
    t: SeqPrefix | None = None
    preset: dict | None = None
    x: SeqPrefix | None = None
    y: SeqPrefix | None = None
    a: SeqPrefix | None = None
    A: list | None = None
    N: int | None = None
    M: int | None = None
    tol: object = None
    trend_window: int | None = None
    extra: dict = field(default_factory=dict)

    def params(self, n: int | None = None) -> ParamTriple:
        """Parameter triple from the inline r/s/t or the preset block."""
        n = n if n is not None else self.N
        if self.preset is not None:
            block = self.preset
            name = block.get("name")
            if not isinstance(name, str):
                raise InputError("preset.name", "missing preset name")
            if n is None and name != "polat_uv":
                n = self.data_length()
            if n is None and name != "polat_uv":
                raise InputError("N", f"preset {name!r} needs a length N")
            try:
                return preset(
                    name,
                    n,
                    alpha=block.get("alpha"),
                    u=block.get("u"),
                    v=block.get("v"),
                    mode=self.mode,
                )
            except (ValueError, TypeError) as exc:
                raise InputError("preset", str(exc)) from None
        if self.r is None or self.s is None or self.t is None:
            raise InputError("r/s/t", "give r, s and t or a preset")
        try:
            p = ParamTriple(self.r, self.s, self.t)
            return p.truncate(n) if n is not None else p
        except ValueError as exc:
            raise InputError("r/s/t", str(exc)) from None

    def data_length(self):
        for seq in (self.x, self.y, self.a):
            if seq is not None:
                return len(seq)
        if self.A is not None:
            return max(max(len(r) for r in self.A), len(self.A))
        return None


def parse_job(doc: dict, mode: Mode | str | None = None) -> Job:
    """Build a Job from a decoded document; ``mode`` overrides ``doc["mode"]``."""
    try:
        mode = Mode(mode or doc.get("mode", Mode.EXACT.value))
    except ValueError:
        raise InputError("mode", f"unknown mode {doc.get('mode')!r}") from None
    job = Job(mode=mode)
    for key in ("r", "s", "t", "x", "y"):
        if key in doc:
            setattr(job, key, _seq(doc[key], mode, key))
    if "a" in doc:
        job.a = _seq(doc["a"], mode, "a", Tail.ZERO)
    if "A" in doc:
        job.A = _rows(doc["A"], mode, "A")
    if "preset" in doc:
        block = doc["preset"]
        if isinstance(block, str):
            block = {"name": block}
        if not isinstance(block, dict):
            raise InputError("preset", "expected an object with a name")
        job.preset = dict(block)
    for key in ("N", "M", "trend_window"):
        if key in doc:
            v = doc[key]
            if isinstance(v, bool) or not isinstance(v, int):
                raise InputError(key, f"expected an integer, got {v!r}")
            setattr(job, key, v)
    if "tol" in doc:
        job.tol = _num(doc["tol"], mode, "tol")
    job.extra = {k: v for k, v in doc.items() if k not in KNOWN_FIELDS}
    for key in job.extra:
        log.warning("ignoring unknown field %r", key)
    if job.N is not None and job.N < 2:
        raise InputError("N", "truncation N must be at least 2")
    if job.N is not None and job.M is not None and job.M < job.N:
        raise InputError("M", "table size M must be at least N")
    return job


# -- serialization ------------------------------------------------------------

def scalar_out(v):
    """Fractions become ints or "p/q" strings; everything else passes through."""
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def seq_out(seq) -> list:
    return [scalar_out(v) for v in seq]


def dump_job(job: Job) -> dict:
    doc = {"mode": job.mode.value}
    for key in ("r", "s", "t", "x", "y", "a"):
        seq = getattr(job, key)
        if seq is not None:
            doc[key] = seq_out(seq)
    if job.A is not None:
        doc["A"] = [seq_out(row) for row in job.A]
    if job.preset is not None:
        block = dict(job.preset)
        if "alpha" in block and block["alpha"] is not None:
            block["alpha"] = scalar_out(parse_rational(block["alpha"]))
        for key in ("u", "v"):
            if block.get(key) is not None:
                block[key] = [scalar_out(parse_rational(x)) for x in block[key]]
        doc["preset"] = block
    for key in ("N", "M", "trend_window"):
        if getattr(job, key) is not None:
            doc[key] = getattr(job, key)
    if job.tol is not None:
        doc["tol"] = scalar_out(job.tol)
    return doc


def verdict_out(v: Verdict) -> dict:
    return {
        "state": v.state.value,
        "estimate": scalar_out(v.estimate),
        "witness": list(v.witness) if v.witness is not None else None,
        "trend": seq_out(v.trend),
        "truncation": v.truncation,
        "note": v.note,
    }


def report_out(rep) -> dict:
    return {
        "conclusion": rep.conclusion.value,
        "witness": list(rep.witness) if rep.witness else None,
        "truncation": rep.truncation,
        "conditions": {k: verdict_out(v) for k, v in rep.conditions.items()},
        "notes": list(rep.notes),
    }


def table_out(T) -> list:
    if isinstance(T, LowerTable):
        return [seq_out(row) for row in T.rows]
    return [seq_out(row) for row in T]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2)

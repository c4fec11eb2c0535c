"""Generalized-means difference transforms.

A parameter triple ``(r, s, t)`` defines the weighted mean

    y_n = (1/r_n) * sum_{k<=n} s_{n-k} t_k x_k

and the spaces studied here are the domains of that mean composed with the
backward difference ``Delta x_k = x_k - x_{k-1}`` (``x_{-1} = 0``).  All
indices start at 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Mode,
    SeqPrefix,
    Tail,
    Triangle,
    difference,
    one,
    parse_rational,
    same_mode,
    zero,
)


class ParamError(ValueError):
    """A parameter triple or preset argument violates its invariants."""


@dataclass(frozen=True)
class ParamTriple:
    r: SeqPrefix
    s: SeqPrefix
    t: SeqPrefix
    name: str = ""

    def __post_init__(self):
        same_mode(self.r.mode, self.s.mode, self.t.mode)
        if not len(self.r) == len(self.s) == len(self.t):
            raise ParamError(
                f"r, s, t must have equal length, got {len(self.r)}, {len(self.s)}, {len(self.t)}"
            )
        for label, seq in (("r", self.r), ("t", self.t)):
            for n, v in enumerate(seq):
                if v == 0:
                    raise ParamError(f"{label}[{n}] = 0; {label} must have no zero entries")
        if self.s[0] == 0:
            raise ParamError("s[0] = 0; s must have a nonzero first entry")

    @classmethod
    def of(cls, r, s, t, mode: Mode = Mode.EXACT, name: str = ""):
        return cls(SeqPrefix.of(r, mode), SeqPrefix.of(s, mode), SeqPrefix.of(t, mode), name)

    @property
    def mode(self) -> Mode:
        return self.r.mode

    def __len__(self):
        return len(self.r)

    def truncate(self, n: int) -> "ParamTriple":
        if n > len(self):
            raise ParamError(f"parameters known up to length {len(self)}, {n} requested")
        return ParamTriple(self.r.truncate(n), self.s.truncate(n), self.t.truncate(n), self.name)


@dataclass(frozen=True)
class DCoeffs:
    """Coefficients D_0 .. D_{n-1}; ``(-1)^m D_m`` is the convolution inverse of s."""

    values: tuple
    s: SeqPrefix

    def __getitem__(self, m):
        return self.values[m]

    def __len__(self):
        return len(self.values)


def d_coeffs(s: SeqPrefix, n: int | None = None) -> DCoeffs:
    """D_0 .. D_{n-1} via the O(n^2) convolution recurrence.

    With c the reciprocal power series of s (c_0 = 1/s_0,
    c_m = -(1/s_0) sum_{k=1}^m s_k c_{m-k}), D_m = (-1)^m c_m.
    """
    n = len(s) if n is None else n
    if n > len(s):
        raise ParamError(f"need s up to index {n - 1}, have length {len(s)}")
    if s[0] == 0:
        raise ParamError("s[0] = 0; D coefficients are undefined")
    mode = s.mode
    inv0 = one(mode) / s[0]
    c = [inv0]
    for m in range(1, n):
        acc = zero(mode)
        for k in range(1, m + 1):
            acc += s[k] * c[m - k]
        c.append(-inv0 * acc)
    return DCoeffs(tuple(v if m % 2 == 0 else -v for m, v in enumerate(c[:n])), s)


class Kind(str, enum.Enum):
    A = "A"
    B = "B"
    T = "T"
    S = "S"
    DELTA = "Delta"


def build_triangle(p: ParamTriple, kind: Kind | str, n: int | None = None) -> Triangle:
    """Closed-form truncation of one of the defining triangles.

    A     generalized means, a_nk = s_{n-k} t_k / r_n
    B     inverse of A, b_nk = (-1)^{n-k} D_{n-k} r_k / t_n
    T     A * Delta
    S     inverse of T, s_jk = sum_{l=0}^{j-k} (-1)^l D_l r_k / t_{l+k}
    Delta backward difference
    """
    kind = Kind(kind)
    n = len(p) if n is None else n
    if n > len(p):
        raise ParamError(f"parameters known up to length {len(p)}, size {n} requested")
    mode = p.mode
    r, s, t = p.r, p.s, p.t
    if kind is Kind.DELTA:
        return difference(n, mode)
    if kind is Kind.A:
        return Triangle.from_function(n, lambda i, k: s[i - k] * t[k] / r[i], mode, "A")
    D = d_coeffs(s, n)
    if kind is Kind.B:
        def b(i, k):
            v = D[i - k] * r[k] / t[i]
            return v if (i - k) % 2 == 0 else -v
        return Triangle.from_function(n, b, mode, "B")
    if kind is Kind.T:
        # Off the diagonal, (A Delta)_nk = a_nk - a_{n,k+1}.
        def tt(i, k):
            if k == i:
                return s[0] * t[i] / r[i]
            return (s[i - k] * t[k] - s[i - k - 1] * t[k + 1]) / r[i]
        return Triangle.from_function(n, tt, mode, "T")
    # Kind.S: accumulate down each column.
    cols = []
    for k in range(n):
        col, acc = [], zero(mode)
        for l in range(n - k):
            term = D[l] / t[l + k]
            acc = acc + term if l % 2 == 0 else acc - term
            col.append(acc * r[k])
        cols.append(col)
    return Triangle.from_function(n, lambda i, k: cols[k][i - k], mode, "S")


def _check_lengths(p: ParamTriple, x: SeqPrefix):
    same_mode(p.mode, x.mode)
    if len(x) > len(p):
        raise ParamError(f"sequence of length {len(x)} exceeds parameter length {len(p)}")


def forward(p: ParamTriple, x: SeqPrefix) -> SeqPrefix:
    """``y = A(r,s,t) Delta x`` on the prefix, computed from the sum itself."""
    _check_lengths(p, x)
    mode = x.mode
    dx = [x[0]] + [x[k] - x[k - 1] for k in range(1, len(x))]
    out = []
    for n in range(len(x)):
        acc = zero(mode)
        for k in range(n + 1):
            acc += p.s[n - k] * p.t[k] * dx[k]
        out.append(acc / p.r[n])
    return SeqPrefix(tuple(out), mode, Tail.UNKNOWN)


def inverse_transform(p: ParamTriple, y: SeqPrefix) -> SeqPrefix:
    """Recover x from y = T x:

        x_n = sum_{j<=n} sum_{k<=n-j} (-1)^k (D_k / t_{k+j}) r_j y_j
    """
    _check_lengths(p, y)
    mode = y.mode
    N = len(y)
    D = d_coeffs(p.s, N)
    # inner[j] holds sum_{k<=n-j} (-1)^k D_k / t_{k+j} for the current n
    inner = [zero(mode)] * N
    out = []
    for n in range(N):
        acc = zero(mode)
        for j in range(n + 1):
            l = n - j
            term = D[l] / p.t[l + j]
            inner[j] = inner[j] + term if l % 2 == 0 else inner[j] - term
            acc += inner[j] * p.r[j] * y[j]
        out.append(acc)
    return SeqPrefix(tuple(out), mode, Tail.UNKNOWN)


def space_norm(p: ParamTriple, x: SeqPrefix):
    """Truncated norm ``max_{n<N} |(A(r,s,t) Delta x)_n|``."""
    return forward(p, x).sup_norm()


# -- presets ---------------------------------------------------------------

PRESETS = ("polat_uv", "cesaro", "euler", "aydin_basar")


def _alpha(alpha) -> Fraction:
    a = parse_rational(alpha)
    if not 0 < a < 1:
        raise ParamError(f"alpha must lie strictly between 0 and 1, got {a}")
    return a


def _materialize(name, r, s, t, mode: Mode) -> ParamTriple:
    return ParamTriple.of(list(r), list(s), list(t), mode, name)


def preset(
    name: str,
    n: int | None = None,
    *,
    alpha=None,
    u: Sequence | None = None,
    v: Sequence | None = None,
    mode: Mode = Mode.EXACT,
) -> ParamTriple:
    """Parameter triples reproducing known difference sequence spaces.

    ``polat_uv``     r = 1/u, t = v, s = 1 (needs u and v)
    ``cesaro``       r_n = n + 1, s = t = 1
    ``euler``        r_n = 1/n!, t_n = alpha^n/n!, s_n = (1 - alpha)^n/n!
    ``aydin_basar``  r_n = n + 1, t_n = 1 + alpha^n, s = 1

    Values are built exactly and converted afterwards in float mode.
    """
    mode = Mode(mode)
    if name == "polat_uv":
        if u is None or v is None:
            raise ParamError("polat_uv needs both u and v")
        uu = [parse_rational(x) for x in u]
        vv = [parse_rational(x) for x in v]
        n = min(len(uu), len(vv)) if n is None else n
        if n > len(uu) or n > len(vv):
            raise ParamError(f"u and v must have at least {n} entries")
        for label, seq in (("u", uu), ("v", vv)):
            for i in range(n):
                if seq[i] == 0:
                    raise ParamError(f"{label}[{i}] = 0; entries must be nonzero")
        return _materialize(name, [1 / x for x in uu[:n]], [1] * n, vv[:n], mode)
    if n is None or n < 1:
        raise ParamError(f"preset {name!r} needs a positive length")
    if name == "cesaro":
        return _materialize(name, range(1, n + 1), [1] * n, [1] * n, mode)
    if name == "euler":
        a = _alpha(alpha)
        fact = [math.factorial(i) for i in range(n)]
        return _materialize(
            name,
            [Fraction(1, f) for f in fact],
            [(1 - a) ** i / f for i, f in enumerate(fact)],
            [a ** i / f for i, f in enumerate(fact)],
            mode,
        )
    if name == "aydin_basar":
        a = _alpha(alpha)
        return _materialize(name, range(1, n + 1), [1] * n, [1 + a ** i for i in range(n)], mode)
    raise ParamError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def all_ones(n: int, mode: Mode = Mode.EXACT) -> ParamTriple:
    return ParamTriple.of([1] * n, [1] * n, [1] * n, mode, "ones")


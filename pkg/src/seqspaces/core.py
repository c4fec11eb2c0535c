"""Scalars, sequence prefixes and finite lower-triangular matrices.

Scalars are plain Python numbers: ``fractions.Fraction`` in exact mode and
``float`` in float mode.  The mode is carried by the containers
(:class:`SeqPrefix`, :class:`Triangle`) and checked at every operation
boundary, so the two kinds of arithmetic never meet silently.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, float]


class Mode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class Tail(str, enum.Enum):
    ZERO = "zero"
    UNKNOWN = "unknown"


class ModeError(TypeError):
    """Raised when exact and float values are combined."""


class TriangleError(ValueError):
    """Raised for a zero diagonal entry or a size mismatch."""


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*/\s*([+-]?\d+)\s*$")


def parse_rational(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepts ints, Fractions, ``"p/q"`` strings and decimal literals
    (``"0.125"``, ``"1e-3"``).  A Python float is converted through its
    shortest decimal repr, so ``0.1`` becomes ``1/10`` and not the binary
    approximation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ValueError(f"non-finite value {value!r} has no exact form")
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r} has no exact form")
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        m = _RATIONAL.match(value)
        if m:
            den = int(m.group(2))
            if den == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
            return Fraction(int(m.group(1)), den)
        try:
            dec = Decimal(value.strip())
        except InvalidOperation:
            raise ValueError(f"not a rational literal: {value!r}") from None
        if not dec.is_finite():
            raise ValueError(f"non-finite value {value!r} has no exact form")
        return Fraction(dec)
    raise TypeError(f"cannot read {type(value).__name__} as a rational")


def to_scalar(value, mode: Mode) -> Scalar:
    mode = Mode(mode)
    if mode is Mode.EXACT:
        if isinstance(value, float):
            raise ModeError(f"float {value!r} given in exact mode")
        return parse_rational(value)
    if isinstance(value, str):
        return float(parse_rational(value))
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    return float(value)


def check_scalar(value, mode: Mode) -> Scalar:
    """Return ``value`` unchanged if it belongs to ``mode``; ints are promoted."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if mode is Mode.EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise ModeError(f"{type(value).__name__} value {value!r} in exact mode")
    if isinstance(value, float):
        return value
    if isinstance(value, int):
        return float(value)
    raise ModeError(f"{type(value).__name__} value {value!r} in float mode")


def zero(mode: Mode) -> Scalar:
    return Fraction(0) if mode is Mode.EXACT else 0.0


def one(mode: Mode) -> Scalar:
    return Fraction(1) if mode is Mode.EXACT else 1.0


def mode_of(value) -> Mode:
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return Mode.EXACT
    if isinstance(value, float):
        return Mode.FLOAT
    raise TypeError(f"not a scalar: {value!r}")


def same_mode(*modes: Mode) -> Mode:
    first = modes[0]
    for m in modes[1:]:
        if m is not first:
            raise ModeError(f"cannot combine {first.value} and {m.value} values")
    return first


@dataclass(frozen=True)
class SeqPrefix:
    """Finite prefix ``(x_0, ..., x_{N-1})`` of a sequence.

    ``tail`` records what is known about the entries past the prefix:
    ``Tail.ZERO`` means the sequence is finitely supported inside the
    prefix, ``Tail.UNKNOWN`` means nothing is known.
    """

    entries: tuple
    mode: Mode = Mode.EXACT
    tail: Tail = Tail.UNKNOWN

    def __post_init__(self):
        mode = Mode(self.mode)
        if len(self.entries) < 1:
            raise ValueError("a sequence prefix needs at least one entry")
        entries = tuple(check_scalar(v, mode) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "tail", Tail(self.tail))

    @classmethod
    def of(cls, values: Iterable, mode: Mode = Mode.EXACT, tail: Tail = Tail.UNKNOWN):
        """Build a prefix from loose inputs (ints, ``"p/q"`` strings, decimals)."""
        return cls(tuple(to_scalar(v, mode) for v in values), mode, tail)

    @classmethod
    def zeros(cls, n: int, mode: Mode = Mode.EXACT, tail: Tail = Tail.ZERO):
        return cls((zero(mode),) * n, mode, tail)

    @classmethod
    def unit(cls, j: int, n: int, mode: Mode = Mode.EXACT, tail: Tail = Tail.ZERO):
        """The unit sequence e_j truncated to length n."""
        z, o = zero(mode), one(mode)
        return cls(tuple(o if i == j else z for i in range(n)), mode, tail)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def truncate(self, n: int) -> "SeqPrefix":
        if n > len(self):
            raise ValueError(f"cannot truncate length {len(self)} prefix to {n}")
        return SeqPrefix(self.entries[:n], self.mode, self.tail if n == len(self) else Tail.UNKNOWN)

    def support_bound(self) -> int:
        """Largest index holding a nonzero entry, or -1 for the zero prefix."""
        for i in range(len(self.entries) - 1, -1, -1):
            if self.entries[i] != 0:
                return i
        return -1

    def tail_sums(self) -> list:
        """``out[k] = sum_{j >= k} x_j`` for k = 0..N (last entry is 0).

        Only meaningful for ``Tail.ZERO``; otherwise the infinite tails are
        unknown and a ValueError is raised.
        """
        if self.tail is not Tail.ZERO:
            raise ValueError("tail sums need a finitely supported sequence (tail=zero)")
        out = [zero(self.mode)] * (len(self.entries) + 1)
        acc = zero(self.mode)
        for k in range(len(self.entries) - 1, -1, -1):
            acc = acc + self.entries[k]
            out[k] = acc
        return out

    def __add__(self, other: "SeqPrefix") -> "SeqPrefix":
        same_mode(self.mode, other.mode)
        if len(self) != len(other):
            raise ValueError("length mismatch")
        tail = Tail.ZERO if self.tail is other.tail is Tail.ZERO else Tail.UNKNOWN
        return SeqPrefix(tuple(a + b for a, b in zip(self, other)), self.mode, tail)

    def __sub__(self, other: "SeqPrefix") -> "SeqPrefix":
        return self + other.scale(-one(other.mode))

    def scale(self, c) -> "SeqPrefix":
        c = check_scalar(c, self.mode)
        return SeqPrefix(tuple(c * a for a in self), self.mode, self.tail)

    def sup_norm(self) -> Scalar:
        return max(abs(v) for v in self.entries)


@dataclass(frozen=True, eq=False)
class LowerTable:
    """N x N lower-triangular table; ``rows[n]`` holds entries k = 0..n.

    Entries above the diagonal are zero by construction and not stored.
    No condition is placed on the diagonal; see :class:`Triangle`.
    """

    rows: tuple
    mode: Mode = Mode.EXACT
    label: str = ""

    def __post_init__(self):
        mode = Mode(self.mode)
        rows = []
        for n, row in enumerate(self.rows):
            if len(row) != n + 1:
                raise TriangleError(f"row {n} has {len(row)} entries, expected {n + 1}")
            rows.append(tuple(check_scalar(v, mode) for v in row))
        if not rows:
            raise TriangleError("empty table")
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "mode", mode)

    @classmethod
    def from_function(cls, n: int, f, mode: Mode = Mode.EXACT, label: str = ""):
        return cls(tuple(tuple(f(i, k) for k in range(i + 1)) for i in range(n)), mode, label)

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, n: int, k: int) -> Scalar:
        if k > n:
            return zero(self.mode)
        return self.rows[n][k]

    def column(self, k: int) -> list:
        return [self.entry(n, k) for n in range(self.size)]

    def to_lists(self) -> list:
        """Dense square list-of-lists, zeros above the diagonal."""
        return [[self.entry(n, k) for k in range(self.size)] for n in range(self.size)]

    def zero_diagonal_row(self):
        for n, row in enumerate(self.rows):
            if row[n] == 0:
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, LowerTable):
            return NotImplemented
        return self.mode is other.mode and self.rows == other.rows

    def __hash__(self):
        return hash((self.mode, self.rows))


@dataclass(frozen=True, eq=False)
class Triangle(LowerTable):
    """A :class:`LowerTable` with nonzero diagonal, hence invertible."""

    def __post_init__(self):
        super().__post_init__()
        bad = self.zero_diagonal_row()
        if bad is not None:
            raise TriangleError(f"zero diagonal entry in row {bad}")


def identity(n: int, mode: Mode = Mode.EXACT) -> Triangle:
    z, o = zero(mode), one(mode)
    return Triangle.from_function(n, lambda i, k: o if i == k else z, mode, "I")


def difference(n: int, mode: Mode = Mode.EXACT) -> Triangle:
    """The backward difference triangle: 1 on the diagonal, -1 below it."""
    z, o = zero(mode), one(mode)
    return Triangle.from_function(
        n, lambda i, k: o if i == k else (-o if k == i - 1 else z), mode, "Delta"
    )


def partial_sums(n: int, mode: Mode = Mode.EXACT) -> Triangle:
    o = one(mode)
    return Triangle.from_function(n, lambda i, k: o, mode, "Sigma")


def toeplitz(first_column: Sequence, mode: Mode = Mode.EXACT, label: str = "") -> Triangle:
    col = [to_scalar(v, mode) for v in first_column]
    return Triangle.from_function(len(col), lambda i, k: col[i - k], mode, label)


def diagonal(values: Sequence, mode: Mode = Mode.EXACT) -> Triangle:
    vals = [to_scalar(v, mode) for v in values]
    z = zero(mode)
    return Triangle.from_function(len(vals), lambda i, k: vals[i] if i == k else z, mode, "diag")


def apply(T: LowerTable, x: SeqPrefix) -> SeqPrefix:
    """The T-transform ``(Tx)_n = sum_{k<=n} t_nk x_k`` for n < T.size."""
    mode = same_mode(T.mode, x.mode)
    if len(x) < T.size:
        raise ValueError(f"sequence of length {len(x)} too short for size {T.size} triangle")
    out = []
    for row in T.rows:
        acc = zero(mode)
        for t, v in zip(row, x.entries):
            acc += t * v
        out.append(acc)
    return SeqPrefix(tuple(out), mode, Tail.UNKNOWN)


def product(T1: LowerTable, T2: LowerTable) -> LowerTable:
    """Matrix product; the result is a Triangle when both factors are."""
    mode = same_mode(T1.mode, T2.mode)
    if T1.size != T2.size:
        raise TriangleError(f"size mismatch: {T1.size} vs {T2.size}")
    rows = []
    for n in range(T1.size):
        a = T1.rows[n]
        row = []
        for k in range(n + 1):
            acc = zero(mode)
            for j in range(k, n + 1):
                acc += a[j] * T2.rows[j][k]
            row.append(acc)
        rows.append(tuple(row))
    label = f"{T1.label}*{T2.label}" if T1.label or T2.label else ""
    cls = Triangle if isinstance(T1, Triangle) and isinstance(T2, Triangle) else LowerTable
    return cls(tuple(rows), mode, label)


def invert_oracle(T: LowerTable) -> Triangle:
    """Exact inverse by forward substitution, one column at a time.

    Independent of any closed form; used to validate them.
    """
    if T.mode is not Mode.EXACT:
        raise ModeError("invert_oracle requires exact mode")
    bad = T.zero_diagonal_row()
    if bad is not None:
        raise TriangleError(f"not invertible: zero diagonal entry in row {bad}")
    n = T.size
    inv = [[Fraction(0)] * (i + 1) for i in range(n)]
    for k in range(n):
        # solve T u = e_k for rows k..n-1
        for i in range(k, n):
            acc = Fraction(1) if i == k else Fraction(0)
            row = T.rows[i]
            for j in range(k, i):
                acc -= row[j] * inv[j][k]
            inv[i][k] = acc / row[i]
    return Triangle(tuple(tuple(r) for r in inv), Mode.EXACT, f"inv({T.label})" if T.label else "")

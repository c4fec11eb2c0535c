"""Matrix maps from X(r,s,t;Delta) into l_inf, c or c0.

A matrix A (rows A_n, each finitely supported) is judged through the
matrix B^A with rows R(A_n), the triangles W^{A_n} and the limits
gamma_n = lim_m sum_k w^{A_n}_mk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .core import LowerTable, Mode, SeqPrefix, Tail, parse_rational, same_mode, zero
from .duals import (
    TailError,
    _cond,
    _Kernel,
    _row_sums,
    resolve_tol,
)
from .genmeans import ParamTriple, d_coeffs, forward, preset
from .verdict import (
    DEFAULT_WINDOW,
    Conclusion,
    Verdict,
    conclude,
    for_all,
    limit_exists_verdict,
    sup_verdict,
    zero_limit_verdict,
)

SPACES = ("c0", "c", "linf")

# Condition ids per (from, to) pair.
CONDITIONS = {
    ("c0", "c0"): ("4.12", "4.13", "4.14", "4.15"),
    ("c0", "c"): ("4.12", "4.14", "4.15", "4.16"),
    ("c0", "linf"): ("4.12", "4.14", "4.15"),
    ("linf", "c0"): ("4.17", "4.18"),
    ("linf", "c"): ("4.12", "4.16", "4.18", "4.19"),
    ("linf", "linf"): ("4.12", "4.18"),
    ("c", "c0"): ("4.12", "4.13", "4.14", "4.20", "4.21", "4.22"),
    ("c", "c"): ("4.12", "4.14", "4.16", "4.20", "4.21", "4.24"),
    ("c", "linf"): ("4.12", "4.14", "4.20", "4.21", "4.23"),
}


def _space(label: str) -> str:
    label = {"l_inf": "linf", "l_infty": "linf", "linfty": "linf", "ell_inf": "linf"}.get(label, label)
    if label not in SPACES:
        raise ValueError(f"unsupported space {label!r}; choose from {', '.join(SPACES)}")
    return label


def as_rows(A, mode: Mode = Mode.EXACT) -> list:
    """Normalise a matrix given as SeqPrefixes or plain lists into tail-zero rows."""
    rows = []
    for n, row in enumerate(A):
        if isinstance(row, SeqPrefix):
            if row.tail is not Tail.ZERO:
                raise TailError(f"row {n} is not finitely supported (tail=zero)")
            rows.append(row)
        else:
            rows.append(SeqPrefix.of(row, mode, Tail.ZERO))
    if not rows:
        raise ValueError("matrix has no rows")
    return rows


@dataclass(frozen=True)
class TransformTables:
    BA: tuple          # rows R(A_n), each a tuple of length `width`
    W: tuple           # LowerTable W^{A_n} per row n
    gamma: tuple       # gamma_n, exact zero for finitely supported rows
    supports: tuple
    width: int
    M: int


def transform_tables(p: ParamTriple, A, M: int | None = None, window: int = DEFAULT_WINDOW) -> TransformTables:
    """B^A, the triangles W^{A_n} and gamma_n for every row of A.

    M defaults to the largest row support plus a full trend window.  The
    W rows past each support are exactly zero, so gamma_n is read there.
    """
    rows = as_rows(A, p.mode)
    for row in rows:
        same_mode(p.mode, row.mode)
    D = d_coeffs(p.s)
    kernels = [_Kernel(p, row, D) for row in rows]
    L = max(k.L for k in kernels)
    width = max(len(row) for row in rows)
    M = max(width, L + 1 + window) if M is None else M
    if M < L + 2:
        raise ValueError(f"table size {M} must exceed the largest support index {L} by at least one")
    mode = p.mode
    BA = tuple(tuple(k.R(j) for j in range(width)) for k in kernels)
    W = tuple(LowerTable.from_function(M, k.w, mode, f"W^A{n}") for n, k in enumerate(kernels))
    gamma = tuple(sum(w.rows[-1], zero(mode)) for w in W)
    return TransformTables(BA, W, gamma, tuple(k.L for k in kernels), width, M)


@dataclass(frozen=True)
class ClassifyReport:
    source: str
    target: str
    conditions: dict
    conclusion: Conclusion
    witness: tuple | None
    tables: TransformTables
    eta: object = None
    truncation: int = 0
    notes: tuple = field(default_factory=tuple)


def _row_conditions(W_lists, key, tol, window):
    """Apply a W-condition to every W^{A_n}, combined as "for all n"."""
    base = {"4.14": "4.5", "4.15": "4.7", "4.18": "4.6", "4.20": "4.9", "4.21": "4.11"}[key]
    return for_all(((n, _cond(Wn, base, tol, window, 0)) for n, Wn in enumerate(W_lists)), len(W_lists))


def evaluate_condition(key: str, tables: TransformTables, tol, window: int = DEFAULT_WINDOW, W_lists=None) -> Verdict:
    BA = [list(r) for r in tables.BA]
    if key == "4.12":
        return _cond(BA, "4.5", tol, window, 0)
    if key == "4.13":
        return _cond(BA, "4.7", tol, window, 0)
    if key == "4.16":
        return _cond(BA, "4.9", tol, window, 0)
    if key == "4.17":
        return _cond(BA, "4.6", tol, window, 0)
    if key == "4.19":
        return _cond(BA, "4.10", tol, window, 0)
    if key in ("4.14", "4.15", "4.18", "4.20", "4.21"):
        if W_lists is None:
            W_lists = [w.to_lists() for w in tables.W]
        return _row_conditions(W_lists, key, tol, window)
    if key in ("4.22", "4.23", "4.24"):
        seq = [rs - g for rs, g in zip(_row_sums(BA), tables.gamma)]
        if key == "4.22":
            return zero_limit_verdict(seq, tol, window)
        if key == "4.23":
            return sup_verdict([abs(v) for v in seq], tol, window)
        return limit_exists_verdict(seq, tol, window)
    raise KeyError(f"unknown condition {key!r}")


def classify(
    p: ParamTriple,
    A,
    source: str,
    target: str,
    tol=None,
    window: int = DEFAULT_WINDOW,
    M: int | None = None,
    eta=None,
) -> ClassifyReport:
    """Truncation verdict on A in (source(r,s,t;Delta), target)."""
    pair = (_space(source), _space(target))
    keys = CONDITIONS[pair]
    tol = resolve_tol(tol, p.mode)
    tables = transform_tables(p, A, M, window)
    W_lists = [w.to_lists() for w in tables.W] if any(k in keys for k in ("4.14", "4.15", "4.18", "4.20", "4.21")) else None
    conds = {key: evaluate_condition(key, tables, tol, window, W_lists) for key in keys}
    notes = ["gamma_n = 0 for finitely supported rows, so the eta * gamma_n correction vanishes"]
    rep = conclude(conds, len(tables.BA), notes)
    return ClassifyReport(pair[0], pair[1], rep.conditions, rep.conclusion, rep.witness, tables, eta, len(tables.BA), rep.notes)


@dataclass(frozen=True)
class Representation:
    direct: tuple      # (Az)_n
    via_tables: tuple  # sum_k R_k(A_n) (Tz)_k - eta * gamma_n


def az_representation(p: ParamTriple, A, z: SeqPrefix, eta=None) -> Representation:
    """Both sides of ``Az = B^A (Tz) - eta (gamma_n)`` on finitely supported rows."""
    rows = as_rows(A, p.mode)
    tables = transform_tables(p, rows)
    mode = p.mode
    need = max(tables.supports) + 1
    if len(z) < need:
        raise ValueError(f"z has length {len(z)}, rows reach index {need - 1}")
    Tz = forward(p, z.truncate(min(len(z), len(p))))
    direct, via = [], []
    for n, row in enumerate(rows):
        L = tables.supports[n]
        acc = zero(mode)
        for k in range(L + 1):
            acc += row[k] * z[k]
        direct.append(acc)
        acc = zero(mode)
        for k in range(L + 1):
            acc += tables.BA[n][k] * Tz[k]
        if eta is not None:
            acc -= eta * tables.gamma[n]
        via.append(acc)
    return Representation(tuple(direct), tuple(via))


# -- closed forms for the euler and aydin_basar presets -----------------------

@dataclass(frozen=True)
class ClosedFormCheck:
    preset: str
    alpha: Fraction
    R_closed: tuple
    R_general: tuple
    W_closed: tuple
    W_general: tuple
    abs_w_closed: tuple = ()
    abs_w_general: tuple = ()
    mismatches: tuple = ()

    @property
    def matches(self) -> bool:
        return not self.mismatches


def euler_R(alpha: Fraction, row: SeqPrefix, k: int):
    """Euler preset: sum_{l>=0} (-1)^l C(l+k, l) (1-alpha)^l / alpha^{k+l} * tail(k+l).

    The l = 0 term splits into a_nk / alpha^k + tail(k+1) / alpha^k.
    """
    tails = row.tail_sums()
    L = row.support_bound()
    if k > L:
        return Fraction(0)
    acc = row[k] / alpha ** k
    if k + 1 <= L:
        acc += (1 / alpha ** k - (k + 1) * (1 - alpha) / alpha ** (k + 1)) * tails[k + 1]
    for l in range(2, L - k + 1):
        term = comb(l + k, l) * (1 - alpha) ** l / alpha ** (k + l) * tails[k + l]
        acc += term if l % 2 == 0 else -term
    return acc


def euler_w(alpha: Fraction, row: SeqPrefix, m: int, k: int):
    tails = row.tail_sums()
    L = row.support_bound()
    if k > m or m > L:
        return Fraction(0)

    def c(l):
        v = comb(l + k, l) * (1 - alpha) ** l / alpha ** (l + k)
        return v if l % 2 == 0 else -v

    acc = sum((c(l) for l in range(m - k + 1)), Fraction(0)) * tails[m]
    for l in range(m - k + 1, L - k + 1):
        acc += c(l) * tails[k + l]
    return acc


def aydin_basar_R(alpha: Fraction, row: SeqPrefix, k: int):
    """(k+1) [a_nk / (1+alpha^k) + (1/(1+alpha^k) - 1/(1+alpha^{k+1})) tail(k+1)]."""
    tails = row.tail_sums()
    L = row.support_bound()
    if k > L:
        return Fraction(0)
    tk, tk1 = 1 + alpha ** k, 1 + alpha ** (k + 1)
    tail_next = tails[k + 1] if k + 1 <= L else Fraction(0)
    return (k + 1) * (row[k] / tk + (1 / tk - 1 / tk1) * tail_next)


def aydin_basar_w(alpha: Fraction, row: SeqPrefix, m: int, k: int):
    """Off the diagonal (k < m) only the D_0, D_1 terms survive:

        (k+1) (1/(1+alpha^k) - 1/(1+alpha^{k+1})) tail(m)

    and on the diagonal ``(m+1) [tail(m)/(1+alpha^m) - tail(m+1)/(1+alpha^{m+1})]``.
    """
    tails = row.tail_sums()
    L = row.support_bound()
    if k > m or m > L:
        return Fraction(0)
    tk, tk1 = 1 + alpha ** k, 1 + alpha ** (k + 1)
    if k < m:
        return (k + 1) * (1 / tk - 1 / tk1) * tails[m]
    tail_next = tails[m + 1] if m + 1 <= L else Fraction(0)
    return (m + 1) * (tails[m] / tk - tail_next / tk1)


def aydin_basar_abs_w_sum(alpha: Fraction, row: SeqPrefix, m: int):
    """sum_{k<=m} |w_mk|, split into the off-diagonal block and the diagonal term.

    With d_k = 1/(1+alpha^k) - 1/(1+alpha^{k+1}) this is
    |tail(m)| sum_{k<m} (k+1)|d_k| + (m+1)|d_m tail(m) + a_nm/(1+alpha^{m+1})|.
    """
    tails = row.tail_sums()
    L = row.support_bound()
    if m > L:
        return Fraction(0)

    def d(k):
        return 1 / (1 + alpha ** k) - 1 / (1 + alpha ** (k + 1))

    off = abs(tails[m]) * sum((abs((k + 1) * d(k)) for k in range(m)), Fraction(0))
    return off + (m + 1) * abs(d(m) * tails[m] + row[m] / (1 + alpha ** (m + 1)))


def application_closed_forms(name: str, alpha, A, n_size: int | None = None, M: int | None = None) -> ClosedFormCheck:
    """Compare the preset closed forms with the general tables, entrywise and exactly."""

    alpha = parse_rational(alpha)
    if name not in ("euler", "aydin_basar"):
        raise ValueError(f"closed forms exist for 'euler' and 'aydin_basar', not {name!r}")
    rows = as_rows(A, Mode.EXACT)
    width = max(len(r) for r in rows)
    N = max(width, n_size or 0)
    p = preset(name, N, alpha=alpha)
    tables = transform_tables(p, rows, M)
    Rf = euler_R if name == "euler" else aydin_basar_R
    Wf = euler_w if name == "euler" else aydin_basar_w
    R_closed = tuple(tuple(Rf(alpha, row, k) for k in range(width)) for row in rows)
    W_closed = tuple(
        tuple(tuple(Wf(alpha, row, m, k) for k in range(m + 1)) for m in range(tables.M)) for row in rows
    )
    W_general = tuple(w.rows for w in tables.W)
    mismatches = []
    for n in range(len(rows)):
        for k in range(width):
            if R_closed[n][k] != tables.BA[n][k]:
                mismatches.append(("R", n, k))
        for m in range(tables.M):
            for k in range(m + 1):
                if W_closed[n][m][k] != W_general[n][m][k]:
                    mismatches.append(("w", n, m, k))
    abs_closed, abs_general = (), ()
    if name == "aydin_basar":
        abs_closed = tuple(tuple(aydin_basar_abs_w_sum(alpha, row, m) for m in range(tables.M)) for row in rows)
        abs_general = tuple(tuple(sum(abs(v) for v in r) for r in w.rows) for w in tables.W)
        for n in range(len(rows)):
            for m in range(tables.M):
                if abs_closed[n][m] != abs_general[n][m]:
                    mismatches.append(("abs_w_sum", n, m))
    return ClosedFormCheck(
        name, alpha, R_closed, tables.BA, W_closed, W_general, abs_closed, abs_general, tuple(mismatches)
    )

"""Dual spaces: R_k(a), the tables W and E, and the classical condition battery.

Every formula here contains tails ``sum_{j>=k} a_j``.  They are only
computable when ``a`` is finitely supported, so all dual computations
require ``a.tail is Tail.ZERO``.  Terms whose tail range lies past the
support are skipped structurally, which also means parameters are never
read beyond the support of ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable

from .core import (
    LowerTable,
    Mode,
    ModeError,
    SeqPrefix,
    Tail,
    check_scalar,
    parse_rational,
    same_mode,
    zero,
)
from .genmeans import DCoeffs, ParamError, ParamTriple, d_coeffs, forward
from .verdict import (
    DEFAULT_TOL,
    DEFAULT_WINDOW,
    ConditionReport,
    State,
    Verdict,
    conclude,
    for_all,
    limit_exists_verdict,
    sup_verdict,
    zero_limit_verdict,
)

KMAX_LIMIT = 12
BATTERY = ("4.4", "4.5", "4.6", "4.7", "4.8", "4.9", "4.10", "4.11")


class TailError(ValueError):
    """An operation needs a finitely supported sequence."""


def _require_zero_tail(a: SeqPrefix, what: str = "a"):
    if a.tail is not Tail.ZERO:
        raise TailError(f"{what} must be finitely supported (tail=zero); infinite tails are not computable")


def resolve_tol(tol, mode: Mode):
    """Exact mode compares exactly unless a tolerance is given explicitly."""
    if mode is Mode.EXACT:
        return Fraction(0) if tol is None else parse_rational(tol)
    return DEFAULT_TOL if tol is None else float(tol)


# -- R, W, E ----------------------------------------------------------------

class _Kernel:
    """Shared pieces for R_k(a), w_mk and e_mn of one finitely supported a."""

    def __init__(self, p: ParamTriple, a: SeqPrefix, D: DCoeffs | None = None):
        same_mode(p.mode, a.mode)
        _require_zero_tail(a)
        self.p, self.a, self.mode = p, a, a.mode
        self.L = a.support_bound()
        if self.L >= len(p):
            raise ParamError(f"support of a reaches index {self.L}, parameters only to {len(p) - 1}")
        self.D = D if D is not None else d_coeffs(p.s, max(self.L + 1, 1))
        self._tails = a.tail_sums()
        self._cum = [zero(self.mode)]
        for v in a:
            self._cum.append(self._cum[-1] + v)

    def tail(self, i: int):
        """sum_{j>=i} a_j."""
        if i > self.L:
            return zero(self.mode)
        return self._tails[i]

    def partial(self, i: int, m: int):
        """sum_{j=i}^{m} a_j (empty sums are zero)."""
        m = min(m, self.L)
        if i > m:
            return zero(self.mode)
        return self._cum[m + 1] - self._cum[i]

    def coef(self, l: int, k: int):
        """(-1)^l D_l / t_{l+k}."""
        v = self.D[l] / self.p.t[l + k]
        return v if l % 2 == 0 else -v

    def R(self, k: int):
        if k > self.L:
            return zero(self.mode)
        p, D = self.p, self.D
        acc = self.a[k] / (p.s[0] * p.t[k])
        if k + 1 <= self.L:
            acc += (D[0] / p.t[k] - D[1] / p.t[k + 1]) * self.tail(k + 1)
        for l in range(2, self.L - k + 1):
            acc += self.coef(l, k) * self.tail(k + l)
        return p.r[k] * acc

    def w(self, m: int, k: int):
        if k > m or m > self.L:
            return zero(self.mode)
        acc = zero(self.mode)
        tm = self.tail(m)
        for l in range(0, m - k + 1):
            acc += self.coef(l, k) * tm
        for l in range(m - k + 1, self.L - k + 1):
            acc += self.coef(l, k) * self.tail(k + l)
        return self.p.r[k] * acc

    def e(self, m: int, n: int):
        if n > m or n > self.L:
            return zero(self.mode)
        p, D = self.p, self.D
        acc = self.a[n] / (p.s[0] * p.t[n])
        if n + 1 <= min(m, self.L):
            acc += (D[0] / p.t[n] - D[1] / p.t[n + 1]) * self.partial(n + 1, m)
        for j in range(n + 2, min(m, self.L) + 1):
            acc += self.coef(j - n, n) * self.partial(j, m)
        return p.r[n] * acc


@dataclass(frozen=True)
class DualDerived:
    R: SeqPrefix
    W: LowerTable
    E: LowerTable
    a: SeqPrefix
    support: int

    @property
    def gamma(self):
        """lim_m sum_k w_mk, read off a row past the support (exactly zero)."""
        return sum(self.W.rows[-1], zero(self.a.mode))


def default_table_size(a: SeqPrefix, window: int = DEFAULT_WINDOW) -> int:
    return max(len(a), a.support_bound() + 1 + window)


def dual_derived(p: ParamTriple, a: SeqPrefix, M: int | None = None, *, with_e: bool = True) -> DualDerived:
    """R_k(a) for k < max(len(a), M), and the M x M tables W and E.

    M defaults to the support bound plus a full trend window, so the last
    rows of W and E show their limiting values.
    """
    kern = _Kernel(p, a)
    M = default_table_size(a) if M is None else M
    if M < kern.L + 1:
        raise ValueError(f"table size {M} does not cover the support of a (index {kern.L})")
    mode = a.mode
    n_r = max(len(a), M)
    R = SeqPrefix(tuple(kern.R(k) for k in range(n_r)), mode, Tail.ZERO)
    W = LowerTable.from_function(M, kern.w, mode, "W")
    if with_e:
        E = LowerTable.from_function(M, kern.e, mode, "E")
    else:
        E = LowerTable.from_function(1, lambda m, n: zero(mode), mode, "E")
    return DualDerived(R, W, E, a, kern.L)


@dataclass(frozen=True)
class PairingCheck:
    lhs: object
    rhs: object
    gamma: object
    eta: object = None

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def pairing_identity_check(p: ParamTriple, a: SeqPrefix, z: SeqPrefix, eta=None) -> PairingCheck:
    """Both sides of ``sum a_k z_k = sum R_k(a) (Tz)_k - eta * gamma``.

    For finitely supported ``a`` gamma is zero, so the plain and the
    convergent-sequence variants coincide; gamma is still reported.
    """
    same_mode(p.mode, a.mode, z.mode)
    kern = _Kernel(p, a)
    L = kern.L
    if len(z) < L + 1:
        raise ValueError(f"z has length {len(z)}, needs at least {L + 1}")
    mode = a.mode
    lhs = zero(mode)
    for k in range(L + 1):
        lhs += a[k] * z[k]
    rhs = zero(mode)
    gamma = zero(mode)
    if L >= 0:
        Tz = forward(p, z.truncate(L + 1))
        for k in range(L + 1):
            rhs += kern.R(k) * Tz[k]
        gamma = sum((kern.w(L + 1, k) for k in range(L + 2)), zero(mode))
    if eta is not None:
        rhs -= eta * gamma
    return PairingCheck(lhs, rhs, gamma, eta)


# -- condition battery ------------------------------------------------------

def dense(table) -> list:
    """Square-or-rectangular list of rows, padded with zeros."""
    if isinstance(table, LowerTable):
        return table.to_lists()
    rows = [list(r) for r in table]
    if not rows:
        raise ValueError("empty table")
    width = max(len(r) for r in rows)
    return [r + [0] * (width - len(r)) for r in rows]


def _abs_row_sums(A):
    return [sum(abs(v) for v in row) for row in A]


def _row_sums(A):
    return [sum(row) for row in A]


def _checked_columns(A, window):
    """Columns with a full trend window at or below the diagonal."""
    n_rows, width = len(A), len(A[0])
    last = max(0, n_rows - window)
    return range(min(width, last + 1))


def subset_sup_sequence(A, kmax: int) -> list:
    """q_n = max over nonempty K in {0..kmax} of sum_{i<=n} |sum_{k in K} a_ik|."""
    width = len(A[0])
    kmax = min(kmax, width - 1)
    if kmax > KMAX_LIMIT:
        raise ValueError(f"column window {kmax} exceeds {KMAX_LIMIT}; subset enumeration is exponential")
    n_masks = 1 << (kmax + 1)
    z = A[0][0] * 0
    totals = [z] * n_masks
    out = []
    for row in A:
        sums = [z] * n_masks
        for mask in range(1, n_masks):
            low = mask & -mask
            sums[mask] = sums[mask ^ low] + row[low.bit_length() - 1]
        for mask in range(1, n_masks):
            totals[mask] = totals[mask] + abs(sums[mask])
        out.append(max(totals[1:]))
    return out


def _cond(A, key, tol, window, kmax):
    N = len(A)
    if key == "4.4":
        return sup_verdict(subset_sup_sequence(A, kmax), tol, window)
    if key == "4.5":
        return sup_verdict(_abs_row_sums(A), tol, window)
    if key == "4.6":
        return zero_limit_verdict(_abs_row_sums(A), tol, window)
    if key == "4.7":
        cols = _checked_columns(A, window)
        return for_all(((k, zero_limit_verdict([row[k] for row in A], tol, window)) for k in cols), N)
    if key == "4.8":
        return zero_limit_verdict(_row_sums(A), tol, window)
    if key == "4.9":
        cols = _checked_columns(A, window)
        return for_all(((k, limit_exists_verdict([row[k] for row in A], tol, window)) for k in cols), N)
    if key == "4.10":
        limits = []
        for k in range(len(A[0])):
            col = [row[k] for row in A]
            v = limit_exists_verdict(col, tol, window)
            limits.append(v.estimate if v.holds else col[-1])
        devs = [sum(abs(v - lk) for v, lk in zip(row, limits)) for row in A]
        return zero_limit_verdict(devs, tol, window)
    if key == "4.11":
        return limit_exists_verdict(_row_sums(A), tol, window)
    raise KeyError(f"unknown condition {key!r}; choose from {', '.join(BATTERY)}")


def st_battery(
    A,
    which: Iterable[str] = BATTERY,
    tol=None,
    window: int = DEFAULT_WINDOW,
    kmax: int | None = None,
) -> ConditionReport:
    """Evaluate the classical sup/limit conditions on an N-row truncation.

    ``A`` is a list of rows (or a LowerTable); rows past N are unknown.
    Condition 4.4's sup over finite column sets is enumerated over
    nonempty subsets of columns 0..kmax (kmax <= 12) and is a lower bound
    on the true sup.
    """
    rows = dense(A)
    has_float = any(isinstance(v, float) for r in rows for v in r)
    if has_float and any(isinstance(v, Fraction) for r in rows for v in r):
        raise ModeError("table mixes exact and float entries")
    mode = Mode.FLOAT if has_float else Mode.EXACT
    rows = [[check_scalar(v, mode) for v in r] for r in rows]
    tol = resolve_tol(tol, mode)
    if kmax is None:
        kmax = min(len(rows[0]) - 1, KMAX_LIMIT)
    elif kmax > KMAX_LIMIT:
        raise ValueError(f"kmax={kmax} exceeds {KMAX_LIMIT}")
    which = list(which)
    conds = {key: _cond(rows, key, tol, window, kmax) for key in which}
    if "4.6" in conds and conds["4.6"].holds:
        conds["4.6"] = _reconcile_zero_row_sums(rows, conds["4.6"], tol, window)
    return conclude(conds, len(rows))


def _reconcile_zero_row_sums(rows, v46: Verdict, tol, window) -> Verdict:
    """(4.6) implies (4.7) and (4.8), so a failing consequence undercuts it.

    An extrapolated "tends to zero" for the absolute row sums cannot stand
    next to a column or row sum that is bounded away from zero; the
    verdict is then downgraded to INCONCLUSIVE.
    """
    for key in ("4.7", "4.8"):
        implied = _cond(rows, key, tol, window, 0)
        if implied.fails:
            return replace(v46, state=State.INCONCLUSIVE, note=f"extrapolated to zero but ({key}) fails")
    return v46


# -- dual membership --------------------------------------------------------

DUAL_KINDS = {
    "alpha": ("Lambda",),
    "gamma": ("Gamma",),
    "beta_c0": ("B1", "B2", "B3"),
    "beta_c": ("B1", "B3", "B5", "B6"),
    "beta_linf": ("B1", "B4"),
}


def alpha_matrix(p: ParamTriple, a: SeqPrefix, M: int) -> list:
    """Rows c_nj = s_nj a_n (j <= n) of the matrix whose l1-images give a*x."""
    kern = _Kernel(p, a)
    mode = a.mode
    rows = []
    for n in range(M):
        if n > kern.L:
            rows.append([zero(mode)] * M)
            continue
        inner = []
        for j in range(n + 1):
            acc = zero(mode)
            for k in range(n - j + 1):
                acc += kern.coef(k, j)
            inner.append(acc * p.r[j] * a[n])
        rows.append(inner + [zero(mode)] * (M - n - 1))
    return rows


def dual_membership(
    p: ParamTriple,
    a: SeqPrefix,
    kind: str,
    M: int | None = None,
    tol=None,
    window: int = DEFAULT_WINDOW,
    kmax: int | None = None,
) -> ConditionReport:
    """Truncation verdicts for a lying in an alpha-, beta- or gamma-dual."""
    if kind not in DUAL_KINDS:
        raise KeyError(f"unknown dual kind {kind!r}; choose from {', '.join(DUAL_KINDS)}")
    _require_zero_tail(a)
    tol = resolve_tol(tol, a.mode)
    M = default_table_size(a, window) if M is None else M
    dd = dual_derived(p, a, M, with_e=(kind == "gamma"))
    W = dd.W.to_lists()
    conds = {}
    for key in DUAL_KINDS[kind]:
        if key == "Lambda":
            C = alpha_matrix(p, a, M)
            km = min(M - 1, KMAX_LIMIT) if kmax is None else kmax
            conds[key] = sup_verdict(subset_sup_sequence(C, km), tol, window)
        elif key == "Gamma":
            conds[key] = sup_verdict(_abs_row_sums(dd.E.to_lists()), tol, window)
        elif key == "B1":
            partial, acc = [], zero(a.mode)
            for v in dd.R:
                acc += abs(v)
                partial.append(acc)
            conds[key] = sup_verdict(partial, tol, window)
        elif key == "B2":
            conds[key] = _cond(W, "4.7", tol, window, 0)
        elif key == "B3":
            conds[key] = sup_verdict(_abs_row_sums(W), tol, window)
        elif key == "B4":
            conds[key] = zero_limit_verdict(_abs_row_sums(W), tol, window)
        elif key == "B5":
            conds[key] = _cond(W, "4.9", tol, window, 0)
        elif key == "B6":
            conds[key] = limit_exists_verdict(_row_sums(W), tol, window)
    return conclude(conds, M)

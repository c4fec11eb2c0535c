"""Truncation verdicts for asymptotic conditions.

A condition such as ``lim_n sum_k |a_nk| = 0`` cannot be decided from a
finite table.  The evaluators here look at the last ``window`` values of
the monitored quantity and return one of three states:

* ``HOLDS`` - consistent with the condition at this truncation (never a proof),
* ``FAILS`` - a concrete witness shows non-decaying / diverging behaviour,
* ``INCONCLUSIVE`` - neither; the trend is returned for inspection.

All evaluators work on Fractions as well as floats.  Pass ``tol=0`` for
exact comparisons.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

DEFAULT_WINDOW = 8
DEFAULT_TOL = 1e-9


class State(str, enum.Enum):
    HOLDS = "holds_at_truncation"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    state: State
    estimate: object = None
    witness: tuple | None = None
    trend: tuple = ()
    truncation: int = 0
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.state is State.HOLDS

    @property
    def fails(self) -> bool:
        return self.state is State.FAILS


class Conclusion(str, enum.Enum):
    MEMBER = "member_at_truncation"
    NOT_MEMBER = "not_member"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ConditionReport:
    conditions: Mapping[str, Verdict]
    conclusion: Conclusion
    witness: tuple | None = None
    truncation: int = 0
    notes: tuple = field(default_factory=tuple)


def conclude(conditions: Mapping[str, Verdict], truncation: int = 0, notes=()) -> ConditionReport:
    """Conjunction of verdicts: any FAILS wins, then any INCONCLUSIVE."""
    for key, v in conditions.items():
        if v.fails:
            return ConditionReport(dict(conditions), Conclusion.NOT_MEMBER, (key,) + (v.witness or ()), truncation, tuple(notes))
    if all(v.holds for v in conditions.values()):
        return ConditionReport(dict(conditions), Conclusion.MEMBER, None, truncation, tuple(notes))
    return ConditionReport(dict(conditions), Conclusion.INCONCLUSIVE, None, truncation, tuple(notes))


def _nonincreasing(w, tol):
    return all(b <= a + tol for a, b in zip(w, w[1:]))


def _nondecreasing(w, tol):
    return all(b >= a - tol for a, b in zip(w, w[1:]))


def aitken(values: Sequence):
    """Aitken delta-squared extrapolation from the last three values.

    Returns None when the second difference vanishes.
    """
    if len(values) < 3:
        return None
    x0, x1, x2 = values[-3:]
    d2 = x2 - 2 * x1 + x0
    if d2 == 0:
        return None
    return x2 - (x2 - x1) ** 2 / d2


def sup_verdict(values: Sequence, tol=DEFAULT_TOL, window: int = DEFAULT_WINDOW) -> Verdict:
    """Is ``sup_n values[n]`` finite?

    HOLDS when the running sup did not move (beyond ``tol``) during the last
    ``window`` values.  FAILS when the window grows strictly with
    non-shrinking increments (at least linear growth); the witness is the
    last index.  The estimate is always the running sup, so it never
    decreases as the truncation grows.

    None of the verdicts here FAILS before a full window of values exists.
    """
    values = list(values)
    N = len(values)
    if N == 0:
        raise ValueError("no values to judge")
    K = max(1, min(window, N))
    sup = max(values)
    w = values[-K:]
    before = values[:-K]
    trend = tuple(w)
    if before:
        stable = max(w) <= max(before) + tol
    else:
        stable = max(w) - min(w) <= tol
    if stable:
        return Verdict(State.HOLDS, sup, None, trend, N)
    inc = [b - a for a, b in zip(w, w[1:])]
    if K == window and len(inc) >= 2 and all(d > tol for d in inc) and _nondecreasing(inc, 0):
        return Verdict(State.FAILS, sup, (N - 1,), trend, N, "growing without slowing down")
    return Verdict(State.INCONCLUSIVE, sup, None, trend, N)


def zero_limit_verdict(values: Sequence, tol=DEFAULT_TOL, window: int = DEFAULT_WINDOW) -> Verdict:
    """Does ``values[n] -> 0``?  The estimate is ``|values[-1]|``."""
    values = list(values)
    N = len(values)
    if N == 0:
        raise ValueError("no values to judge")
    K = max(1, min(window, N))
    w = values[-K:]
    dev = [abs(v) for v in w]
    trend = tuple(w)
    est = dev[-1]
    if max(dev) <= tol:
        return Verdict(State.HOLDS, est, None, trend, N)
    if len(dev) >= 3 and _nonincreasing(dev, 0) and dev[0] > dev[-1]:
        lim = aitken(w)
        if lim is not None and (abs(lim) <= tol or 2 * abs(lim) <= dev[0]):
            return Verdict(State.HOLDS, est, None, trend, N, f"decreasing, extrapolated limit {lim}")
        return Verdict(State.INCONCLUSIVE, est, None, trend, N, "decreasing, limit unclear")
    if K == window and len(dev) >= 2 and _nondecreasing(dev, 0) and min(dev) > tol:
        return Verdict(State.FAILS, est, (N - 1,), trend, N, "bounded away from zero over the window")
    return Verdict(State.INCONCLUSIVE, est, None, trend, N)


def limit_exists_verdict(values: Sequence, tol=DEFAULT_TOL, window: int = DEFAULT_WINDOW) -> Verdict:
    """Does ``lim values[n]`` exist?  The estimate is the limit guess."""
    values = list(values)
    N = len(values)
    if N == 0:
        raise ValueError("no values to judge")
    K = max(1, min(window, N))
    w = values[-K:]
    trend = tuple(w)
    spread = max(w) - min(w)
    if spread <= tol:
        return Verdict(State.HOLDS, w[-1], None, trend, N)
    steps = [abs(b - a) for a, b in zip(w, w[1:])]
    if len(steps) >= 2 and _nonincreasing(steps, 0) and steps[0] > steps[-1]:
        lim = aitken(w)
        if lim is not None and abs(lim - w[-1]) <= spread:
            return Verdict(State.HOLDS, lim, None, trend, N, "steps shrinking")
        return Verdict(State.INCONCLUSIVE, w[-1], None, trend, N, "steps shrinking, limit unclear")
    if K == window and len(steps) >= 2 and _nondecreasing(steps, 0) and min(steps) > tol:
        return Verdict(State.FAILS, w[-1], (N - 1,), trend, N, "steps not shrinking")
    return Verdict(State.INCONCLUSIVE, w[-1], None, trend, N)


def for_all(items: Iterable[tuple[int, Verdict]], truncation: int = 0) -> Verdict:
    """Combine per-index verdicts for a "for all k" condition.

    The first FAILS is returned with its index prepended to the witness.
    Otherwise INCONCLUSIVE if any item is, else HOLDS with the largest
    absolute estimate.
    """
    items = list(items)
    if not items:
        return Verdict(State.HOLDS, 0, None, (), truncation, "no indices to check")
    pending = None
    best = None
    for idx, v in items:
        if v.fails:
            return Verdict(State.FAILS, v.estimate, (idx,) + (v.witness or ()), v.trend, truncation, v.note)
        if v.state is State.INCONCLUSIVE and pending is None:
            pending = (idx, v)
        if best is None or abs(v.estimate) > abs(best[1].estimate):
            best = (idx, v)
    if pending is not None:
        idx, v = pending
        return Verdict(State.INCONCLUSIVE, v.estimate, (idx,), v.trend, truncation, v.note)
    idx, v = best
    return Verdict(State.HOLDS, v.estimate, None, v.trend, truncation)

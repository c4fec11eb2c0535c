"""Schauder bases of c0(r,s,t;Delta) and c(r,s,t;Delta) on prefixes."""

from __future__ import annotations

import enum
from functools import lru_cache
from dataclasses import dataclass

from .core import SeqPrefix, Tail, check_scalar, same_mode, zero
from .genmeans import ParamTriple, d_coeffs, forward, space_norm
from .verdict import DEFAULT_WINDOW, Verdict, limit_exists_verdict


class Form(str, enum.Enum):
    C0 = "c0_form"
    C = "c_form"


@dataclass(frozen=True)
class BasisVector:
    index: int
    prefix: SeqPrefix


@lru_cache(maxsize=512)
def basis_vector(p: ParamTriple, j: int, n: int | None = None) -> BasisVector:
    """b^(j) truncated to length n.

    For j >= 0, b^(j)_i = sum_{k=0}^{i-j} (-1)^k (D_k / t_{k+j}) r_j when
    j <= i and 0 before; b^(-1)_i is the double sum over j = 0..i of the
    same terms.
    """
    n = len(p) if n is None else n
    if j >= n:
        raise ValueError(f"basis index {j} outside a length-{n} prefix")
    if j < -1:
        raise ValueError(f"basis index must be >= -1, got {j}")
    if n > len(p):
        raise ValueError(f"parameters known up to length {len(p)}, {n} requested")
    mode = p.mode
    D = d_coeffs(p.s, n)

    def inner(i, jj):
        acc = zero(mode)
        for k in range(i - jj + 1):
            term = D[k] / p.t[k + jj]
            acc = acc + term if k % 2 == 0 else acc - term
        return acc * p.r[jj]

    if j >= 0:
        vals = [inner(i, j) if i >= j else zero(mode) for i in range(n)]
    else:
        vals = [sum((inner(i, jj) for jj in range(i + 1)), zero(mode)) for i in range(n)]
    return BasisVector(j, SeqPrefix(tuple(vals), mode, Tail.UNKNOWN))


@dataclass(frozen=True)
class ExpansionResult:
    """Coefficients mu = T x, the limit used for the c form, and residuals.

    ``residuals[J]`` is the space norm of ``x`` minus the order-J partial
    sum, in the form given by ``form``.  ``limit_verdict`` is set when the
    limit was estimated rather than supplied.
    """

    coefficients: SeqPrefix
    limit: object = None
    limit_verdict: Verdict | None = None
    residuals: tuple = ()
    form: Form = Form.C0
    x: SeqPrefix | None = None

    @property
    def limit_estimated(self) -> bool:
        return self.limit_verdict is not None


def estimate_limit(mu: SeqPrefix, tol=0, window: int = DEFAULT_WINDOW) -> Verdict:
    """Labelled estimate of lim mu_n; only trust it when the verdict holds."""
    return limit_exists_verdict(list(mu), tol, window)


def expand(
    p: ParamTriple,
    x: SeqPrefix,
    limit=None,
    *,
    form: Form | str = Form.C0,
    estimate: bool = False,
    tol=0,
    window: int = DEFAULT_WINDOW,
) -> ExpansionResult:
    """Basis coefficients of x with residual norms for every order J.

    For the c form the limit of (Tx)_n must be given, or ``estimate=True``
    to take a labelled estimate from the tail of mu.  An estimate whose
    verdict does not hold leaves ``limit`` as None.
    """
    form = Form(form)
    mu = forward(p, x)
    verdict = None
    if form is Form.C and limit is None and estimate:
        verdict = estimate_limit(mu, tol, window)
        if verdict.holds:
            limit = verdict.estimate
    if limit is not None:
        limit = check_scalar(limit, x.mode)
    res = ExpansionResult(mu, limit, verdict, (), form, x)
    if form is Form.C and limit is None:
        return res
    residuals = tuple(
        space_norm(p, x - reconstruct(p, res, J, form)) for J in range(len(x))
    )
    return ExpansionResult(mu, limit, verdict, residuals, form, x)


def reconstruct(p: ParamTriple, e: ExpansionResult, J: int, form: Form | str = Form.C0) -> SeqPrefix:
    """Partial sum of order J.

    c0 form: sum_{j<=J} mu_j b^(j)
    c form:  limit * b^(-1) + sum_{j<=J} (mu_j - limit) b^(j)
    """
    form = Form(form)
    mu = e.coefficients
    n = len(mu)
    if not 0 <= J < n:
        raise ValueError(f"order {J} outside 0..{n - 1}")
    same_mode(p.mode, mu.mode)
    if form is Form.C and e.limit is None:
        raise ValueError("the c form needs the limit of (Tx)_n; none was supplied or estimated")
    acc = SeqPrefix.zeros(n, mu.mode, Tail.UNKNOWN)
    if form is Form.C:
        acc = acc + basis_vector(p, -1, n).prefix.scale(e.limit)
    for j in range(J + 1):
        c = mu[j] - e.limit if form is Form.C else mu[j]
        if c != 0:
            acc = acc + basis_vector(p, j, n).prefix.scale(c)
    return acc

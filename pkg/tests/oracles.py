"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from math import comb

from hypothesis import strategies as st

from seqspaces import ParamTriple, SeqPrefix, Tail


def det(M):
    """Leibniz expansion; fine for the n <= 6 matrices used here."""
    n = len(M)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(1)
        for i in range(n):
            term *= M[i][perm[i]]
            if term == 0:
                break
        total += -term if inversions % 2 else term
    return total


def d_by_determinant(s, n):
    """D_n = det(M_n) / s_0^(n+1), with M_n[i][j] = s_{i-j+1} (1-based, zero for negative index)."""
    if n == 0:
        return 1 / Fraction(s[0])

    def entry(i, j):
        idx = i - j + 1
        return Fraction(s[idx]) if 0 <= idx < len(s) else Fraction(0)

    M = [[entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    return det(M) / Fraction(s[0]) ** (n + 1)


def direct_forward(p, x):
    """y_n = (1/r_n) sum_k s_{n-k} t_k (x_k - x_{k-1})."""
    dx = [x[k] - (x[k - 1] if k else 0) for k in range(len(x))]
    return [sum(p.s[n - k] * p.t[k] * dx[k] for k in range(n + 1)) / p.r[n] for n in range(len(x))]


def dense_product(X, Y):
    n = len(X)
    return [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


# Uncorrected closed forms (the widely quoted versions), kept so the tests can show where they go wrong.

def uncorrected_euler_R(alpha, row, k):
    tails = row.tail_sums()
    acc = row[k] / alpha ** k + (1 / alpha ** k - 1 / alpha ** (k + 1)) * tails[k + 1]
    for l in range(2, len(row) - k):
        term = comb(l + k, l) * (1 - alpha) ** l / alpha ** (k + l) * tails[k + l]
        acc += term if l % 2 == 0 else -term
    return acc


def uncorrected_aydin_basar_w(alpha, row, m, k):
    tails = row.tail_sums()
    d = 1 / (1 + alpha ** k) - 1 / (1 + alpha ** (k + 1))
    return (k + 1) * (d * tails[m] - tails[m + 1] / (1 + alpha ** (m + 1)))


def uncorrected_aydin_basar_abs_w_sum(alpha, row, m):
    tails = row.tail_sums()
    s = sum((k + 1) * (1 / (1 + alpha ** k) - 1 / (1 + alpha ** (k + 1))) for k in range(m + 1))
    return s * abs(tails[m]) + abs(row[m]) * (m + 1) / (1 + alpha ** (m + 1))


# -- random inputs ----------------------------------------------------------

def rand_q(rng: random.Random, nonzero=False, span=9):
    while True:
        v = Fraction(rng.randint(-span, span), rng.randint(1, span))
        if v or not nonzero:
            return v


def rand_params(rng, n):
    return ParamTriple.of(
        [rand_q(rng, True) for _ in range(n)],
        [rand_q(rng, True)] + [rand_q(rng) for _ in range(n - 1)],
        [rand_q(rng, True) for _ in range(n)],
    )


def rand_seq(rng, n, tail=Tail.UNKNOWN):
    return SeqPrefix(tuple(rand_q(rng) for _ in range(n)), tail=tail)


def rand_finite(rng, support, n):
    """Zero-tailed prefix of length n whose nonzero entries sit at indices < support."""
    vals = [rand_q(rng) if i < support else Fraction(0) for i in range(n)]
    return SeqPrefix(tuple(vals), tail=Tail.ZERO)


small_q = st.fractions(min_value=-9, max_value=9, max_denominator=9)
nonzero_q = small_q.filter(bool)


@st.composite
def params(draw, n=None, min_n=2, max_n=8):
    n = draw(st.integers(min_n, max_n)) if n is None else n
    r = draw(st.lists(nonzero_q, min_size=n, max_size=n))
    t = draw(st.lists(nonzero_q, min_size=n, max_size=n))
    s = [draw(nonzero_q)] + draw(st.lists(small_q, min_size=n - 1, max_size=n - 1))
    return ParamTriple.of(r, s, t)


def seqs(n, tail=Tail.UNKNOWN):
    return st.lists(small_q, min_size=n, max_size=n).map(lambda v: SeqPrefix(tuple(v), tail=tail))


@st.composite
def params_and_seq(draw, min_n=2, max_n=8):
    p = draw(params(min_n=min_n, max_n=max_n))
    x = draw(seqs(len(p)))
    return p, x


@st.composite
def finite_seq(draw, n, max_support=5):
    support = draw(st.integers(0, min(max_support, n)))
    vals = draw(st.lists(small_q, min_size=support, max_size=support))
    return SeqPrefix(tuple(vals) + (Fraction(0),) * (n - support), tail=Tail.ZERO)

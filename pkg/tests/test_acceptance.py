"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script.
"""

import random
import time
from fractions import Fraction as F
from math import factorial

import pytest

from seqspaces import (
    Conclusion,
    SeqPrefix,
    State,
    application_closed_forms,
    basis_vector,
    build_triangle,
    classify,
    d_coeffs,
    dual_derived,
    expand,
    forward,
    identity,
    inverse_transform,
    pairing_identity_check,
    preset,
    product,
    reconstruct,
    space_norm,
    st_battery,
)
from seqspaces.duals import BATTERY
from seqspaces.matclass import CONDITIONS, SPACES

from conftest import ACCEPTANCE_LINES
from oracles import d_by_determinant, rand_finite, rand_params, rand_q, rand_seq

SEED = 20261015


def report(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_exact_inverse_identity():
    rng = random.Random(SEED + 1)
    n, cases, bad = 12, 100, 0
    I = identity(n)
    start = time.perf_counter()
    for _ in range(cases):
        p = rand_params(rng, n)
        A, B, T, S = (build_triangle(p, k) for k in "ABTS")
        bad += product(A, B) != I or product(T, S) != I
    elapsed = time.perf_counter() - start
    report(1, "exact inverse identity A*B = I, T*S = I", bad == 0 and elapsed < 5,
           f"{cases} triples, N={n}, {bad} failures, {elapsed:.2f}s < 5s")


def test_2_d_coefficients():
    rng = random.Random(SEED + 2)
    bad = 0
    for _ in range(50):
        s = [rand_q(rng, True)] + [rand_q(rng) for _ in range(5)]
        D = d_coeffs(SeqPrefix.of(s))
        bad += any(D[m] != d_by_determinant(s, m) for m in range(6))
    euler_bad = 0
    for alpha in (F(1, 2), F(1, 3), F(3, 4)):
        D = d_coeffs(preset("euler", 11, alpha=alpha).s)
        euler_bad += any(D[k] != (1 - alpha) ** k / factorial(k) for k in range(11))
    report(2, "D coefficients: recurrence = determinant, Euler closed form", bad == 0 and euler_bad == 0,
           "50 random s with n <= 5; Euler alpha in {1/2, 1/3, 3/4}, k <= 10")


def test_3_round_trip():
    rng = random.Random(SEED + 3)
    n, bad = 16, 0
    for _ in range(100):
        p = rand_params(rng, n)
        x = rand_seq(rng, n)
        bad += inverse_transform(p, forward(p, x)) != x or forward(p, inverse_transform(p, x)) != x
    report(3, "round trip in both directions", bad == 0, f"100 cases, N={n}, {bad} failures")


def test_4_norm_preservation():
    rng = random.Random(SEED + 4)
    n, bad = 16, 0
    for _ in range(100):
        p = rand_params(rng, n)
        y = rand_seq(rng, n)
        bad += space_norm(p, inverse_transform(p, y)) != max(abs(v) for v in y)
    report(4, "norm preservation ||S y|| = sup |y|", bad == 0, f"100 cases, N={n}")


def test_5_basis_suite():
    rng = random.Random(SEED + 5)
    n, failures = 10, []
    for case in range(20):
        p = rand_params(rng, n)
        total = SeqPrefix.zeros(n, tail="unknown")
        for j in range(n):
            b = basis_vector(p, j).prefix
            if forward(p, b) != SeqPrefix.unit(j, n, tail="unknown"):
                failures.append(("biorthogonality", case, j))
            total = total + b
        if basis_vector(p, -1).prefix != total:
            failures.append(("b(-1) sum", case))
        x = rand_seq(rng, n)
        e = expand(p, x)
        if reconstruct(p, e, n - 1) != x:
            failures.append(("reconstruction", case))
        res = e.residuals
        if any(a < b for a, b in zip(res, res[1:])) or res[-1] != 0:
            failures.append(("residuals", case))
    for case in range(10):
        u = [rand_q(rng, True) for _ in range(n)]
        v = [rand_q(rng, True) for _ in range(n)]
        p = preset("polat_uv", u=u, v=v)
        for j in range(n):
            b = basis_vector(p, j).prefix
            closed = [0 if i < j else 1 / (u[i] * v[i]) if i == j else (1 / u[j]) * (1 / v[j] - 1 / v[j + 1]) for i in range(n)]
            if list(b) != closed:
                failures.append(("polat_uv closed form", case, j))
    report(5, "basis suite", not failures, f"{len(failures)} failures" if failures else "30 parameter sets, N=10")


def test_6_pairings():
    rng = random.Random(SEED + 6)
    n, bad = 12, []
    for case in range(100):
        p = rand_params(rng, n)
        a = rand_finite(rng, rng.randint(0, 5), n)
        z = rand_seq(rng, n)
        check = pairing_identity_check(p, a, z)
        if not check.equal:
            bad.append(("R pairing", case))
        dd = dual_derived(p, a, n)
        if dd.gamma != 0 or check.gamma != 0:
            bad.append(("gamma", case))
        y = rand_seq(rng, n)
        x = inverse_transform(p, y)
        for m in range(n):
            lhs = sum((a[i] * x[i] for i in range(m + 1)), F(0))
            rhs = sum((dd.E.entry(m, i) * y[i] for i in range(m + 1)), F(0))
            if lhs != rhs:
                bad.append(("E pairing", case, m))
                break
    report(6, "R- and E-pairing identities, gamma = 0", not bad, f"100 cases, support <= 5, N={n}, {len(bad)} failures")


def test_7_closed_forms():
    rng = random.Random(SEED + 7)
    n, mismatches, checked = 10, [], 0
    for name in ("euler", "aydin_basar"):
        for alpha in (F(1, 2), F(1, 3)):
            for _ in range(10):
                rows = [rand_finite(rng, rng.randint(0, 6), n) for _ in range(n)]
                check = application_closed_forms(name, alpha, rows)
                checked += 1
                mismatches += [(name, alpha) + m for m in check.mismatches]
    report(7, "preset closed forms equal the general tables", not mismatches,
           f"{checked} random matrices, N={n}, alpha in {{1/2, 1/3}}, {len(mismatches)} mismatched entries")


def test_8_battery_sanity():
    problems = []
    n = 12
    zero_rows = [[0] * n for _ in range(n)]
    rep = st_battery(zero_rows)
    if set(rep.conditions) != set(BATTERY) or any(not v.holds or v.estimate != 0 for v in rep.conditions.values()):
        problems.append("zero matrix battery")
    p = preset("cesaro", n)
    for src in SPACES:
        for dst in SPACES:
            if classify(p, zero_rows, src, dst).conclusion is not Conclusion.MEMBER:
                problems.append(f"zero matrix {src}->{dst}")
    I = [[1 if i == k else 0 for k in range(n)] for i in range(n)]
    v = st_battery(I, ["4.6"]).conditions["4.6"]
    if v.state is not State.FAILS or not v.witness:
        problems.append("identity 4.6")
    N = 20
    halving = [[2.0 ** -i if k <= i else 0.0 for k in range(N)] for i in range(N)]
    v = st_battery(halving, ["4.6"]).conditions["4.6"]
    decreasing = all(a > b for a, b in zip(v.trend, v.trend[1:]))
    err = abs(v.estimate - N / 2 ** (N - 1))
    if v.state is not State.HOLDS or not decreasing or err > 1e-12:
        problems.append(f"halving rows: {v.state}, error {err}")
    fidelity = {
        ("c0", "c0"): {"4.12", "4.13", "4.14", "4.15"},
        ("c0", "c"): {"4.12", "4.14", "4.15", "4.16"},
        ("c0", "linf"): {"4.12", "4.14", "4.15"},
        ("linf", "c0"): {"4.17", "4.18"},
        ("linf", "c"): {"4.12", "4.16", "4.18", "4.19"},
        ("linf", "linf"): {"4.12", "4.18"},
        ("c", "c0"): {"4.12", "4.13", "4.14", "4.20", "4.21", "4.22"},
        ("c", "c"): {"4.12", "4.14", "4.16", "4.20", "4.21", "4.24"},
        ("c", "linf"): {"4.12", "4.14", "4.20", "4.21", "4.23"},
    }
    if {k: set(v) for k, v in CONDITIONS.items()} != fidelity:
        problems.append("condition list table")
    report(8, "condition battery sanity", not problems,
           "; ".join(problems) if problems else "estimate 20/2^19 within 1e-12, 9 pairs, fidelity table")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))

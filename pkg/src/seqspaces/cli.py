"""Command-line front end.

Every subcommand reads an optional JSON job document (``--input FILE``,
``-`` for stdin) and lets flags override its fields.  Exit status: 0 on
success, 1 when a dual/classify verdict FAILS (or selftest fails), 2 on
input errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .basis import Form, basis_vector, expand, reconstruct
from .core import Mode, ModeError, SeqPrefix, TriangleError, identity, invert_oracle, product
from .duals import BATTERY, DUAL_KINDS, TailError, dual_derived, dual_membership, st_battery
from .genmeans import (
    Kind,
    ParamError,
    ParamTriple,
    build_triangle,
    d_coeffs,
    forward,
    inverse_transform,
    space_norm,
)
from .jsonio import (
    InputError,
    dumps,
    loads,
    parse_job,
    report_out,
    scalar_out,
    seq_out,
    table_out,
)
from .matclass import SPACES, classify
from .verdict import Conclusion, State

log = logging.getLogger("seqspaces")

MODE_ENV = "SEQSPACES_MODE"

# Job fields each subcommand reads; anything else in the document is ignored with a warning.
USES = {
    "dcoeffs": {"s", "r", "t", "preset", "N"},
    "build": {"r", "s", "t", "preset", "N"},
    "transform": {"r", "s", "t", "preset", "N", "x", "y"},
    "norm": {"r", "s", "t", "preset", "N", "x"},
    "basis": {"r", "s", "t", "preset", "N"},
    "expand": {"r", "s", "t", "preset", "N", "x", "tol", "trend_window"},
    "dual": {"r", "s", "t", "preset", "N", "M", "a", "tol", "trend_window"},
    "battery": {"A", "tol", "trend_window"},
    "classify": {"r", "s", "t", "preset", "N", "M", "A", "tol", "trend_window"},
    "preset-list": set(),
    "selftest": {"N"},
}

PRESET_HELP = {
    "polat_uv": "r_n = 1/u_n, t_n = v_n, s_n = 1   (args: u, v)",
    "cesaro": "r_n = n+1, s_n = t_n = 1          (args: N)",
    "euler": "r_n = 1/n!, t_n = alpha^n/n!, s_n = (1-alpha)^n/n!   (args: alpha in (0,1), N)",
    "aydin_basar": "r_n = n+1, t_n = 1+alpha^n, s_n = 1   (args: alpha in (0,1), N)",
}

STATE_TEXT = {State.HOLDS: "HOLDS*", State.FAILS: "FAILS", State.INCONCLUSIVE: "INCONCLUSIVE"}


def _fmt(v) -> str:
    out = scalar_out(v)
    return str(out)


def _seq_text(seq) -> str:
    return "[" + ", ".join(_fmt(v) for v in seq) + "]"


def _report_text(rep, title: str) -> str:
    lines = [title]
    for key, v in rep.conditions.items():
        extra = f"  witness={list(v.witness)}" if v.witness else ""
        lines.append(f"  ({key}) {STATE_TEXT[v.state]:<13} estimate={_fmt(v.estimate)}{extra}")
    lines.append(f"  conclusion: {rep.conclusion.value}")
    if rep.witness:
        lines.append(f"  witness: {list(rep.witness)}")
    for note in rep.notes:
        lines.append(f"  note: {note}")
    lines.append(f"  * at truncation N={rep.truncation}; not a statement about the infinite matrix")
    return "\n".join(lines)


def _table_text(T) -> str:
    return "\n".join("  " + "  ".join(_fmt(v) for v in row) for row in T.rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqspaces", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="JSON job document ('-' for stdin)")
    common.add_argument("--mode", choices=[m.value for m in Mode], help=f"numeric mode (default ${MODE_ENV} or exact)")
    common.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
    common.add_argument("--preset", help="preset name, see preset-list")
    common.add_argument("--alpha", help="preset alpha, e.g. 1/2")
    common.add_argument("--u", help="polat_uv u values, comma separated")
    common.add_argument("--v", help="polat_uv v values, comma separated")
    common.add_argument("--r", help="comma separated r values")
    common.add_argument("--s", help="comma separated s values")
    common.add_argument("--t", help="comma separated t values")
    common.add_argument("--N", "--n", type=int, dest="N", help="truncation size")
    common.add_argument("--M", type=int, dest="M", help="table size for dual tables")
    common.add_argument("--tol", help="tolerance (exact mode compares exactly by default)")
    common.add_argument("--window", type=int, dest="trend_window", help="trend window K")

    sub.add_parser("dcoeffs", parents=[common], help="D coefficients of s")
    p = sub.add_parser("build", parents=[common], help="closed-form triangle A, B, T, S or Delta")
    p.add_argument("--kind", choices=[k.value for k in Kind], default="A")
    p = sub.add_parser("transform", parents=[common], help="forward transform of x, or inverse of y")
    p.add_argument("--x")
    p.add_argument("--y")
    p = sub.add_parser("norm", parents=[common], help="truncated space norm of x")
    p.add_argument("--x")
    p = sub.add_parser("basis", parents=[common], help="basis vector b^(j)")
    p.add_argument("--j", type=int, default=0)
    p = sub.add_parser("expand", parents=[common], help="basis coefficients and reconstruction")
    p.add_argument("--x")
    p.add_argument("--form", choices=[f.value for f in Form], default=Form.C0.value)
    p.add_argument("--limit", help="lim (Tx)_n for the c form")
    p.add_argument("--estimate-limit", action="store_true", help="estimate the limit from the tail of Tx")
    p = sub.add_parser("dual", parents=[common], help="R(a), W, E and dual membership verdicts")
    p.add_argument("--a")
    p.add_argument("--kind", choices=list(DUAL_KINDS), default="beta_c0")
    p.add_argument("--kmax", type=int)
    p = sub.add_parser("battery", parents=[common], help="classical conditions 4.4-4.11 on a matrix")
    p.add_argument("--A", dest="A_json", help="matrix as a JSON array of rows")
    p.add_argument("--which", help="comma separated condition ids")
    p.add_argument("--kmax", type=int)
    p = sub.add_parser("classify", parents=[common], help="matrix map class verdict")
    p.add_argument("--A", dest="A_json", help="matrix as a JSON array of rows")
    p.add_argument("--from", dest="source", choices=SPACES, default="c0")
    p.add_argument("--to", dest="target", choices=SPACES, default="c0")
    sub.add_parser("preset-list", parents=[common], help="list parameter presets")
    sub.add_parser("selftest", parents=[common], help="exact identity checks")
    return parser


def _load_doc(args) -> dict:
    if not args.input:
        return {}
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError("--input", str(exc)) from None
    return loads(text)


def _merge_flags(doc: dict, args) -> dict:
    doc = dict(doc)
    for key in ("r", "s", "t"):
        if getattr(args, key, None):
            doc[key] = getattr(args, key)
    for key in ("x", "y", "a"):
        if getattr(args, key, None):
            doc[key] = getattr(args, key)
    if getattr(args, "A_json", None):
        doc["A"] = loads('{"A": %s}' % args.A_json)["A"]
    if args.preset:
        block = {"name": args.preset}
        if args.alpha:
            block["alpha"] = args.alpha
        for key in ("u", "v"):
            if getattr(args, key):
                block[key] = [x for x in getattr(args, key).split(",") if x.strip()]
        doc["preset"] = block
    for key in ("N", "M", "trend_window"):
        if getattr(args, key) is not None:
            doc[key] = getattr(args, key)
    if args.tol is not None:
        doc["tol"] = args.tol
    return doc


def _mode(args, doc) -> Mode:
    if args.mode:
        return Mode(args.mode)
    if "mode" in doc:
        return Mode(doc["mode"])
    env = os.environ.get(MODE_ENV)
    if env:
        try:
            return Mode(env)
        except ValueError:
            raise InputError(MODE_ENV, f"unknown mode {env!r}") from None
    return Mode.EXACT


def _require(job, key):
    v = getattr(job, key)
    if v is None:
        raise InputError(key, f"{key} is required for this command")
    return v


def _emit(args, payload: dict, text: str):
    if args.fmt == "json":
        print(dumps(payload))
    else:
        print(text)


def cmd_dcoeffs(job, args):
    if job.s is not None:
        s = job.s
    else:
        s = job.params().s
    n = job.N if job.N is not None else len(s)
    if n > len(s):
        raise InputError("N", f"s has only {len(s)} entries")
    D = d_coeffs(s, n)
    _emit(args, {"command": "dcoeffs", "mode": job.mode.value, "values": seq_out(D.values)},
          "D = " + _seq_text(D.values))
    return 0


def cmd_build(job, args):
    p = job.params()
    T = build_triangle(p, args.kind, job.N)
    _emit(args, {"command": "build", "kind": args.kind, "N": T.size, "rows": table_out(T)},
          f"{args.kind} (N={T.size}):\n" + _table_text(T))
    return 0


def cmd_transform(job, args):
    if job.x is None and job.y is None:
        raise InputError("x/y", "give x (forward) or y (inverse)")
    if job.x is not None:
        p = job.params(job.N or len(job.x))
        out = forward(p, job.x)
        name = "forward"
    else:
        p = job.params(job.N or len(job.y))
        out = inverse_transform(p, job.y)
        name = "inverse"
    _emit(args, {"command": "transform", "direction": name, "values": seq_out(out)},
          f"{name}: " + _seq_text(out))
    return 0


def cmd_norm(job, args):
    x = _require(job, "x")
    p = job.params(job.N or len(x))
    v = space_norm(p, x)
    _emit(args, {"command": "norm", "N": len(x), "value": scalar_out(v)},
          f"||x|| (truncated at N={len(x)}) = {_fmt(v)}")
    return 0


def cmd_basis(job, args):
    p = job.params()
    b = basis_vector(p, args.j, job.N or len(p))
    _emit(args, {"command": "basis", "j": args.j, "values": seq_out(b.prefix)},
          f"b^({args.j}) = " + _seq_text(b.prefix))
    return 0


def cmd_expand(job, args):
    x = _require(job, "x")
    p = job.params(job.N or len(x))
    limit = None
    if args.limit is not None:
        from .core import to_scalar
        limit = to_scalar(args.limit, job.mode)
    e = expand(p, x, limit, form=args.form, estimate=args.estimate_limit,
               tol=job.tol if job.tol is not None else 0,
               window=job.trend_window or 8)
    payload = {
        "command": "expand",
        "form": e.form.value,
        "coefficients": seq_out(e.coefficients),
        "limit": scalar_out(e.limit),
        "limit_estimated": e.limit_estimated,
        "residuals": seq_out(e.residuals),
    }
    text = [f"mu = {_seq_text(e.coefficients)}"]
    if e.limit_verdict is not None:
        payload["limit_verdict"] = STATE_TEXT[e.limit_verdict.state]
        text.append(f"limit (estimate, {STATE_TEXT[e.limit_verdict.state]}) = {_fmt(e.limit)}")
    elif e.limit is not None:
        text.append(f"limit = {_fmt(e.limit)}")
    if e.residuals:
        payload["reconstruction"] = seq_out(reconstruct(p, e, len(x) - 1, e.form))
        text.append(f"residual norms by order J: {_seq_text(e.residuals)}")
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_dual(job, args):
    a = _require(job, "a")
    p = job.params(job.N or len(a))
    window = job.trend_window or 8
    dd = dual_derived(p, a, job.M)
    rep = dual_membership(p, a, args.kind, job.M, job.tol, window, args.kmax)
    payload = {
        "command": "dual",
        "kind": args.kind,
        "R": seq_out(dd.R),
        "W": table_out(dd.W),
        "E": table_out(dd.E),
        "gamma": scalar_out(dd.gamma),
        "report": report_out(rep),
    }
    text = f"R(a) = {_seq_text(dd.R)}\ngamma = {_fmt(dd.gamma)}\n" + _report_text(rep, f"{args.kind} membership")
    _emit(args, payload, text)
    return 1 if rep.conclusion is Conclusion.NOT_MEMBER else 0


def cmd_battery(job, args):
    A = _require(job, "A")
    which = BATTERY if not args.which else [w.strip() for w in args.which.split(",")]
    bad = [w for w in which if w not in BATTERY]
    if bad:
        raise InputError("--which", f"unknown condition(s) {bad}")
    rows = [list(r) for r in A]
    rep = st_battery(rows, which, job.tol, job.trend_window or 8, args.kmax)
    _emit(args, {"command": "battery", "report": report_out(rep)}, _report_text(rep, "conditions"))
    return 0


def cmd_classify(job, args):
    A = _require(job, "A")
    width = max(len(r) for r in A)
    p = job.params(job.N or width)
    rep = classify(p, A, args.source, args.target, job.tol, job.trend_window or 8, job.M)
    payload = {
        "command": "classify",
        "from": rep.source,
        "to": rep.target,
        "report": report_out(rep),
        "BA": table_out(rep.tables.BA),
        "gamma": seq_out(rep.tables.gamma),
    }
    _emit(args, payload, _report_text(rep, f"A in ({rep.source}(r,s,t;Delta), {rep.target})"))
    return 1 if rep.conclusion is Conclusion.NOT_MEMBER else 0


def cmd_preset_list(job, args):
    _emit(args, {"command": "preset-list", "presets": PRESET_HELP},
          "\n".join(f"{k:<12} {v}" for k, v in PRESET_HELP.items()))
    return 0


def selftest(n: int = 12, seed: int = 0) -> dict:
    """Exact identity checks on a few random and preset parameter triples."""
    import random

    rng = random.Random(seed)

    def rnd():
        return Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))

    triples = [ParamTriple.of([rnd() for _ in range(n)], [rnd() for _ in range(n)], [rnd() for _ in range(n)]) for _ in range(5)]
    from .genmeans import preset
    triples += [preset("cesaro", n), preset("euler", n, alpha="1/2"), preset("aydin_basar", n, alpha="1/3")]
    I = identity(n)
    checks = {"A*B = I": True, "T*S = I": True, "B = inverse(A)": True, "round trip": True}
    for p in triples:
        A, B = build_triangle(p, "A"), build_triangle(p, "B")
        T, S = build_triangle(p, "T"), build_triangle(p, "S")
        checks["A*B = I"] &= product(A, B) == I
        checks["T*S = I"] &= product(T, S) == I
        checks["B = inverse(A)"] &= invert_oracle(A) == B
        y = SeqPrefix(tuple(rnd() for _ in range(n)))
        checks["round trip"] &= forward(p, inverse_transform(p, y)) == y
        checks["round trip"] &= inverse_transform(p, forward(p, y)) == y
    return checks


def cmd_selftest(job, args):
    n = job.N or 12
    t0 = time.perf_counter()
    checks = selftest(n)
    elapsed = time.perf_counter() - t0
    ok = all(checks.values())
    _emit(args, {"command": "selftest", "N": n, "passed": ok, "checks": checks, "seconds": round(elapsed, 3)},
          "\n".join(f"{'PASS' if v else 'FAIL'}  {k}" for k, v in checks.items()) + f"\n(N={n}, {elapsed:.2f}s)")
    return 0 if ok else 1


COMMANDS = {
    "dcoeffs": cmd_dcoeffs,
    "build": cmd_build,
    "transform": cmd_transform,
    "norm": cmd_norm,
    "basis": cmd_basis,
    "expand": cmd_expand,
    "dual": cmd_dual,
    "battery": cmd_battery,
    "classify": cmd_classify,
    "preset-list": cmd_preset_list,
    "selftest": cmd_selftest,
}


def run(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _merge_flags(_load_doc(args), args)
        mode = _mode(args, doc)
        doc.pop("mode", None)
        for key in doc:
            if key not in USES[args.command]:
                log.warning("field %r is not used by %s", key, args.command)
        job = parse_job({k: v for k, v in doc.items() if k in USES[args.command]}, mode)
        return COMMANDS[args.command](job, args)
    except (InputError, ParamError, ModeError, TriangleError, TailError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

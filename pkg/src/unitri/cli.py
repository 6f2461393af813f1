"""Command-line front end.

    unitri tv-curve --walk Q --n 3 --p 5 --t-max 40
    unitri bound-curve --n 2 --p 5 --t-max 30 --format json
    unitri verify

Exit codes: 0 success, 1 usage error, 2 capacity error, 3 invariant failure (the failing
checks are printed to stderr as JSON).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

from unitri import __version__
from unitri.config import COMMANDS, FORMATS, RunConfig, parse_config_text
from unitri.errors import CapacityError, UsageError
from unitri.group import eval_word, group_order
from unitri.walks import WalkSpec, iter_distributions, l2_distance_sq, tv_distance

DEFAULT_T_MAX = 20


class InvariantFailure(Exception):
    def __init__(self, failures: list[dict]):
        super().__init__(f"{len(failures)} invariant check(s) failed")
        self.failures = failures


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which is our capacity code
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unitri", description="Random walks on unitriangular groups mod p.")
    parser.add_argument("--version", action="version", version=f"unitri {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key=value file; flags given here override it")
        sp.add_argument("--n", type=int, help="matrix size (coordinate count for productQ)")
        sp.add_argument("--p", type=int, help="odd prime modulus")
        sp.add_argument("--walk", choices=["P", "Q", "K", "productQ"])
        sp.add_argument("--t", type=int, help="first time step reported")
        sp.add_argument("--t-max", type=int, dest="t_max", help="last time step")
        sp.add_argument("--eps", type=float, help="mixing threshold for tv-curve")
        sp.add_argument("--format", choices=FORMATS)
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--exact", action="store_true", default=None, help="rational arithmetic")
        sp.add_argument("--jobs", type=int, help="worker threads for convolution")
    return parser


def resolve_config(argv: list[str] | None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        values.update(parse_config_text(text))
    for key in ("n", "p", "walk", "t", "t_max", "eps", "format", "out", "exact", "jobs"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    values["command"] = args.command
    return RunConfig(**values)


# output

def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        v = float(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def render(records: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        rows = [{c: _json_value(r[c]) for c in columns} for r in records]
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow([_cell(r[c]) for c in columns])
    return buf.getvalue()


# commands

def _need(cfg: RunConfig, *keys: str) -> None:
    missing = [k for k in keys if getattr(cfg, k) is None]
    if missing:
        raise UsageError(f"{cfg.command} needs --{' --'.join(k.replace('_', '-') for k in missing)}")


def walk_spec(cfg: RunConfig, default: str = "Q") -> WalkSpec:
    kind = (cfg.walk or default).lower()
    _need(cfg, "p")
    if kind == "k":
        return WalkSpec("K", cfg.p)
    _need(cfg, "n")
    if kind == "productq":
        return WalkSpec("ProductQ", cfg.p, N=cfg.n)
    return WalkSpec(kind, cfg.p, n=cfg.n)


def _t_range(cfg: RunConfig) -> tuple[int, int]:
    return cfg.t, DEFAULT_T_MAX if cfg.t_max is None else cfg.t_max


Result = tuple[list[dict], list[str], dict]


def cmd_tv_curve(cfg: RunConfig) -> Result:
    spec = walk_spec(cfg)
    lo, hi = _t_range(cfg)
    rows = []
    tmix = None
    for t, d in iter_distributions(spec, hi, exact=cfg.exact, jobs=cfg.jobs):
        tv = tv_distance(d)
        if cfg.eps is not None and tmix is None and tv < cfg.eps:
            tmix = t
        if t >= lo:
            rows.append({"t": t, "tv": tv, "l2sq": l2_distance_sq(d)})
    summary = {"walk": spec.label(), "states": spec.size}
    if cfg.eps is not None:
        summary["t_mix"] = tmix if tmix is not None else f">{hi}"
    return rows, ["t", "tv", "l2sq"], summary


def cmd_bound_curve(cfg: RunConfig) -> Result:
    from unitri.spectral import cycle_l2_sum
    from unitri.supercharacter import plancherel_rhs, upper_bound_rhs, upper_bound_terms

    spec = walk_spec(cfg)
    lo, hi = _t_range(cfg)
    tv = {t: tv_distance(d) for t, d in iter_distributions(spec, hi, exact=cfg.exact, jobs=cfg.jobs)}
    rows = []
    if spec.kind == "P":
        from unitri.comparison import comparison_constant, main_bound_curve

        A = comparison_constant(spec.n, spec.p).A
        for t, rhs in main_bound_curve(spec.n, spec.p, list(range(lo, hi + 1)), A):
            rows.append({"t": t, "main_rhs": rhs, "tv4sq": 4 * float(tv[t]) ** 2})
        return rows, ["t", "main_rhs", "tv4sq"], {"walk": spec.label(), "A": str(A)}
    if spec.kind == "K":
        for t in range(lo, hi + 1):
            rows.append({"t": t, "rhs": cycle_l2_sum(spec.p, spec.a, t), "tv4sq": 4 * float(tv[t]) ** 2})
        return rows, ["t", "rhs", "tv4sq"], {"walk": spec.label()}
    if spec.kind != "Q":
        raise UsageError("bound-curve supports walks P, Q and K")
    terms = upper_bound_terms(spec.n, spec.p, spec.a)
    for t in range(lo, hi + 1):
        rows.append(
            {
                "t": t,
                "rhs": upper_bound_rhs(spec.n, spec.p, spec.a, t, terms),
                "plancherel": plancherel_rhs(spec.n, spec.p, spec.a, t, terms),
                "tv4sq": 4 * float(tv[t]) ** 2,
            }
        )
    return rows, ["t", "rhs", "plancherel", "tv4sq"], {"walk": spec.label(), "labels": len(terms)}


def cmd_spectrum(cfg: RunConfig) -> Result:
    from unitri.spectral import closed_form_spectrum, transition_spectrum

    spec = walk_spec(cfg)
    num = transition_spectrum(spec)
    try:
        closed = closed_form_spectrum(spec).eigenvalues
    except UsageError:
        closed = None
    rows = []
    for k, v in enumerate(num.eigenvalues):
        row = {"index": k, "eigenvalue": float(v)}
        if closed is not None:
            row["closed_form"] = float(closed[k])
        rows.append(row)
    cols = ["index", "eigenvalue"] + (["closed_form"] if closed is not None else [])
    return rows, cols, {"walk": spec.label(), "method": num.method, "max_residual": num.max_residual}


def cmd_superclasses(cfg: RunConfig) -> Result:
    from unitri.superclass import d_of, degree_identity_sum, enumerate_labels, i_of

    _need(cfg, "n", "p")
    n, p = cfg.n, cfg.p
    rows = []
    for lab in enumerate_labels(n, p):
        d, i = d_of(lab.D), i_of(lab.D)
        rows.append({"label": lab.text(), "size_D": len(lab.D), "d": d, "i": i, "degree": p ** (2 * d - i)})
    total = sum(r["degree"] for r in rows)
    order = group_order(n, p)
    if total != degree_identity_sum(n, p) or total != order:
        raise InvariantFailure([{"check": "degree_identity", "sum": total, "order": order}])
    return rows, ["label", "size_D", "d", "i", "degree"], {"labels": len(rows), "degree_sum": total, "order": order}


def cmd_words(cfg: RunConfig) -> Result:
    from unitri.paths import class_words

    _need(cfg, "n", "p")
    n, p = cfg.n, cfg.p
    rows, bad = [], []
    for k, (B, i, coeff, w) in class_words(n, p).items():
        ok = eval_word(w, n, p) == B and len(w) % 2 == 1
        rows.append(
            {"index": k, "i": i, "coeff": coeff, "length": len(w), "parity": len(w) % 2, "ok": ok, "word": w.to_text()}
        )
        if not ok:
            bad.append({"check": "class_word", "index": k, "i": i, "coeff": coeff})
    if bad:
        raise InvariantFailure(bad)
    longest = max(r["length"] for r in rows)
    return rows, ["index", "i", "coeff", "length", "parity", "ok", "word"], {"words": len(rows), "max_length": longest}


def cmd_compare(cfg: RunConfig) -> Result:
    from unitri.comparison import comparison_constant, spectral_comparison_check
    from unitri.spectral import DENSE_BUDGET

    _need(cfg, "n", "p")
    rep = comparison_constant(cfg.n, cfg.p)
    summary = {"A": str(rep.A), "A_float": float(rep.A), "argmax": rep.argmax.token()}
    if group_order(cfg.n, cfg.p) <= DENSE_BUDGET:
        chk = spectral_comparison_check(cfg.n, cfg.p, rep.A)
        summary.update(spectral_ok=chk.ok, min_slack=chk.min_slack)
        if not chk.ok:
            raise InvariantFailure([{"check": "spectral_comparison", "min_slack": chk.min_slack}])
    return rep.table(), ["generator", "load", "inv_p", "product", "product_float"], summary


def cmd_verify(cfg: RunConfig) -> Result:
    from unitri import verify

    results = verify.run_all(run_fixture)
    rows = [{"check": r.name, "ok": r.ok, "detail": r.detail} for r in results]
    failures = [{"check": r.name, "detail": r.detail} for r in results if not r.ok]
    if failures:
        raise _VerifyFailure(rows, failures)
    return rows, ["check", "ok", "detail"], {"checks": len(rows)}


class _VerifyFailure(InvariantFailure):
    def __init__(self, rows: list[dict], failures: list[dict]):
        super().__init__(failures)
        self.rows = rows


HANDLERS: dict[str, Callable[[RunConfig], Result]] = {
    "tv-curve": cmd_tv_curve,
    "bound-curve": cmd_bound_curve,
    "spectrum": cmd_spectrum,
    "superclasses": cmd_superclasses,
    "words": cmd_words,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def run_fixture(cfg: RunConfig) -> str:
    """Rendered output of one configuration, as it would be written to --out."""
    rows, cols, _ = HANDLERS[cfg.command](cfg)
    return render(rows, cols, cfg.format)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def dispatch(cfg: RunConfig) -> int:
    if cfg.budget is not None:
        os.environ["UNITRI_BUDGET_STATES"] = str(cfg.budget)
    try:
        rows, cols, summary = HANDLERS[cfg.command](cfg)
    except _VerifyFailure as exc:
        _emit(render(exc.rows, ["check", "ok", "detail"], cfg.format), cfg.out)
        print(json.dumps({"failures": exc.failures}), file=sys.stderr)
        return 3
    except InvariantFailure as exc:
        print(json.dumps({"failures": exc.failures}), file=sys.stderr)
        return 3
    _emit(render(rows, cols, cfg.format), cfg.out)
    print(json.dumps({k: _json_value(v) for k, v in summary.items()}), file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        return dispatch(resolve_config(argv))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

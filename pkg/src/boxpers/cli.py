"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 invalid input,
3 the window did not stabilize within ``--max-sheets``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import tempfile
from collections import Counter
from fractions import Fraction
from pathlib import Path

from . import harness
from .config import VARIANTS, configuration_1d, novikov_betti, stabilize
from .covercomplex import format_rational, load_document, parse_rational, validate
from .errors import BoxPersError, PropertyFailure, SchemaError, ValidationError
from .fieldlin import FieldSpec
from .fixtures import FIXTURES, fix_w_perturbed

# documents only offered by the fixtures command, e.g. for ``verify stability --against``
EXTRA_DOCUMENTS = {"FIX-W-perturbed": fix_w_perturbed}
CHECKS = ("duality", "stability", "theta", "dimension", "oracle", "window", "subsurjection")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_degrees(text: str | None, n: int) -> list[int]:
    if text is None:
        return list(range(n + 1))
    out: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..")
                hi_v = n if hi.strip() in ("n", "") else int(hi)
                out.update(range(int(lo), hi_v + 1))
            else:
                out.add(int(part))
        except ValueError as exc:
            raise ValidationError(f"bad --degrees value {text!r}") from exc
    return sorted(d for d in out if 0 <= d <= n)


def _field(text: str | None) -> FieldSpec | None:
    if text is None:
        return None
    try:
        return FieldSpec.parse(text)
    except Exception as exc:
        raise ValidationError(f"bad --field value {text!r}: {exc}") from exc


def _load(args):
    doc = load_document(args.input, _field(args.field))
    model = validate(doc.spec, doc.form, doc.field)
    if not model.trivial and args.max_sheets < 4:
        raise ValidationError("--max-sheets must be at least 4 for a nontrivial period")
    return doc, model


def points_csv(points1d: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "multiplicity"])
    for t, m in points1d:
        w.writerow([t, m])
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def cmd_compute(args) -> int:
    doc, model = _load(args)
    degrees = parse_degrees(args.degrees, doc.spec.n)
    out = Path(args.out)
    variants = VARIANTS if args.variant == "both" else (args.variant,)
    nov = novikov_betti(model)
    summary = []
    for v in variants:
        run = stabilize(model, v, args.max_sheets)
        for r in degrees:
            res = run.results[r]
            if v == "standard":
                configuration_1d(res, "delta", nov)
            for kind in ("delta", "gamma"):
                body = res.to_json(kind)
                body["sheets"] = run.sheets
                stem = f"config_r{r}_{kind}_{v}"
                if args.format == "csv":
                    write_atomic(out / f"{stem}.csv", points_csv(body["points1d"]))
                write_atomic(out / f"{stem}.json", dumps(body))
                summary.append({"r": r, "kind": kind, "variant": v, "points1d": body["points1d"], "total": body["total"]})
    write_atomic(out / "summary.json", dumps({"period": format_rational(model.period), "novikov": nov, "configurations": summary}))
    for row in summary:
        pts = " ".join(f"({t}, {m})" for t, m in row["points1d"]) or "-"
        print(f"r={row['r']} {row['kind']:<5} {row['variant']:<8} {pts}")
    return 0


def _stability_report(args, doc, model) -> dict:
    if args.against:
        other = load_document(args.against, _field(args.field))
        return harness.check_stability(doc, other, max_sheets=args.max_sheets).to_json()
    rng = random.Random(args.seed)
    run = stabilize(model, "standard", args.max_sheets)
    sigma = harness.support_gap(run.results)
    sigma = sigma if sigma is not None else max(Fraction(1), model.period)
    reports = []
    for _ in range(args.trials):
        pert = harness.random_perturbation(doc, 2 * sigma / 9, rng)
        reports.append(harness.check_stability(doc, pert, max_sheets=args.max_sheets, rng=rng).to_json())
    return {"check": "stability", "ok": all(r["ok"] for r in reports), "trials": reports}


def cmd_verify(args) -> int:
    doc, model = _load(args)
    which = args.check
    try:
        rep = _run_check(which, args, doc, model)
    except PropertyFailure as exc:
        rep = {"check": which, "ok": False, "error": type(exc).__name__, "message": str(exc), "payload": exc.payload}
    text = dumps(rep)
    write_atomic(Path(args.out) / f"report_{which}.json", text)
    print(f"{which}: {'pass' if rep['ok'] else 'FAIL'}")
    return 0 if rep["ok"] else 1


def _run_check(which: str, args, doc, model) -> dict:
    if which == "duality":
        rep = harness.check_duality(doc, args.max_sheets).to_json()
    elif which == "stability":
        rep = _stability_report(args, doc, model)
    elif which == "theta":
        rep = harness.theta_audit(doc, args.max_sheets)
    elif which == "dimension":
        rep = harness.dimension_audit(doc, args.max_sheets)
    elif which == "oracle":
        rep = {"check": "oracle", "ok": True, "variants": [harness.persistence_oracle(doc, v) for v in VARIANTS]}
    elif which == "window":
        rep = harness.window_audit(doc, args.max_sheets)
    else:
        rep = harness.subsurjection_audit(doc, args.max_sheets)
    return rep


def _read_config(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    for key in ("r", "kind", "points1d"):
        if key not in doc:
            raise SchemaError(f"{path}: missing {key!r}")
    return doc


def cmd_diff(args) -> int:
    a = _read_config(args.a)
    b = _read_config(args.b)
    if (a["r"], a["kind"]) != (b["r"], b["kind"]):
        raise SchemaError(f"cannot compare r={a['r']} {a['kind']} with r={b['r']} {b['kind']}")
    ca = Counter({parse_rational(t): m for t, m in a["points1d"]})
    cb = Counter({parse_rational(t): m for t, m in b["points1d"]})
    only_a = ca - cb
    only_b = cb - ca
    for t in sorted(only_a):
        print(f"- {format_rational(t)} x{only_a[t]}")
    for t in sorted(only_b):
        print(f"+ {format_rational(t)} x{only_b[t]}")
    return 0 if not only_a and not only_b else 1


def cmd_fixtures(args) -> int:
    known = FIXTURES | EXTRA_DOCUMENTS
    names = args.names or sorted(known)
    out = Path(args.out)
    field = _field(args.field) or FieldSpec.gf(2)
    for name in names:
        if name not in known:
            raise ValidationError(f"unknown fixture {name!r}; known: {', '.join(sorted(known))}")
        doc = known[name](field)
        write_atomic(out / f"{name}.json", dumps(doc.to_json()))
        print(out / f"{name}.json")
    return 0


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="fp:P or q; overrides the document")
    common.add_argument("--degrees", help="e.g. 0..2, 1 or 0,2 (default: all)")
    common.add_argument("--max-sheets", type=int, default=16, help="window cap in sheets (default 16)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    common.add_argument("--out", default="out", help="output directory (default ./out)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="boxpers", description="Exact box-persistence configurations of closed 1-forms on simplicial complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="compute delta and gamma configurations")
    c.add_argument("input")
    c.add_argument("--variant", choices=("standard", "bm", "both"), default="both")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", parents=[common], help="run one verification suite")
    v.add_argument("check", choices=CHECKS)
    v.add_argument("input")
    v.add_argument("--against", help="perturbed document for the stability check")
    v.add_argument("--trials", type=int, default=20, help="random perturbations when --against is absent")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("diff", help="multiset difference of two configuration files")
    d.add_argument("a")
    d.add_argument("b")
    d.set_defaults(func=cmd_diff)

    f = sub.add_parser("fixtures", parents=[common], help="write the built-in example documents")
    f.add_argument("names", nargs="*")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BoxPersError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if exc.payload:
            print(json.dumps(exc.payload, sort_keys=True, default=str), file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())

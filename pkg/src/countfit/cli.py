"""Command-line front end: fit, compare, figure, simulate, recover.

Exit codes are stable: 0 success, 2 usage error, 3 input parse error,
4 estimator failure. All numeric output uses Python's shortest
round-trip float representation, so identical inputs yield byte-identical
reports.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from collections import Counter
from pathlib import Path

from . import __version__
from .dist import (
    CountModel,
    Geometric,
    Hurdle,
    NegBinomial,
    Poisson,
    ZeroInflated,
)
from .errors import CountFitError, EstimationError, InputFormatError
from .estimate import FitResult, FrequencySample, summarize
from .gof import FAMILIES, GofResult, compare_models, expected_counts, gof_test
from .gof import _FITTERS as FITTERS
from .sim import recovery_experiment, sample

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_ESTIMATOR = 4

SCHEMA_VERSION = 1


def read_frequency_file(path: str) -> tuple[FrequencySample, str]:
    """Parse a frequency CSV; returns the sample and the file's sha256."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()
    freq: dict[int, int] = {}
    last = -1
    rows = [
        line.strip()
        for line in raw.decode("utf-8").splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    for i, line in enumerate(rows):
        parts = [c.strip() for c in line.split(",")]
        if i == 0 and parts[:2] == ["count", "frequency"]:
            continue
        if len(parts) != 2:
            raise InputFormatError(f"{path}: malformed row {line!r}")
        try:
            count, frequency = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InputFormatError(f"{path}: non-integer row {line!r}") from exc
        if count < 0 or frequency < 0:
            raise InputFormatError(f"{path}: negative value in row {line!r}")
        if count <= last:
            raise InputFormatError(
                f"{path}: counts must be strictly increasing (row {line!r})"
            )
        last = count
        if frequency > 0:
            freq[count] = frequency
    if not freq:
        raise InputFormatError(f"{path}: no positive frequencies")
    return summarize(freq), digest


def parse_model_spec(spec: str) -> CountModel:
    """Parse a "family:key=val,..." model spec, e.g. "zig:pi=0.3,p=0.4"."""
    try:
        family, _, body = spec.partition(":")
        kv = dict(item.split("=") for item in body.split(",") if item)
        params = {k.strip(): float(v) for k, v in kv.items()}
    except ValueError as exc:
        raise InputFormatError(f"malformed model spec {spec!r}") from exc
    try:
        if family == "poisson":
            return Poisson(mean=params.pop("m"))
        if family == "geom":
            return Geometric(p=params.pop("p"))
        if family == "nb":
            if "m" in params:
                m, k = params.pop("m"), params.pop("k")
                return NegBinomial(p=k / (m + k), k=k)
            return NegBinomial(p=params.pop("p"), k=params.pop("k"))
        if family == "zig":
            return ZeroInflated(pi=params.pop("pi"), base=Geometric(p=params.pop("p")))
        if family == "hg":
            return Hurdle(pi=params.pop("pi"), base=Geometric(p=params.pop("p")))
    except KeyError as exc:
        raise InputFormatError(f"model spec {spec!r} is missing parameter {exc}")
    raise InputFormatError(
        f"unknown family {family!r}; choose from {', '.join(FAMILIES)}"
    )


def _model_params(model: CountModel) -> dict[str, float]:
    if isinstance(model, Poisson):
        return {"m": model.mean}
    if isinstance(model, Geometric):
        return {"p": model.p}
    if isinstance(model, NegBinomial):
        return {"p": model.p, "k": model.k}
    return {"pi": model.pi, "p": model.base.p}


def _solver_dict(fit: FitResult) -> dict:
    info = fit.solver
    return {
        "method": info.method,
        "iterations": info.iterations,
        "bracket": list(info.bracket) if info.bracket else None,
        "residual": info.residual,
        "boundary": info.boundary,
        "notes": list(info.notes),
    }


def _gof_dict(gof: GofResult | None) -> dict | None:
    if gof is None:
        return None
    return {
        "chi2": gof.chi2,
        "df": gof.df,
        "p_value": gof.p_value,
        "pooling_threshold": gof.pooling_threshold,
        "bins": [
            {"label": b.label, "observed": b.observed, "expected": b.expected}
            for b in gof.bins
        ],
    }


def _sample_dict(s: FrequencySample) -> dict:
    return {"n": s.n, "n0": s.n0, "mean": s.mean, "var": s.var}


def _report_header(digest: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "input_sha256": digest,
    }


def _write_out(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _model_block(
    family: str, fit: FitResult, gof: GofResult | None
) -> dict:
    return {
        "family": family,
        "params": _model_params(fit.model),
        "loglik": fit.loglik,
        "aic": fit.aic,
        "n_params": fit.n_params,
        "solver": _solver_dict(fit),
        "gof": _gof_dict(gof),
    }


def cmd_fit(args) -> int:
    s, digest = read_frequency_file(args.data)
    doc = _report_header(digest)
    doc["sample"] = _sample_dict(s)
    try:
        fit = FITTERS[args.model](s)
    except CountFitError as exc:
        doc["error"] = {"family": args.model, "message": str(exc)}
        _write_out(doc, args.out)
        return EXIT_ESTIMATOR
    try:
        gof = gof_test(fit.model, s, fit.n_params, args.pool_threshold)
    except CountFitError:
        gof = None
    doc["model"] = _model_block(args.model, fit, gof)
    _write_out(doc, args.out)
    if not args.quiet and args.out:
        params = ", ".join(f"{k}={v:.4f}" for k, v in doc["model"]["params"].items())
        print(f"{args.model}: {params}  aic={fit.aic:.4f}")
    return EXIT_OK


def cmd_compare(args) -> int:
    s, digest = read_frequency_file(args.data)
    doc = _report_header(digest)
    doc["sample"] = _sample_dict(s)
    try:
        report = compare_models(s, args.models, args.pool_threshold)
    except EstimationError as exc:
        doc["error"] = {"message": str(exc)}
        _write_out(doc, args.out)
        return EXIT_ESTIMATOR
    doc["models"] = [
        _model_block(e.family, e.fit, e.gof)
        if e.fit is not None
        else {"family": e.family, "error": e.error}
        for e in report.entries
    ]
    doc["best_aic_model"] = report.best_aic_model
    doc["notes"] = list(report.notes)
    _write_out(doc, args.out)
    if not args.quiet and args.out:
        print(f"best by AIC: {report.best_aic_model}")
    return EXIT_OK


def cmd_figure(args) -> int:
    s, digest = read_frequency_file(args.data)
    fits = {}
    for family in args.models:
        fits[family] = FITTERS[family](s)
    max_count = max(s.freq)
    header = ["count", "observed"] + [f"expected_{f}" for f in args.models]
    rows = []
    expecteds = {
        f: expected_counts(fit.model, s.n, max_count) for f, fit in fits.items()
    }
    for y in range(max_count + 1):
        rows.append(
            [str(y), str(s.freq.get(y, 0))]
            + [repr(expecteds[f][y]) for f in args.models]
        )
    rows.append(
        ["tail+", "0"] + [repr(expecteds[f][max_count + 1]) for f in args.models]
    )
    lines = [",".join(header)] + [",".join(r) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = parse_model_spec(args.model)
    counts = sample(model, args.n, args.seed)
    hist = Counter(int(c) for c in counts)
    lines = ["count,frequency"] + [f"{y},{hist[y]}" for y in sorted(hist)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_recover(args) -> int:
    model = parse_model_spec(args.model)
    report = recovery_experiment(model, args.n, args.reps, args.seed)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "true_model": {"spec": args.model, "params": report.true_params},
        "n": report.n,
        "replicates": report.replicates,
        "seed": report.seed,
        "estimates": report.estimates,
        "abs_error": report.abs_error,
        "solver_failures": report.solver_failures,
    }
    _write_out(doc, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="countfit",
        description=(
            "Fit over-dispersed count distributions to frequency data. "
            "Model specs use the grammar family:key=val,... with families "
            "poisson (m), geom (p), nb (m,k or p,k), zig (pi,p), hg (pi,p)."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--quiet", action="store_true", help="suppress summary line")

    p = sub.add_parser("fit", help="fit one family to a frequency CSV")
    p.add_argument("data", help="frequency CSV (count,frequency)")
    p.add_argument("--model", required=True, choices=FAMILIES)
    p.add_argument("--pool-threshold", type=float, default=1.0)
    add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="fit several families and rank by AIC")
    p.add_argument("data")
    p.add_argument("--models", required=True, nargs="+", choices=FAMILIES)
    p.add_argument("--pool-threshold", type=float, default=1.0)
    add_common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("figure", help="emit observed-vs-expected CSV")
    p.add_argument("data")
    p.add_argument("--models", required=True, nargs="+", choices=FAMILIES)
    add_common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("simulate", help="sample a model into a frequency CSV")
    p.add_argument("--model", required=True, help='spec, e.g. "zig:pi=0.3,p=0.4"')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("recover", help="parameter-recovery experiment")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_recover)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CountFitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR


if __name__ == "__main__":
    sys.exit(main())

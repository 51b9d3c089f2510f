"""Command-line front end: ``mom-lab <command> [options]``.

Every command writes one record per grid point, as CSV (default) or JSON.
Records share the columns in ``COLUMNS``; command-specific fields go into
the ``extra`` JSON object. CSV output starts with ``#`` header lines holding
the run metadata as JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from typing import Any, Iterable

from . import __version__
from .arith import a_global, a_zero
from .cfkrs import CfkrsConfig, MomParams, gamma_coeff, leading_prediction, mom_p, p_decomposed, p_direct
from .empirical import EmpiricalConfig, mom_zeta
from .fit import fit_power_law, expected_exponent
from .quad import BudgetExhausted, NonConvergence
from .rmt import GROUPS, mom_group
from .specfun import DomainError, PoleError

SCHEMA = "momlab.records/1"
COLUMNS = ("command", "k", "beta", "scale", "value", "uncertainty", "method", "seed", "extra")
COMPUTE_ERRORS = (DomainError, PoleError, NonConvergence, BudgetExhausted, ArithmeticError, MemoryError, ValueError)


class UsageError(Exception):
    pass


def fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return format(x, ".17g")
    return str(x)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _int_list(text: str) -> list[int]:
    vals = _float_list(text)
    if any(not float(v).is_integer() for v in vals):
        raise UsageError(f"expected integers in {text!r}")
    return [int(v) for v in vals]


def _params(args) -> MomParams:
    try:
        return MomParams(args.k, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def record(command, k, beta, scale, value, uncertainty, method, seed, **extra) -> dict:
    return {
        "command": command,
        "k": k,
        "beta": beta,
        "scale": scale,
        "value": value,
        "uncertainty": uncertainty,
        "method": method,
        "seed": seed,
        "extra": extra,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_zeta_mom(args) -> list[dict]:
    params = _params(args)
    cfg = EmpiricalConfig(window=args.window)
    out = []
    for T in _float_list(args.T_grid):
        est = mom_zeta(params, T, args.samples, args.seed, cfg)
        out.append(record("zeta-mom", params.k, params.beta, T, est.value, est.stderr, est.method, args.seed,
                          samples=est.samples, window=args.window))
    return out


def _cfkrs_config(args) -> CfkrsConfig:
    return CfkrsConfig(prime_cutoff=args.prime_cutoff)


def cmd_cfkrs_mom(args) -> list[dict]:
    params = _params(args)
    ests = mom_p(params, _float_list(args.T_grid), _cfkrs_config(args))
    return [
        record("cfkrs-mom", params.k, params.beta, e.T, e.value, e.uncertainty, e.method, None, h_nodes=e.samples)
        for e in ests
    ]


def cmd_cfkrs_predict(args) -> list[dict]:
    params = _params(args)
    h = _float_list(args.h) if args.h else [0.5] * params.k
    if len(h) != params.k:
        raise UsageError(f"--h needs {params.k} values")
    fn = p_direct if args.method == "direct" else p_decomposed
    out = []
    for x in _float_list(args.x_grid):
        out.append(record("cfkrs-predict", params.k, params.beta, x, fn(params, x, h, _cfkrs_config(args)), None,
                          args.method, None, h=h))
    return out


def cmd_rmt_mom(args) -> list[dict]:
    params = _params(args)
    if args.group not in GROUPS:
        raise UsageError(f"--group must be one of {GROUPS}")
    out = []
    for N in _int_list(args.N_grid):
        est = mom_group(args.group, N, params, args.samples, args.seed)
        out.append(record("rmt-mom", params.k, params.beta, N, est.value, est.stderr, est.method, args.seed,
                          samples=est.samples, group=args.group))
    return out


def cmd_arith_factor(args) -> list[dict]:
    params = _params(args)
    if args.z:
        z = [complex(v.strip().replace(" ", "")) for v in args.z.split(",")]
        res = a_global(params.k, params.beta, z, args.prime_cutoff)
        method, extra = "euler-product", {"z": [fmt(complex(v)) for v in z]}
    else:
        res = a_zero(params.k, params.beta, args.prime_cutoff)
        method, extra = "euler-product-origin", {}
    return [record("arith-factor", params.k, params.beta, args.prime_cutoff, res.value.real, res.tail_bound, method, None,
                   imag=res.value.imag, tail_bound=res.tail_bound, **extra)]


def cmd_gamma_coeff(args) -> list[dict]:
    params = _params(args)
    g = gamma_coeff(params, _cfkrs_config(args))
    alpha = a_zero(params.k, params.beta, args.prime_cutoff).value.real
    return [record("gamma-coeff", params.k, params.beta, None, g.value, g.uncertainty, g.method, None,
                   alpha=alpha, alpha_gamma=alpha * g.value, exponent=params.exponent)]


def _read_points(args) -> list[tuple[float, float]]:
    if args.points:
        pts = []
        for item in args.points.split(","):
            try:
                s, y = item.split(":")
                pts.append((float(s), float(y)))
            except ValueError as exc:
                raise UsageError(f"bad point {item!r}; use scale:value") from exc
        return pts
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            recs = parse_records(fh.read())
        return [(float(r["scale"]), float(r["value"])) for r in recs]
    raise UsageError("give --points or --input")


def cmd_fit_exponent(args) -> list[dict]:
    fit = fit_power_law(_read_points(args))
    extra: dict[str, Any] = {"log_coefficient": fit.log_coefficient, "r_squared": fit.r_squared}
    if args.symmetry:
        extra["expected"] = expected_exponent(_params(args), args.symmetry)
    return [record("fit-exponent", args.k, args.beta, None, fit.exponent, None, "log-log-least-squares", None, **extra)]


def cmd_compare(args) -> list[dict]:
    params = _params(args)
    Ts = _float_list(args.T_grid)
    cfg = _cfkrs_config(args)
    pred = mom_p(params, Ts, cfg)
    g = gamma_coeff(params, cfg)
    out, emp_pts, pred_pts = [], [], []
    for T, p in zip(Ts, pred):
        e = mom_zeta(params, T, args.samples, args.seed, EmpiricalConfig())
        lead = leading_prediction(params, T, cfg, gamma=g)
        out.append(record("compare", params.k, params.beta, T, e.value, e.stderr, "empirical", args.seed))
        out.append(record("compare", params.k, params.beta, T, p.value, p.uncertainty, "predictor", None))
        out.append(record("compare", params.k, params.beta, T, lead, None, "leading", None))
        emp_pts.append((T / (2 * math.pi), e.value))
        pred_pts.append((T / (2 * math.pi), p.value))
    if len(Ts) >= 3:
        for name, pts in (("empirical", emp_pts), ("predictor", pred_pts)):
            # exponent in log(T / 2 pi): fit against the log scale
            fit = fit_power_law([(math.log(s), y) for s, y in pts])
            out.append(record("compare", params.k, params.beta, None, fit.exponent, None, f"fit-{name}", None,
                              expected=params.exponent, r_squared=fit.r_squared))
    return out


COMMANDS = {
    "zeta-mom": cmd_zeta_mom,
    "cfkrs-mom": cmd_cfkrs_mom,
    "cfkrs-predict": cmd_cfkrs_predict,
    "rmt-mom": cmd_rmt_mom,
    "arith-factor": cmd_arith_factor,
    "gamma-coeff": cmd_gamma_coeff,
    "fit-exponent": cmd_fit_exponent,
    "compare": cmd_compare,
}


# ---------------------------------------------------------------------------
# parsing and output


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mom-lab", description="Moments of moments: zeta, predictor, random matrices.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--k", type=int, default=1, help="outer moment (default 1)")
        p.add_argument("--beta", type=int, default=1, help="inner moment (default 1)")
        p.add_argument("--prime-cutoff", type=int, default=100_000, help="Euler product cutoff (default 1e5)")
        p.add_argument("--format", choices=("csv", "json"), default="csv", help="output encoding (default csv)")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        return p

    p = common(sub.add_parser("zeta-mom", help="empirical moments of moments of zeta"), seed=True)
    p.add_argument("--T-grid", "--T", dest="T_grid", default="1000", help="comma-separated heights (default 1000)")
    p.add_argument("--samples", type=int, default=200, help="stratified samples (default 200)")
    p.add_argument("--window", type=float, default=1.0, help="window length (default 1)")

    p = common(sub.add_parser("cfkrs-mom", help="averaged predictor mom_P(T)"))
    p.add_argument("--T-grid", "--T", dest="T_grid", default="1000", help="comma-separated heights (default 1000)")

    p = common(sub.add_parser("cfkrs-predict", help="P_{k,beta}(x; h) at fixed shifts"))
    p.add_argument("--x-grid", "--x", dest="x_grid", default="50", help="comma-separated x values (default 50)")
    p.add_argument("--h", default=None, help="comma-separated shifts in [0,1] (default all 0.5)")
    p.add_argument("--method", choices=("direct", "decomposed"), default="direct")

    p = common(sub.add_parser("rmt-mom", help="random-matrix moments of moments"), seed=True)
    p.add_argument("--group", default="unitary", help=f"one of {', '.join(GROUPS)} (default unitary)")
    p.add_argument("--N-grid", "--N", dest="N_grid", default="20", help="comma-separated matrix sizes (default 20)")
    p.add_argument("--samples", type=int, default=1000, help="Haar samples (default 1000)")

    p = common(sub.add_parser("arith-factor", help="arithmetic factor A at the origin or at shifts"))
    p.add_argument("--z", default=None, help="comma-separated complex shifts (default: the origin)")

    common(sub.add_parser("gamma-coeff", help="leading coefficient gamma_{k,beta}"))

    p = common(sub.add_parser("fit-exponent", help="power-law fit of (scale, value) points"))
    p.add_argument("--points", default=None, help="comma-separated scale:value pairs")
    p.add_argument("--input", default=None, help="records file written by another command")
    p.add_argument("--symmetry", choices=("unitary", "symplectic", "orthogonal"), default=None)

    p = common(sub.add_parser("compare", help="empirical vs predictor vs leading term"), seed=True)
    p.add_argument("--T-grid", "--T", dest="T_grid", default="1000,3000,10000", help="comma-separated heights")
    p.add_argument("--samples", type=int, default=200, help="stratified samples (default 200)")
    return parser


def metadata(args) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": args.command,
        "config": config,
        "columns": list(COLUMNS),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def _row(rec: dict) -> list[str]:
    # json floats use repr, which round-trips exactly
    return [fmt(rec[c]) for c in COLUMNS[:-1]] + [json.dumps(rec["extra"], sort_keys=True)]


def render(records: Iterable[dict], meta: dict, fmt_name: str) -> str:
    records = list(records)
    if fmt_name == "json":
        rows = [dict(zip(COLUMNS, _row(r))) for r in records]
        for row in rows:
            row["extra"] = json.loads(row["extra"])
        return json.dumps({"meta": meta, "records": rows}, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(_row(r))
    return buf.getvalue()


def parse_records(text: str) -> list[dict]:
    """Parse CSV or JSON output back into records; checks the schema tag."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        if doc.get("meta", {}).get("schema") != SCHEMA:
            raise ValueError("unknown schema")
        return doc["records"]
    lines = text.splitlines()
    meta_lines = [ln for ln in lines if ln.startswith("# ")]
    if not meta_lines or json.loads(meta_lines[0][2:]).get("schema") != SCHEMA:
        raise ValueError("unknown schema")
    body = [ln for ln in lines if not ln.startswith("#")]
    reader = csv.DictReader(body)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError("unexpected columns")
    out = []
    for row in reader:
        row = dict(row)
        row["extra"] = json.loads(row["extra"])
        out.append(row)
    return out


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints the synopsis itself
        return int(exc.code or 0)
    try:
        records = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mom-lab: error: {exc}", file=sys.stderr)
        return 2
    except COMPUTE_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "cause": str(exc), "command": args.command}), file=sys.stderr)
        return 1
    text = render(records, metadata(args), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

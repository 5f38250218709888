"""Command-line front end.

Instance parameters are given as ``key=value`` tokens, e.g.::

    corrcache verify N=3 K=5 M=3/5 r=2 d=1,2,3,1,2
    corrcache curve N=5 K=20 r=2 s=5 --out fig1.csv
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import bounds
from .bounds import AVERAGE
from .model import ModelError, choose_leaders, new_instance
from .multireq import CASE_IDS, multirequest_code, verify_multirequest
from .scheme import build_delivery
from .verify import (
    measured_load,
    report_json,
    sweep_verify,
    theorem2_case,
    verify_demand,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MODEL = 3
EXIT_VERIFY = 4

SUBCOMMANDS = ("bound", "achieve", "verify", "sweep", "multireq", "curve")


class ParseError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    average: bool = False
    leaders: Optional[tuple] = None
    out: Optional[str] = None
    fmt: str = "csv"
    workers: int = 1
    demand_filter: str = "theorem2"
    case: Optional[str] = None


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x)
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def parse_params(tokens) -> dict:
    out: dict = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}")
        key, value = tok.split("=", 1)
        if key in ("N", "K", "r", "s", "t", "nmax", "kmax"):
            try:
                out[key] = int(value)
            except ValueError:
                raise ParseError(f"{key} must be an integer, got {value!r}") from None
        elif key == "M":
            if "." in value or "e" in value.lower():
                raise ParseError(f"M must be an exact rational p/q, got {value!r}")
            try:
                out[key] = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"cannot parse M={value!r}") from None
        elif key == "d":
            out[key] = _int_list(value)
        else:
            raise ParseError(f"unknown parameter {key!r}")
    return out


def _need(params: dict, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ParseError(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def _curve_rows(points, kind: str, status=None) -> list[list]:
    rows = []
    for p in points:
        st = status(p) if status else ""
        rows.append([str(p.memory), str(p.load), p.t, p.s, kind, float(p.memory), float(p.load), st])
    return rows


CSV_HEADER = "M,load,t,s_or_avg,kind,M_float,load_float,status"


def _csv(rows) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(f"{x:.10g}" if isinstance(x, float) else str(x) for x in row))
    return "\n".join(lines) + "\n"


def cmd_bound(cfg: RunConfig) -> tuple[int, str]:
    N, K, r = _need(cfg.params, "N", "K", "r")
    if cfg.average:
        env = bounds.converse_envelope_average(N, K, r)
    else:
        (s,) = _need(cfg.params, "s")
        env = bounds.converse_envelope_type(N, K, r, s)
    if "M" in cfg.params:
        M = cfg.params["M"]
        value = bounds.envelope_eval(env, M)
        tag = AVERAGE if cfg.average else cfg.params["s"]
        if cfg.fmt == "json":
            return EXIT_OK, json.dumps({"M": str(M), "load": str(value), "s_or_avg": tag}) + "\n"
        return EXIT_OK, f"M,load,s_or_avg\n{M},{value},{tag}\n"
    hull_ts = {p.t for p in env.hull}
    rows = _curve_rows(env.points, "converse", lambda p: "hull" if p.t in hull_ts else "interior")
    if cfg.fmt == "json":
        return EXIT_OK, json.dumps(
            [{"M": r_[0], "load": r_[1], "t": r_[2], "s_or_avg": r_[3], "on_hull": r_[7] == "hull"} for r_ in rows],
            indent=2,
        ) + "\n"
    return EXIT_OK, _csv(rows)


def _instance_and_demand(cfg: RunConfig):
    N, K, M, r, d = _need(cfg.params, "N", "K", "M", "r", "d")
    inst = new_instance(N, K, M, r)
    leaders = choose_leaders(d, "explicit", cfg.leaders) if cfg.leaders else choose_leaders(d)
    return inst, d, leaders


def cmd_achieve(cfg: RunConfig) -> tuple[int, str]:
    inst, d, leaders = _instance_and_demand(cfg)
    tx = build_delivery(inst, d, leaders)
    payload = {
        "instance": inst.params,
        "demand": list(tx.demand),
        "leaders": list(leaders.leaders),
        "n_combinations": len(tx),
        "load": str(measured_load(inst, tx)),
        "groups": tx.to_records(),
    }
    return EXIT_OK, json.dumps(payload, sort_keys=True, indent=2) + "\n"


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    inst, d, leaders = _instance_and_demand(cfg)
    result = verify_demand(inst, d, leaders)
    return (EXIT_OK if result.decodable else EXIT_VERIFY), report_json(inst, list(d), result) + "\n"


def cmd_sweep(cfg: RunConfig) -> tuple[int, str]:
    nmax = cfg.params.get("nmax", 3)
    kmax = cfg.params.get("kmax", 3)
    report = sweep_verify(range(1, nmax + 1), range(1, kmax + 1), demand_filter=cfg.demand_filter, workers=cfg.workers)
    code = EXIT_VERIFY if report.failures else EXIT_OK
    if cfg.fmt == "json":
        payload = {
            "records": len(report.records),
            "failures": [
                {"N": f.N, "K": f.K, "r": f.r, "t": f.t, "demand": list(f.demand), "load": str(f.load)}
                for f in report.failures
            ],
            "unverified": len(report.unclaimed),
        }
        return code, json.dumps(payload, indent=2) + "\n"
    return code, report.to_csv()


def cmd_multireq(cfg: RunConfig) -> tuple[int, str]:
    ids = [cfg.case] if cfg.case else list(CASE_IDS)
    out, ok = [], True
    for cid in ids:
        case = multirequest_code(cid)
        res = verify_multirequest(cid)
        ok &= res.decodable and res.matches_coefficient
        out.append({
            "case": cid,
            "N": case.n_files,
            "K": case.n_users,
            "demands": [list(x) for x in case.demands],
            "leaders": list(case.leader_perm),
            "n_combinations": len(case.combos),
            "load": str(res.load),
            "reference_load": str(case.paper_load),
            "prior_scheme_load": str(case.prior_load),
            "decodable": res.decodable,
            "missing": {str(k): v for k, v in res.report.missing_lists().items()},
        })
    return (EXIT_OK if ok else EXIT_VERIFY), json.dumps(out, indent=2) + "\n"


def cmd_curve(cfg: RunConfig) -> tuple[int, str]:
    N, K, r = _need(cfg.params, "N", "K", "r")
    s = cfg.params.get("s", min(N, K))
    conv = bounds.converse_envelope_type(N, K, r, s)
    rows = _curve_rows(conv.points, "converse")

    def status(p):
        # Case 1 is stated for distinct demands; any type-s demand falls there only if s = K
        if theorem2_case(N, K, r, p.t, list(range(1, s + 1)) + [1] * (K - s)):
            return "OPTIMALITY-CASE"
        return "UNVERIFIED"

    rows += _curve_rows(conv.points, "scheme", status)
    base = [
        bounds.LoadPoint(p.memory, bounds.baseline_type_average(N, K, r, p.t, s), p.t, s)
        for p in conv.points
    ]
    rows += _curve_rows(base, "baseline")
    return EXIT_OK, _csv(rows)


HANDLERS = {
    "bound": cmd_bound,
    "achieve": cmd_achieve,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "multireq": cmd_multireq,
    "curve": cmd_curve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="corrcache", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("params", nargs="*", help="key=value instance parameters")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        if name == "bound":
            p.add_argument("--avg", action="store_true", help="demand-averaged envelope")
        if name in ("achieve", "verify"):
            p.add_argument("--leaders", help="explicit leader permutation, e.g. 1,2,3")
        if name == "sweep":
            p.add_argument("--filter", dest="demand_filter", choices=("theorem2", "all", "distinct"), default="theorem2")
            p.add_argument("--workers", type=int, default=1)
        if name == "multireq":
            p.add_argument("--case", choices=CASE_IDS)
    return parser


def config_from_args(argv=None) -> RunConfig:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    stray = [tok for tok in extra if "=" not in tok or tok.startswith("-")]
    if stray:
        parser.error(f"unrecognized arguments: {' '.join(stray)}")
    return RunConfig(
        subcommand=args.subcommand,
        params=parse_params(list(args.params) + extra),
        average=getattr(args, "avg", False),
        leaders=_int_list(args.leaders) if getattr(args, "leaders", None) else None,
        out=args.out,
        fmt=args.fmt,
        workers=getattr(args, "workers", 1),
        demand_filter=getattr(args, "demand_filter", "theorem2"),
        case=getattr(args, "case", None),
    )


def run(cfg: RunConfig) -> int:
    try:
        code, text = HANDLERS[cfg.subcommand](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

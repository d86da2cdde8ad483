"""Command-line front end: ``qif <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (the error class name is
printed on stderr) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io as qio
from .algebra import cascade, hidden_choice, parallel, visible_choice
from .bounds import hidden_choice_bounds, parallel_bounds, visible_choice_exact
from .channel import Prior
from .crowds import CrowdsModel, leakage_bounds, m_for_precision
from .dining import DiningConfig, capacity_sweep, sweep_to_csv
from .errors import QIFError, ZeroPriorVulnerability
from .measures import (
    additive_capacity,
    identity_gain,
    leakage,
    multiplicative_capacity,
    posterior_vulnerability,
    prior_vulnerability,
)
from .refinement import EPS_REF, refines


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def num(x: float):
    """Float rounded to 12 significant digits for JSON output."""
    return float(fmt(x))


def probability(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{text!r} is not a probability in [0, 1]")
    return v


def _tolerance() -> float:
    raw = os.environ.get("QIF_TOLERANCE")
    return float(raw) if raw else EPS_REF


def _prior(source: str, inputs) -> Prior:
    if source in (None, "uniform"):
        return Prior.uniform(inputs)
    return qio.read_prior(source)


def _gain(source: str, inputs):
    if source in (None, "id"):
        return identity_gain(inputs)
    return qio.read_gain(source)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _emit_channel(args, c) -> None:
    _emit(args, qio.channel_to_csv(c) if args.csv else qio.dumps_channel(c))


def _emit_record(args, record: dict, header=None) -> None:
    if args.csv:
        keys = header or list(record)
        vals = ["" if record[k] is None else (fmt(record[k]) if isinstance(record[k], float) else str(record[k])) for k in keys]
        _emit(args, ",".join(keys) + "\n" + ",".join(vals))
    else:
        _emit(args, json.dumps({k: num(v) if isinstance(v, float) else v for k, v in record.items()}))


# -- subcommands -------------------------------------------------------------


def cmd_show(args):
    _emit_channel(args, qio.read_channel(args.channel))


_OPS = {"par": "parallel", "vis": "visible", "hid": "hidden"}


def _compose(op, a, b, p):
    if op == "par":
        return parallel(a, b)
    if p is None:
        raise QIFError("choice operators need --p")
    return visible_choice(a, b, p) if op == "vis" else hidden_choice(a, b, p)


def cmd_compose(args):
    a, b = qio.read_channel(args.a), qio.read_channel(args.b)
    _emit_channel(args, _compose(args.op, a, b, args.p))


def cmd_cascade(args):
    _emit_channel(args, cascade(qio.read_channel(args.a), qio.read_channel(args.b)))


def cmd_vuln(args):
    c = qio.read_channel(args.channel)
    pi, g = _prior(args.prior, c.inputs), _gain(args.gain, c.inputs)
    _emit_record(args, {"prior": prior_vulnerability(pi, g), "posterior": posterior_vulnerability(pi, c, g)})


def cmd_leak(args):
    c = qio.read_channel(args.channel)
    pi, g = _prior(args.prior, c.inputs), _gain(args.gain, c.inputs)
    try:
        r = leakage(pi, c, g)
    except ZeroPriorVulnerability as e:
        print(f"ZeroPriorVulnerability: {e}", file=sys.stderr)
        r = e.report
        _emit_record(args, {"prior": r.prior_vulnerability, "posterior": r.posterior_vulnerability, "mult": None, "add": r.additive})
        return 1
    _emit_record(args, {"prior": r.prior_vulnerability, "posterior": r.posterior_vulnerability, "mult": r.multiplicative, "add": r.additive})


def cmd_capacity(args):
    c = qio.read_channel(args.channel)
    if args.add:
        value = additive_capacity(c, _prior(args.prior, c.inputs))
    else:
        value = multiplicative_capacity(c)
    _emit(args, fmt(value))


def cmd_refine(args):
    a, b = qio.read_channel(args.a), qio.read_channel(args.b)
    verdict = refines(a, b, tol=_tolerance(), seed=args.seed, trials=args.trials)
    out = {"refined": verdict.refined, "residual": num(verdict.residual)}
    if verdict.witness is not None:
        out["witness"] = qio.channel_to_dict(verdict.witness)
    if verdict.certificate is not None:
        pi, g = verdict.certificate
        out["certificate"] = {"prior": qio.prior_to_dict(pi), "gain": qio.gain_to_dict(g)}
    print(json.dumps(out))


def cmd_bounds(args):
    a, b = qio.read_channel(args.a), qio.read_channel(args.b)
    pi, g = _prior(args.prior, a.inputs), _gain(args.gain, a.inputs)
    if args.op == "par":
        iv = parallel_bounds(pi, g, a, b)
        rec = {"op": "par", "lower": iv.lower, "upper": iv.upper, "exact": iv.exact}
    elif args.op == "hid":
        if args.p is None:
            raise QIFError("hidden choice needs --p")
        iv = hidden_choice_bounds(pi, g, a, b, args.p)
        rec = {"op": "hid", "lower": iv.lower, "upper": iv.upper, "exact": iv.exact}
    else:
        if args.p is None:
            raise QIFError("visible choice needs --p")
        v = visible_choice_exact(pi, g, a, b, args.p)
        rec = {"op": "vis", "lower": v, "upper": v, "exact": posterior_vulnerability(pi, visible_choice(a, b, args.p), g)}
    _emit_record(args, rec, ["op", "lower", "upper", "exact"])


def cmd_crowds(args):
    P = qio.matrix_from_csv(Path(args.transitions).read_text())
    model = CrowdsModel(P, args.q, args.p)
    m = args.m if args.m is not None else m_for_precision(args.q, args.p, args.precision)
    pi, g = _prior(args.prior, model.users), _gain(args.gain, model.users)
    b = leakage_bounds(model, pi, g, m)
    if args.csv:
        _emit(args, b.csv_header + "\n" + b.csv_row(fmt))
    else:
        d = b.to_dict()
        d["t"] = [num(v) for v in d["t"]]
        _emit(args, json.dumps({k: num(v) if isinstance(v, float) else v for k, v in d.items()}))


def _sweep(text: str) -> list:
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("--sweep expects start:stop:step") from None
    if step <= 0:
        raise argparse.ArgumentTypeError("sweep step must be positive")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def cmd_dining(args):
    cfg = DiningConfig(args.n, args.topology)
    biases = args.sweep if args.sweep is not None else [args.bias]
    prior = None if args.prior in (None, "uniform") else qio.read_prior(args.prior)
    rows = capacity_sweep(cfg, biases, prior)
    _emit(args, sweep_to_csv(rows, fmt).rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qif", description="Compositional quantitative information flow.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, csv_flag=True, out=True):
        if csv_flag:
            p.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
        if out:
            p.add_argument("--out", help="write to this file instead of stdout")

    def pg(p):
        p.add_argument("--prior", default="uniform", help="'uniform' or a prior JSON file")
        p.add_argument("--gain", default="id", help="'id' or a gain-function JSON file")

    p = sub.add_parser("show", help="validate and print a channel")
    p.add_argument("channel")
    common(p)
    p.set_defaults(func=cmd_show)

    p = sub.add_parser("compose", help="compose two channels")
    p.add_argument("--op", choices=sorted(_OPS), required=True)
    p.add_argument("--p", type=probability)
    p.add_argument("a")
    p.add_argument("b")
    common(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("cascade", help="post-process A with B")
    p.add_argument("a")
    p.add_argument("b")
    common(p)
    p.set_defaults(func=cmd_cascade)

    for name, func, text in (("vuln", cmd_vuln, "prior and posterior g-vulnerability"), ("leak", cmd_leak, "g-leakage")):
        p = sub.add_parser(name, help=text)
        p.add_argument("channel")
        pg(p)
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("capacity", help="multiplicative or additive capacity")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--mult", action="store_true")
    kind.add_argument("--add", action="store_true")
    p.add_argument("channel")
    p.add_argument("--prior", default="uniform")
    common(p, csv_flag=False)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("refine", help="does B refine A?")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--seed", type=int, help="run the falsifier with this seed when refinement fails")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("bounds", help="compositional vulnerability bounds")
    p.add_argument("--op", choices=sorted(_OPS), required=True)
    p.add_argument("--p", type=probability)
    p.add_argument("a")
    p.add_argument("b")
    pg(p)
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("crowds", help="Crowds vulnerability bounds")
    p.add_argument("--transitions", required=True, help="CSV transition matrix")
    p.add_argument("--q", type=probability, required=True)
    p.add_argument("--p", type=probability, required=True)
    m = p.add_mutually_exclusive_group(required=True)
    m.add_argument("--m", type=int)
    m.add_argument("--precision", type=float)
    pg(p)
    common(p)
    p.set_defaults(func=cmd_crowds)

    p = sub.add_parser("dining", help="Dining Cryptographers capacities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--topology", choices=["cycle", "complete"], default="cycle")
    p.add_argument("--bias", type=probability, default=0.5)
    p.add_argument("--sweep", type=_sweep)
    p.add_argument("--prior", default="uniform")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dining)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except QIFError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

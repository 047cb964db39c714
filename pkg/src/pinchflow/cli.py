"""Command-line front end: constants, verify, simulate, rescale.

Exit codes: 0 all checks passed, 1 at least one inequality violation (a
replayable counterexample file is written), 2 usage or configuration error.
The RNG seed is always echoed in machine-readable output; it defaults to the
MCF_SEED environment variable and otherwise to fresh entropy.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import lemmas
from .campaign import CampaignConfig, run_campaign
from .constants import (
    PinchingConstants,
    c_n,
    d_lower_bound,
    kappa_n,
    space_form_d_lower,
)
from .errors import PinchflowError
from .flow import FAMILY_KINDS, simulate, write_csv, record_row, CSV_HEADER, read_csv
from .forms import Dims
from .rescale import rescale as rescale_series, write_rescaled_csv, RESCALED_HEADER
from .samplers import SamplerSpec

SUITES = {
    "li": list(lemmas.LI_IDS),
    "kato": list(lemmas.KATO_IDS),
    "reaction": list(lemmas.REACTION_IDS) + list(lemmas.BOUNDARY_IDS),
    "gradient": list(lemmas.GRADIENT_IDS),
    "all": list(lemmas.ALL_IDS),
}

_FMT = ".17g"


def _resolve_seed(arg_seed: int | None) -> int:
    if arg_seed is not None:
        return arg_seed
    env = os.environ.get("MCF_SEED")
    if env is not None:
        return int(env)
    return int(np.random.SeedSequence().entropy) % (2**63)


def _default_c(n: int) -> float:
    return float(c_n(n, "general"))


def cmd_constants(args: argparse.Namespace) -> int:
    n, m = args.n, args.m
    regime = "general" if args.regime == "general" else "codim_estimate"
    c = c_n(n, regime) if args.c is None else args.c
    lines = [f"n = {n}, m = {m}"]
    if args.c is None:
        lines.append(f"c ({regime}) = {c} = {format(float(c), _FMT)}")
    else:
        lines.append(f"c (override) = {format(float(c), _FMT)}")
    if args.Kbar is not None:
        d_low = space_form_d_lower(n, float(c)) if args.Kbar < 0 else 0.0
        lines.append(f"Kbar = {format(args.Kbar, _FMT)}")
        lines.append(f"d_lower (space form) = {format(d_low, _FMT)}")
    else:
        d_low = d_lower_bound(n, m, float(c), args.K1, args.K2, args.L)
        tag = "flat" if args.K1 + args.K2 + args.L == 0 else "bounded background"
        lines.append(f"d_lower ({tag}) = {format(d_low, _FMT)}")
    try:
        kap = kappa_n(n, float(c))
        lines.append(f"kappa = {format(kap, _FMT)}")
    except PinchflowError as exc:
        lines.append(f"kappa undefined: {exc}")
    print("\n".join(lines))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    n, m = args.n, args.m
    seed = _resolve_seed(args.seed)
    ids = SUITES[args.suite]
    if args.c is not None:
        c = args.c
    elif args.suite == "li":
        c = 0.0  # matrix inequality needs no pinching coefficient
    else:
        c = _default_c(n)
    if args.delta is not None:
        delta = args.delta
    elif args.suite in ("gradient", "all"):
        delta = 1.0 / (5 * n - 8)
    else:
        delta = 0.5
    dist = "gaussian" if args.suite == "li" else "pinched"
    spec = SamplerSpec(
        dims=Dims(n, m), distribution=dist, sigma=args.sigma,
        c=c, d=args.d, seed=seed,
    )
    config = CampaignConfig(c=c, d=args.d, delta=delta, eta=args.eta, eps0=args.eps0)
    out_dir = os.path.dirname(os.path.abspath(args.out)) if args.out else os.getcwd()
    results = run_campaign(
        spec, ids, args.trials, tol=args.tol, config=config,
        counterexample_dir=out_dir,
    )
    report = {
        "seed": seed,
        "suite": args.suite,
        "dims": {"n": n, "m": m},
        "constants": {
            "c": c, "d": args.d, "delta": delta,
            "eta": args.eta, "eps0": args.eps0,
        },
        "trials": args.trials,
        "results": [r.to_json_dict() for r in results],
    }
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 1 if any(r.violations for r in results) else 0


def _parse_params(spec: str) -> dict[str, float]:
    out: dict[str, float] = {}
    if not spec:
        return out
    for item in spec.split(","):
        key, _, value = item.partition("=")
        if not _:
            raise ValueError(f"malformed param {item!r}, expected k=v")
        out[key.strip()] = float(value)
    return out


def _build_family(kind: str, params: dict[str, float]):
    cls = FAMILY_KINDS[kind]
    if kind == "sphere" or kind == "cylinder":
        return cls(n=int(params.get("n", 8)), m=int(params.get("m", 2)),
                   r0=params["r"])
    if kind == "product":
        return cls(p=int(params.get("p", 7)), q=int(params.get("q", 1)),
                   m=int(params.get("m", 2)), a0=params["a"], b0=params["b"])
    return cls(n=int(params.get("n", 8)), m=int(params.get("m", 2)),
               r0=params["r"], kbar=params.get("kbar", -1.0))


def cmd_simulate(args: argparse.Namespace) -> int:
    params = _parse_params(args.params)
    family = _build_family(args.family, params)
    n = family.n
    c = args.c if args.c is not None else _default_c(n)
    if args.family == "hyperbolic":
        d = args.d if args.d is not None else space_form_d_lower(n, c)
        constants = PinchingConstants(
            Dims(n, family.m), c, d, regime="space_form", Kbar=family.kbar
        )
    else:
        d = args.d if args.d is not None else 0.0
        constants = PinchingConstants(Dims(n, family.m), c, d)
    t_end = args.t_end if args.t_end is not None else family.blowup_time()
    records = simulate(family, constants, dt=args.dt, t_end=t_end, every=args.every)
    if args.out:
        write_csv(records, args.out)
    else:
        print(CSV_HEADER)
        for rec in records:
            print(record_row(rec))
    return 0


def cmd_rescale(args: argparse.Namespace) -> int:
    records = read_csv(args.infile)
    series = rescale_series(records, args.base_row, kbar=args.kbar, d=args.d)
    if args.out:
        write_rescaled_csv(series, args.out)
    else:
        from .flow import _csv_num

        print(RESCALED_HEADER)
        for rec in series.records:
            p2 = rec.params[1] if len(rec.params) > 1 else math.nan
            vals = (rec.t, rec.params[0], p2, rec.A2, rec.H2, rec.h2,
                    rec.Aminus2, rec.f, rec.Q, rec.ratio_pinch,
                    rec.ratio_codim, rec.ratio_cyl, rec.tbar, rec.fbar, rec.kresc)
            print(",".join(_csv_num(v) for v in vals))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchflow",
        description="pinching constants, inequality campaigns and model flows "
        "for quadratically pinched mean curvature flow",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print c, the d lower bound and kappa")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--regime", choices=("general", "codim"), default="general")
    p.add_argument("--c", type=float, default=None, help="override the coefficient")
    p.add_argument("--K1", type=float, default=0.0)
    p.add_argument("--K2", type=float, default=0.0)
    p.add_argument("--L", type=float, default=0.0)
    p.add_argument("--Kbar", type=float, default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify", help="run a seeded inequality campaign")
    p.add_argument("--suite", choices=tuple(SUITES), required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--eps0", type=float, default=None)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="evolve a closed-form flow family")
    p.add_argument("--family", choices=tuple(FAMILY_KINDS), required=True)
    p.add_argument("--params", required=True, help="comma-separated k=v pairs")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.add_argument("--every", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rescale", help="parabolic rescaling of a CSV series")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--base-row", dest="base_row", type=int, required=True)
    p.add_argument("--kbar", type=float, default=0.0)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_rescale)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        return args.func(args)
    except (PinchflowError, ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

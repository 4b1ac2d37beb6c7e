"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 domain or regime error,
4 numerical failure. Errors are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import bounds, capacities, dmcsim, exponents, optical, spectral
from .capacities import DiscreteChannel
from .errors import DomainError, NumericalError
from .spectral import GramEnsemble

log = logging.getLogger("cqrates")

EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERICAL = 2, 3, 4
MODELS = ("binary", "bpsk", "dmc", "dispersion", "ensemble", "constellation")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    gamma: float | None = None
    energy: float | None = None
    channel: DiscreteChannel | None = None
    ensemble: GramEnsemble | None = None
    capacity: float | None = None
    dispersion: float | None = None
    n_grid: list = field(default_factory=list)
    seed: int = 0
    fmt: str = "json"
    out: str | None = None


def parse_n_grid(text):
    """``a:b:logK`` gives K log-spaced integers, ``a:b:step`` an arithmetic range."""
    try:
        a, b, c = text.split(":")
        lo, hi = float(a), float(b)
        if c.startswith("log"):
            k = int(c[3:])
            if k < 1:
                raise ValueError
            ns = np.rint(np.geomspace(lo, hi, k)).astype(np.int64) if k > 1 else [round(lo)]
            ns = sorted(set(int(x) for x in ns))
        else:
            step = float(c)
            if step <= 0:
                raise ValueError
            ns = [int(round(x)) for x in np.arange(lo, hi + step / 2, step)]
    except ValueError:
        raise UsageError(f"bad n grid {text!r}; use a:b:logK or a:b:step") from None
    if not ns or ns[0] < 1 or any(y <= x for x, y in zip(ns, ns[1:])):
        raise UsageError(f"n grid {text!r} must be positive and strictly increasing")
    return ns


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _channel(args):
    if args.channel and args.channel_file:
        raise UsageError("give either --channel or --channel-file")
    if args.channel:
        kind, _, arg = args.channel.partition(":")
        try:
            p = float(arg)
        except ValueError:
            p = None
        if kind != "bsc" or p is None:
            raise UsageError(f"unknown channel shorthand {args.channel!r}; use bsc:p")
        return DiscreteChannel.bsc(p)
    if args.channel_file:
        try:
            return DiscreteChannel.from_json(_load_json(args.channel_file))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed channel file: {exc}") from None
    raise UsageError("a channel is required (--channel bsc:p or --channel-file)")


def build_config(args):
    cfg = RunConfig(command=args.command, seed=args.seed, out=args.out)
    cfg.model = getattr(args, "model", None)
    if args.command == "bound":
        cfg.fmt = args.format or "csv"
    else:
        cfg.fmt = args.format or "json"
        if cfg.fmt != "json":
            raise UsageError(f"{args.command} only writes json")
    model = cfg.model
    if model in ("binary",):
        if args.gamma is None:
            raise UsageError("--gamma is required for the binary model")
        cfg.gamma = args.gamma
    elif model == "bpsk":
        if args.energy is None:
            raise UsageError("--energy is required for the bpsk model")
        cfg.energy = args.energy
    elif model == "dmc":
        cfg.channel = _channel(args)
    elif model == "dispersion":
        if args.capacity is None or args.dispersion is None:
            raise UsageError("--capacity and --dispersion are required")
        cfg.capacity, cfg.dispersion = args.capacity, args.dispersion
    elif model == "ensemble":
        if not args.ensemble_file:
            raise UsageError("--ensemble-file is required")
        try:
            cfg.ensemble = GramEnsemble.from_json(_load_json(args.ensemble_file))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed ensemble file: {exc}") from None
        cfg.energy = args.energy
    elif model == "constellation":
        if not args.constellation_file:
            raise UsageError("--constellation-file is required")
        try:
            con = optical.CoherentConstellation.from_json(_load_json(args.constellation_file))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed constellation file: {exc}") from None
        cfg.ensemble = con.ensemble()
        cfg.energy = con.energy_budget
    if args.command == "bound":
        if (args.n is None) == (args.n_grid is None):
            raise UsageError("give exactly one of --n and --n-grid")
        cfg.n_grid = [args.n] if args.n is not None else parse_n_grid(args.n_grid)
        if cfg.n_grid[0] < 1:
            raise UsageError("n must be positive")
    return cfg


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def dumps(obj):
    return json.dumps(_clean(obj), allow_nan=False) + "\n"


def write_output(text, path):
    """Write to stdout, or atomically to ``path`` through a temporary file."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cqrates-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _binary_gamma(cfg):
    if cfg.model == "binary":
        return cfg.gamma
    if cfg.model == "bpsk":
        return optical.bpsk_overlap(cfg.energy)
    return None


def _ensemble(cfg):
    g = _binary_gamma(cfg)
    if g is not None:
        if not 0.0 <= g <= 1.0:
            raise DomainError(f"gamma={g} outside [0, 1]")
        return GramEnsemble([[1.0, g], [g, 1.0]])
    return cfg.ensemble


def cmd_capacity(cfg, args):
    report = {}
    g = _binary_gamma(cfg)
    if g is not None:
        report["c"] = capacities.holevo_binary(g)
        report["c1"] = capacities.c1_binary(g)
    elif cfg.model == "dmc":
        c, prior = capacities.max_mutual_information(cfg.channel)
        report["c"], report["prior"] = c, prior.tolist()
    elif cfg.model in ("ensemble", "constellation"):
        c, prior = capacities.holevo_general(cfg.ensemble)
        report["c"], report["prior"] = c, prior.tolist()
    else:
        raise UsageError(f"capacity is not defined for model {cfg.model}")
    if cfg.energy:
        report["pie"] = capacities.pie(report["c"], cfg.energy)
        if "c1" in report:
            report["pie1"] = capacities.pie(report["c1"], cfg.energy)
        report["gaussian_c"] = capacities.gaussian_holevo(cfg.energy)
    return dumps(report)


def _model_spec(cfg):
    if cfg.model == "constellation":
        return bounds.ModelSpec("ensemble", ensemble=cfg.ensemble)
    return bounds.ModelSpec(cfg.model, gamma=cfg.gamma, energy=cfg.energy,
                            channel=cfg.channel, capacity=cfg.capacity,
                            dispersion=cfg.dispersion, ensemble=cfg.ensemble)


def cmd_bound(cfg, args):
    curve = bounds.sweep(_model_spec(cfg), cfg.n_grid, bound=args.bound)
    for n, msg in curve.failures:
        log.warning("n=%d skipped: %s", n, msg)
    if cfg.fmt == "csv":
        return "\n".join(bounds.curve_rows(curve, cfg.energy)) + "\n"
    points = []
    for p in curve.points:
        d = {"n": p.n, "r_star": p.r_star, "s_star": p.s_star, "exponent": p.exponent,
             "pe_bound": p.pe_bound, "rate_lb_nats": p.rate_lb}
        if cfg.energy:
            d["pie_nats_per_photon"] = p.rate_lb / cfg.energy
        points.append(d)
    failures = [{"n": n, "error": msg} for n, msg in curve.failures]
    return dumps({"model": curve.model, "points": points, "failures": failures})


def cmd_exponent(cfg, args):
    if args.rate is None:
        raise UsageError("--rate is required")
    if cfg.model == "dmc":
        fn = exponents.ExponentFunction.classical(cfg.channel)
    elif cfg.model in ("binary", "bpsk", "ensemble", "constellation"):
        fn = exponents.ExponentFunction.quantum(_ensemble(cfg))
    else:
        raise UsageError(f"exponent is not defined for model {cfg.model}")
    out = []
    for r in args.rate:
        pt = fn.point(r)
        out.append({"rate": pt.rate, "exponent": pt.exponent, "s_star": pt.s_star,
                    "prior_star": list(pt.prior_star)})
    return dumps(out[0] if len(out) == 1 else out)


def cmd_dispersion(cfg, args):
    report = {}
    if cfg.model == "dmc":
        report["c"], _ = capacities.max_mutual_information(cfg.channel)
        report["v"] = exponents.classical_dispersion(cfg.channel)
    elif cfg.model in ("binary", "bpsk"):
        g = _binary_gamma(cfg)
        report["c"] = capacities.holevo_binary(g)
        report["v"] = exponents.quantum_dispersion(spectral.binary_spectrum(0.5, g))
    elif cfg.model in ("ensemble", "constellation"):
        c, prior = capacities.holevo_general(cfg.ensemble)
        prior = np.asarray(prior) / math.fsum(prior)
        report["c"] = c
        report["v"] = exponents.quantum_dispersion(
            spectral.ensemble_spectrum(cfg.ensemble.with_prior(prior)))
    elif cfg.model is not None:
        raise UsageError(f"dispersion is not defined for model {cfg.model}")
    if "c" in report and report["c"] > 0:
        report["v_over_c2"] = report["v"] / report["c"] ** 2
    if args.snr is not None:
        report["awgn_vc_ratio_lowsnr"] = exponents.awgn_vc_ratio_lowsnr(args.snr)
    if not report:
        raise UsageError("give --model or --snr")
    return dumps(report)


def cmd_lemma1(cfg, args):
    if args.energy is None:
        raise UsageError("--energy is required")
    return dumps(optical.lemma1_optimal_binary(args.energy).to_json())


def cmd_dmcsim(cfg, args):
    if args.n is None or args.rate is None:
        raise UsageError("--n and --rate are required")
    if args.trials < 100:
        raise UsageError("--trials must be at least 100")
    if args.n < 1:
        raise UsageError("--n must be positive")
    report = dmcsim.simulate(_channel(args), args.n, args.rate[0], args.trials, cfg.seed,
                             code=args.code, m=args.m)
    return dumps(report)


def cmd_oracle_cn(cfg, args):
    if args.n is None:
        raise UsageError("--n is required")
    m = args.m or 2
    cn, code, decoder = dmcsim.brute_force_cn(_channel(args), args.n, m)
    return dumps({"n": args.n, "m": m, "cn": cn, "cn_per_use": cn / args.n,
                  "best_code": code.codewords.tolist(), "best_decoder": decoder.tolist()})


COMMANDS = {
    "capacity": cmd_capacity,
    "bound": cmd_bound,
    "exponent": cmd_exponent,
    "dispersion": cmd_dispersion,
    "lemma1": cmd_lemma1,
    "dmcsim": cmd_dmcsim,
    "oracle-cn": cmd_oracle_cn,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output path (written atomically)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--model", choices=MODELS)
    common.add_argument("--gamma", type=float)
    common.add_argument("--energy", type=float)
    common.add_argument("--channel", help="shorthand such as bsc:0.11")
    common.add_argument("--channel-file")
    common.add_argument("--ensemble-file")
    common.add_argument("--constellation-file")
    common.add_argument("--capacity", type=float)
    common.add_argument("--dispersion", type=float)
    common.add_argument("--snr", type=float)
    common.add_argument("--n", type=int)
    common.add_argument("--n-grid")
    common.add_argument("--bound", choices=("thm1", "thm2", "cor1", "simplified", "thm3"))
    common.add_argument("--rate", type=float, nargs="+")
    common.add_argument("--trials", type=int, default=100_000)
    common.add_argument("--code", choices=("random", "repetition"), default="random")
    common.add_argument("--m", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="cqrates", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "capacity": "Holevo capacity, single-copy accessible information and PIE",
        "bound": "finite-blocklength rate bounds over an n grid (CSV or JSON)",
        "exponent": "random-coding error exponent at given rates",
        "dispersion": "channel dispersion and V/C^2",
        "lemma1": "optimal energy-constrained binary input for single-symbol detection",
        "dmcsim": "simulate an inner code over a DMC",
        "oracle-cn": "exhaustive C_n for tiny DMC instances",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _fail(code, kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = build_config(args)
        text = COMMANDS[args.command](cfg, args)
        write_output(text, cfg.out)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, type(exc).__name__, str(exc))
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, type(exc).__name__, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())

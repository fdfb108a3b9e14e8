"""Command-line interface.

Exit codes: 0 success, 1 validation or usage error, 2 budget exceeded,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .covering import DEFAULT_BUDGET, BudgetError, cover_report, required_depth
from .exactscale import InsufficientDepthError, as_scale, as_theta, power_scale
from .formulas import assouad_spectrum, build_extreme_ensemble, spectrum_curve, summarize
from .model import Ensemble, ValidationError, ensemble_from_dict, load_ensemble, validate_ensemble
from .montecarlo import chernoff_decay, product_window, ratio_convergence, spectrum_estimate
from .render import RenderBudgetError, emit_dimension_csv, render_carpet
from .sampler import Omega, explicit_omega, sample_omega

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_FAIL = 0, 1, 2, 3

# options that change where or how fast output is produced, not what it contains
EXECUTION_ONLY = {"threads", "out", "csv"}


def rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer; decimals are refused."""
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(
            f"{text!r}: give an exact rational such as 3/10 instead of a decimal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational p/q") from None


def grid_spec(text: str) -> tuple[Fraction, Fraction, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be a:b:n, e.g. 1/100:99/100:99")
    return rational(parts[0]), rational(parts[1]), int(parts[2])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="randcarpet", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"randcarpet {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_ensemble(p):
        p.add_argument("ensemble", help="ensemble JSON file")
        p.add_argument("--renormalize", action="store_true", help="rescale weights to sum 1")

    def with_omega(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--omega", help="JSON file with the realization (array of 1-based indices)")
        g.add_argument("--seed", type=int, help="sample the realization from this seed (0: fresh)")

    p = sub.add_parser("validate", help="check an ensemble file")
    with_ensemble(p)

    p = sub.add_parser("dims", help="almost-sure dimensions")
    with_ensemble(p)
    p.add_argument("--format", choices=["json", "table"], default="json")

    p = sub.add_parser("spectrum", help="Assouad spectrum on a grid or at one theta")
    with_ensemble(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--grid", type=grid_spec, help="a:b:n evenly spaced thetas")
    g.add_argument("--theta", type=rational)
    p.add_argument("--csv", help="write CSV here instead of stdout")

    p = sub.add_parser("sample", help="sample a realization")
    with_ensemble(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--length", type=int, required=True)

    p = sub.add_parser("cover", help="covering bounds for an approximate square")
    with_ensemble(p)
    with_omega(p)
    p.add_argument("--R", type=rational, required=True, dest="R")
    p.add_argument("--theta", type=rational, required=True)
    p.add_argument("--exact", action="store_true", help="also enumerate the exact count")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("render", help="rasterize a realization to PGM")
    with_ensemble(p)
    with_omega(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="Monte Carlo verification suites")
    with_ensemble(p)
    p.add_argument("--suite", choices=["chernoff", "window", "ratios", "spectrum"], required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--theta", type=rational, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--stat", choices=["m", "n", "N", "B", "C"], default="n")
    p.add_argument("--q", type=int, default=None, help="depth (spectrum) or largest level (window)")
    p.add_argument("--mode", choices=["formula", "exact"], default="formula")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="write the report JSON here (default: stdout)")

    p = sub.add_parser("extreme", help="mixture with small quasi-Assouad and full Assouad dimension")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--out", help="also write the ensemble JSON here")
    return ap


@dataclass(frozen=True)
class RunConfig:
    command: str
    options: tuple  # sorted (name, value) pairs, values as given on the command line

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "RunConfig":
        opts = {k: v for k, v in vars(ns).items() if k != "command"}
        return cls(ns.command, tuple(sorted((k, _canon(v)) for k, v in opts.items())))

    def to_argv(self, include_execution: bool = True) -> list[str]:
        out = [self.command]
        for k, v in self.options:
            if v is None or v is False or (not include_execution and k in EXECUTION_ONLY):
                continue
            if k == "ensemble":
                continue
            flag = "--" + k
            if v is True:
                out.append(flag)
            else:
                out += [flag, str(v)]
        ens = dict(self.options).get("ensemble")
        if ens is not None:
            out.append(str(ens))
        return out

    def header(self) -> dict:
        """Reproducibility header embedded in every output."""
        return {"tool": "randcarpet", "version": __version__,
                "argv": self.to_argv(include_execution=False)}


def _canon(v):
    if isinstance(v, tuple) and len(v) == 3:
        return f"{v[0]}:{v[1]}:{v[2]}"
    if isinstance(v, Fraction):
        return str(v)
    return v


def _load(args) -> Ensemble:
    try:
        return load_ensemble(args.ensemble, renormalize=args.renormalize)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read ensemble: {exc}") from None


def _omega(args, e: Ensemble, length: int = 1) -> Omega:
    if args.omega is not None:
        data = json.loads(Path(args.omega).read_text())
        if isinstance(data, dict):
            data = data.get("omega")
        if not isinstance(data, list):
            raise ValidationError("omega file must hold a JSON array of indices")
        try:
            return explicit_omega(data, e)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
    om = sample_omega(e, args.seed, max(1, length))
    if args.seed == 0:
        print(f"derived seed: {om.seed}", file=sys.stderr)
    return om


def _dump(obj, out=None) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _comment(cfg: RunConfig) -> str:
    h = cfg.header()
    return f"{h['tool']} {h['version']} " + " ".join(h["argv"])


def cmd_validate(args, cfg):
    try:
        data = json.loads(Path(args.ensemble).read_text())
        e = ensemble_from_dict(data, renormalize=args.renormalize)
        report = validate_ensemble(e)
    except (ValidationError, OSError, json.JSONDecodeError) as exc:
        report = [str(exc)]
    _dump({"header": cfg.header(), "valid": not report, "violations": report})
    return EXIT_OK if not report else EXIT_INVALID


def cmd_dims(args, cfg):
    s = summarize(_load(args))
    if args.format == "table":
        print(f"# {_comment(cfg)}")
        for k, v in s.to_dict().items():
            print(f"{k:24s} {v:.12g}")
    else:
        _dump({"header": cfg.header(), **s.to_dict()})
    return EXIT_OK


def cmd_spectrum(args, cfg):
    e = _load(args)
    if args.theta is not None:
        as_theta(args.theta)
        s = summarize(e)
        _dump({"header": cfg.header(), "theta": str(args.theta),
               "spectrum": assouad_spectrum(e, float(args.theta)), **s.to_dict()})
        return EXIT_OK
    a, b, n = args.grid
    curve = spectrum_curve(e, np.linspace(float(a), float(b), n))
    emit_dimension_csv(curve, args.csv or sys.stdout, header_comment=_comment(cfg))
    return EXIT_OK


def cmd_sample(args, cfg):
    om = sample_omega(_load(args), args.seed, args.length)
    if args.seed == 0:
        print(f"derived seed: {om.seed}", file=sys.stderr)
    _dump({"header": cfg.header(), **om.to_dict()})
    return EXIT_OK


def cmd_cover(args, cfg):
    e = _load(args)
    R, theta = as_scale(args.R), as_theta(args.theta)
    om = _omega(args, e, required_depth(e, R, theta))
    ps = power_scale(R, theta)
    try:
        rep = cover_report(om, e, R, theta, exact=args.exact, budget=args.budget)
    except BudgetError as exc:
        _dump({"header": cfg.header(), "error": str(exc), "log_estimate": exc.log_estimate,
               "depth_budget_hit": True})
        return EXIT_BUDGET
    body = rep.to_dict()
    body["R"] = str(R)
    body["theta"] = str(theta)
    body["small_scale"] = {"lo": str(ps.lo), "hi": str(ps.hi), "exact": ps.exact}
    body["upper_bound"] = "4*exp(log_upper)"
    _dump({"header": cfg.header(), **body})
    return EXIT_OK


def cmd_render(args, cfg):
    e = _load(args)
    om = _omega(args, e, args.depth)
    raster = render_carpet(om, e, args.depth, args.width)
    raster.save_pgm(args.out, comment=_comment(cfg))
    print(args.out)
    return EXIT_OK


_VERIFY_DEFAULTS = {
    "chernoff": {"trials": 100000, "epsilon": 0.05},
    "window": {"trials": 10000, "epsilon": 0.02, "q": 500},
    "ratios": {"trials": 1000, "epsilon": 0.05, "theta": Fraction(1, 2), "q": 400},
    "spectrum": {"trials": 100, "theta": Fraction(9, 10), "q": 60},
}


def run_suite(e: Ensemble, suite: str, trials: int | None = None, seed: int = 1,
              theta=None, epsilon: float | None = None, stat: str = "n", q: int | None = None,
              mode: str = "formula", threads: int = 1):
    d = _VERIFY_DEFAULTS[suite]
    trials = trials if trials is not None else d["trials"]
    epsilon = epsilon if epsilon is not None else d.get("epsilon")
    theta = theta if theta is not None else d.get("theta")
    q = q if q is not None else d.get("q")
    if suite == "chernoff":
        lengths = list(range(10, 201, 10))
        return chernoff_decay(e, stat, epsilon, lengths, trials, seed, threads=threads)
    if suite == "window":
        return product_window(e, epsilon, q, trials, seed, stat=stat, clean_after=min(200, q),
                              threads=threads)
    if suite == "ratios":
        qs = sorted({max(1, q // 8), max(1, q // 4), max(1, q // 2), q})
        return ratio_convergence(e, theta, epsilon, qs, trials, seed, threads=threads)
    return spectrum_estimate(e, theta, q, trials, seed, mode=mode, threads=threads)


def cmd_verify(args, cfg):
    e = _load(args)
    rep = run_suite(e, args.suite, args.trials, args.seed, args.theta, args.epsilon, args.stat,
                    args.q, args.mode, args.threads)
    body = json.loads(rep.to_json())
    text = json.dumps({"header": cfg.header(), **body}, indent=1, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        stream = sys.stdout
    else:
        sys.stdout.write(text)
        stream = sys.stderr
    for a in rep.assertions:
        print(f"{'PASS' if a['passed'] else 'FAIL'} {args.suite}:{a['name']}", file=stream)
    if args.out:
        print(f"report: {args.out}", file=stream)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_extreme(args, cfg):
    e = build_extreme_ensemble(args.epsilon)
    if args.out:
        Path(args.out).write_text(e.to_json(indent=1) + "\n")
    _dump({"header": cfg.header(), "ensemble": e.to_dict(), "dimensions": summarize(e).to_dict(),
           "components": [summarize(e.single(i)).to_dict() for i in (1, 2)]})
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate, "dims": cmd_dims, "spectrum": cmd_spectrum, "sample": cmd_sample,
    "cover": cmd_cover, "render": cmd_render, "verify": cmd_verify, "extreme": cmd_extreme,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig.from_namespace(args)
    try:
        return COMMANDS[args.command](args, cfg)
    except (ValidationError, InsufficientDepthError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetError, RenderBudgetError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())

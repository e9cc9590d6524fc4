"""Command-line entry point.

Scenario files are INI documents::

    [low]
    prior = 1.0
    reward = 10
    rate_good = 5
    rate_bad = 0

    [high]
    prior = 0.5
    reward = 15
    rate_good = 5
    rate_bad = 0

    [scenario]
    discount = 1
    alpha = 0

An optional ``[sweep:p_H]`` or ``[sweep:r_over_lambda]`` section with keys
``from``, ``to`` and ``steps`` sets the delta-surface grid.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 precondition
violation.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import math
import sys

import numpy as np

from . import closedform as cf
from .acceptance import CYCLE_BOX, SUITES, pairwise_cycle_check, run_suite
from .dp_oracle import exploits_high, extract_threshold, value_iteration_safe
from .model import ModelError, ProjectSpec, Scenario, classify_regime
from .policy import classical_policy, optimal_policy
from .simulate import monte_carlo, no_news_timeline

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_MODEL = 0, 1, 2, 3


class ParseError(ValueError):
    pass


def _number(cfg, section, key, default=None) -> float:
    if not cfg.has_option(section, key):
        if default is not None:
            return default
        raise ParseError(f"missing key '{section}.{key}'")
    raw = cfg.get(section, key)
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"key '{section}.{key}' is not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise ParseError(f"key '{section}.{key}' must be finite, got {raw!r}")
    return value


def read_config(path: str) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cfg.read_file(fh)
    except OSError as exc:
        raise ParseError(f"cannot read scenario file: {exc}") from None
    except configparser.Error as exc:
        raise ParseError(f"malformed scenario file: {exc}") from None
    return cfg


def load_scenario(path: str):
    """Parse a scenario file; returns (Scenario, ConfigParser)."""
    cfg = read_config(path)
    for section in ("low", "high", "scenario"):
        if not cfg.has_section(section):
            raise ParseError(f"missing section '[{section}]'")
    specs = []
    for section in ("low", "high"):
        specs.append(ProjectSpec(
            _number(cfg, section, "prior"),
            _number(cfg, section, "reward"),
            _number(cfg, section, "rate_good"),
            _number(cfg, section, "rate_bad"),
        ))
    scenario = Scenario(specs[0], specs[1], _number(cfg, "scenario", "discount"),
                        _number(cfg, "scenario", "alpha", 0.0))
    return scenario, cfg


def sweep_axis(cfg, axis: str, default):
    section = f"sweep:{axis}"
    if not cfg.has_section(section):
        return default
    lo, hi = _number(cfg, section, "from"), _number(cfg, section, "to")
    steps = _number(cfg, section, "steps")
    if steps < 2 or steps != int(steps):
        raise ParseError(f"key '{section}.steps' must be an integer of at least 2")
    if axis == "r_over_lambda":
        if lo <= 0 or hi <= 0:
            raise ParseError(f"keys '{section}.from' and '{section}.to' must be positive")
        return np.logspace(math.log10(lo), math.log10(hi), int(steps))
    return np.linspace(lo, hi, int(steps))


# -- output -------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_csv(rows, header, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -- commands -----------------------------------------------------------------

def cmd_cutoff(args) -> int:
    sc, _ = load_scenario(args.scenario)
    if not sc.safe_low:
        raise ModelError("cutoff requires a safe project L (low.prior = 1)")
    lo, hi = sc.low, sc.high
    lam = hi.max_rate
    grid_n = args.grid or 400
    pbar = cf.cutoff_pbar(sc.alpha, sc.discount, lam, lo.reward, hi.reward)
    threshold = extract_threshold(value_iteration_safe(sc, 2e-4, grid_n), 0, exploits_high)
    print(f"p_M      {_fmt(cf.myopic_cutoff(sc))}")
    print(f"pbar({sc.alpha:g}) {_fmt(pbar)}")
    print(f"pbar(0)  {_fmt(cf.cutoff_pbar(0.0, sc.discount, lam, lo.reward, hi.reward))}")
    print(f"pbar(1)  {_fmt(cf.cutoff_pbar(1.0, sc.discount, lam, lo.reward, hi.reward))}")
    print(f"oracle   {_fmt(threshold)}")
    print(f"gap      {abs(threshold - pbar) * grid_n:.3f} cells (grid {grid_n})")
    return EXIT_OK


def cmd_delta_surface(args) -> int:
    sc, cfg = load_scenario(args.scenario)
    if not sc.safe_low:
        raise ModelError("delta-surface requires a safe project L (low.prior = 1)")
    hi = sc.high
    if hi.rate_good > 0 and hi.rate_bad > 0:
        raise ModelError("delta-surface requires pure news on project H")
    regime = classify_regime(sc)
    n = args.grid or 50
    ps = sweep_axis(cfg, "p_H", np.linspace(0.0, 1.0, n + 2)[1:-1])
    ratios = sweep_axis(cfg, "r_over_lambda", np.logspace(-2, 2, n))
    rows = []
    for ratio in ratios:
        for p in ps:
            v = cf.delta_pi(float(p), float(ratio), regime, sc.low.reward, hi.reward)
            rows.append((float(p), float(ratio), regime.value, v.pi_alpha0, v.pi_alpha1,
                         v.delta_pi_normalized))
    write_csv(rows, ["p_H", "r_over_lambda", "regime", "pi_alpha0", "pi_alpha1", "delta_pi"],
              args.out)
    return EXIT_OK


def _policy_for(sc, grid_n):
    if sc.safe_low:
        return optimal_policy(sc, grid_n)
    if sc.alpha == 1.0:
        return classical_policy(sc)
    if sc.alpha != 0.0:
        raise ModelError("two risky projects are supported at alpha 0 or alpha 1")
    return optimal_policy(sc, grid_n)


def cmd_policy(args) -> int:
    sc, _ = load_scenario(args.scenario)
    pol = _policy_for(sc, args.grid or 400)
    desc = pol.descriptor
    for key, value in desc.items():
        if isinstance(value, (list, tuple)):
            value = " ".join(_fmt(float(v)) for v in value) or "none"
        print(f"{key}: {_fmt(value)}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    times = [t for t in desc["exploit_switch_times"] if math.isfinite(t)]
    if math.isfinite(desc["switch_time"]):
        times.append(desc["switch_time"])
    horizon = max([10.0 / sc.discount] + [1.5 * t for t in times])
    rows = no_news_timeline(pol, sc, horizon, 201)
    write_csv(rows, ["t", "p_L", "p_H", "explored", "exploited"], args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    sc, _ = load_scenario(args.scenario)
    pol = _policy_for(sc, args.grid or 400)
    n = args.paths or 100_000
    rep = monte_carlo(pol, sc, n, master_seed=args.seed)
    row = (pol.name, rep.n_paths, args.seed, rep.horizon, rep.mean, rep.std_error, rep.tail_bound)
    write_csv([row], ["policy", "paths", "seed", "horizon", "mean", "std_error", "tail_bound"],
              args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = None if args.seed == 0 else args.seed
    ok = True
    for res in run_suite(args.suite, seed):
        print(res.line(), flush=True)
        for failure in res.failures:
            print(f"    failing: {failure}")
        ok = ok and res.passed
    if args.suite == "cycle":
        ok = _print_cycle(cf.find_no_index_cycle(CYCLE_BOX, seed=args.seed)) and ok
    return EXIT_OK if ok else EXIT_FAIL


def _print_cycle(triple) -> bool:
    for k, s in enumerate(triple, 1):
        print(f"project {k}: p={_fmt(s.prior_good)} R={_fmt(s.reward)} lambda={_fmt(s.rate_good)}")
    ok = True
    for a, b, holds in pairwise_cycle_check(triple):
        print(f"{a} explored over {b}: {'yes' if holds else 'no'}")
        ok = ok and holds
    return ok


def cmd_cycle(args) -> int:
    ok = _print_cycle(cf.find_no_index_cycle(CYCLE_BOX, seed=args.seed))
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forage", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True):
        if scenario:
            p.add_argument("--scenario", required=True, help="INI scenario file")
        p.add_argument("--seed", type=int, default=0, help="master seed (u64)")
        p.add_argument("--paths", type=int, default=None, help="Monte Carlo paths")
        p.add_argument("--grid", type=int, default=None, help="grid resolution")
        p.add_argument("--out", default=None, help="output CSV path (default stdout)")

    common(sub.add_parser("cutoff", help="exploitation cutoff and oracle threshold"))
    common(sub.add_parser("delta-surface", help="value of disentanglement over (p_H, r/lambda)"))
    common(sub.add_parser("policy", help="policy descriptor and no-news timeline"))
    common(sub.add_parser("simulate", help="Monte Carlo payoff of the policy"))
    verify = sub.add_parser("verify", help="run an acceptance battery")
    verify.add_argument("suite", choices=sorted(SUITES))
    common(verify, scenario=False)
    common(sub.add_parser("cycle", help="search for a three-project exploration cycle"),
           scenario=False)
    return parser


COMMANDS = {
    "cutoff": cmd_cutoff, "delta-surface": cmd_delta_surface, "policy": cmd_policy,
    "simulate": cmd_simulate, "verify": cmd_verify, "cycle": cmd_cycle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.seed < 0 or args.seed >= 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_PARSE
    if args.paths is not None and args.paths < 1:
        print("error: --paths must be positive", file=sys.stderr)
        return EXIT_PARSE
    if args.grid is not None and args.grid < 4:
        print("error: --grid must be at least 4", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ModelError, cf.NoCycleFound) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())

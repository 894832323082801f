"""``stability-lab`` command line.

Exit codes: 0 when everything requested passed, 1 when a check failed,
2 for bad arguments, unknown names or unreadable inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus, verify
from .fourier_core import level1_weight, noise_stability, var_pt, wht
from .halfspace_bool import EXACT_MAX_N, exact_M, heuristic_M
from .restrictions import RestrictionLaw, restriction_expectation, restriction_time

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _function(spec: str):
    try:
        return corpus.resolve(spec)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot load function {spec!r}: {exc}") from exc


def _dump(obj) -> None:
    print(json.dumps(verify._plain(obj), indent=2))


def _time_grid(text: str) -> tuple[float, float, int]:
    try:
        t0, t1, steps = text.split(":")
        return float(t0), float(t1), int(steps)
    except ValueError:
        raise ConfigError(f"stability curve must look like t0:t1:steps, got {text!r}") from None


def cmd_analyze(args) -> int:
    f = _function(args.fn)
    if args.stability_curve:
        t0, t1, steps = _time_grid(args.stability_curve)
        sys.stdout.write(verify.stability_curve(f, t0, t1, steps))
        return EXIT_OK
    spec = wht(f)
    out = {"n": f.n, "range": f.range_tag, "mean": f.mean(), "variance": f.variance(),
           "boolean": f.is_boolean(), "weight_by_degree": spec.weight_by_degree(),
           "level1_weight": level1_weight(f), "var_pt": {t: var_pt(f, t) for t in (0.1, 0.5, 1.0)}}
    if f.is_boolean() and f.range_tag == "indicator":
        out["noise_stability"] = {t: noise_stability(f, t) for t in (0.1, 0.5, 1.0)}
    if args.spectrum:
        out["spectrum"] = {int(k): float(c) for k, c in enumerate(spec.coeffs) if abs(c) > 1e-15}
    _dump(out)
    return EXIT_OK


def cmd_mcorr(args) -> int:
    f = _function(args.fn)
    if args.exact:
        if f.n > EXACT_MAX_N:
            raise ConfigError(f"--exact needs n <= {EXACT_MAX_N}")
        res = exact_M(f)
    else:
        res = heuristic_M(f, budget=args.budget, seed=args.seed)
    _dump(res.to_json())
    return EXIT_OK


def cmd_restrict(args) -> int:
    f = _function(args.fn)
    if args.t <= 0:
        raise ConfigError("--t must be positive")
    s = restriction_time(args.t)
    law = RestrictionLaw(s)
    exact = args.exact or (args.samples is None and f.n <= EXACT_MAX_N)
    if exact and f.n > EXACT_MAX_N:
        raise ConfigError(f"--exact needs n <= {EXACT_MAX_N}")
    w1 = restriction_expectation(f, law, level1_weight, "exact" if exact else "mc",
                                 samples=args.samples or 2000, seed=args.seed)
    report = verify.check_boolean_restriction_theorem(
        f, args.t, "exact" if exact else "sampled", samples=args.samples or 2000,
        seed=args.seed, name=args.fn)
    _dump({"t": args.t, "s": s, "expected_w1": w1.value, "expected_w1_stderr": w1.stderr,
           "report": report.to_json()})
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; known: {', '.join(verify.SUITES)}, all")
    reports = verify.run_suite(args.suite, seed=args.seed, samples=args.samples)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.check_id}  lhs={r.lhs:.9g} rhs={r.rhs:.9g} "
              f"slack={r.slack:.3g}  ({r.runtime:.2f}s)")
    if args.out:
        jpath, cpath = verify.emit(reports, args.out, args.suite)
        print(f"wrote {jpath} and {cpath}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


EXAMPLES = {
    "counterexample-decay": lambda: verify.counterexample_decay(),
    "mixed": lambda: verify.check_mixed_example(),
    "peres": lambda: verify.check_peres(),
    "block-ball": lambda: verify.check_boolean_restriction_theorem(
        corpus.block_ball(2), 0.5, name="block-ball:2"),
}


def cmd_example(args) -> int:
    if args.name not in EXAMPLES:
        raise ConfigError(f"unknown example {args.name!r}; known: {', '.join(EXAMPLES)}")
    result = EXAMPLES[args.name]()
    reports = result if isinstance(result, list) else [result]
    _dump([r.to_json() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    seed = verify.default_seed()
    p = _Parser(prog="stability-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="spectrum and stability summary of a function")
    a.add_argument("fn", help="registry name like majority:5, or a table file")
    g = a.add_mutually_exclusive_group()
    g.add_argument("--spectrum", action="store_true")
    g.add_argument("--stability-curve", metavar="T0:T1:STEPS")
    a.set_defaults(run=cmd_analyze)

    m = sub.add_parser("mcorr", help="best covariance with a half-space")
    m.add_argument("fn")
    g = m.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--budget", type=int, default=200)
    m.add_argument("--seed", type=int, default=seed)
    m.set_defaults(run=cmd_mcorr)

    r = sub.add_parser("restrict", help="random-restriction statistics at noise time T")
    r.add_argument("fn")
    r.add_argument("--t", type=float, required=True)
    g = r.add_mutually_exclusive_group()
    g.add_argument("--samples", type=int)
    g.add_argument("--exact", action="store_true")
    r.add_argument("--seed", type=int, default=seed)
    r.set_defaults(run=cmd_restrict)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help=f"one of {', '.join(verify.SUITES)}, all")
    v.add_argument("--seed", type=int, default=seed)
    v.add_argument("--samples", type=int, default=1_000_000)
    v.add_argument("--out")
    v.set_defaults(run=cmd_verify)

    e = sub.add_parser("example", help=f"run a named example: {', '.join(EXAMPLES)}")
    e.add_argument("name")
    e.set_defaults(run=cmd_example)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

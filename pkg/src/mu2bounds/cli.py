"""Command-line front door.

Subcommands:
  constants     certified values from the registered catalog
  estimate      emit a serialized estimate report for a preset
  verify        run a brute-force bound sweep; exit 1 on any violated bound
  compare-ra13  reproduce the coprime-average comparison table

Exit codes: 0 success, 1 bound violation, 2 usage or domain error.  Result
assembly is single-threaded and windows merge in ascending order, so numeric
output is identical for any --threads value (timing fields excepted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import zeta
from .constants import compute_constant, constant_names
from .errors import BetaGapTooSmall, Mu2BoundsError
from .estimator import (
    EstimateReport,
    comparison_table,
    convolution_estimate,
    critical_estimate,
)
from .eulerprod import get_preset, preset_names
from .interval import Interval, decimal_bound, interval_to_json
from .oracle import default_grid, bound_sweep, rows_to_csv, sweep_passes

_HALF = Fraction(1, 2)


@dataclass
class RunConfig:
    prime_limit: int = 10**7
    delta: Fraction = Fraction(1, 3)
    zeta_cutoff: int = 10**6
    threads: int = 1
    format: str = "json"

    def __post_init__(self):
        if self.prime_limit < 10**4:
            raise ValueError("prime limit must be at least 10^4")
        if not 0 < self.delta:
            raise ValueError("delta must be positive")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--prime-limit", type=float, default=1e7)
    parser.add_argument("--delta", type=str, default="1/3")
    parser.add_argument("--zeta-cutoff", type=float, default=1e6)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument(
        "--format", choices=("json", "csv", "text"), default=None
    )


def _config(args: argparse.Namespace, default_format: str) -> RunConfig:
    threads = args.threads
    env = os.environ.get("RIGOR_THREADS")
    if env:
        threads = int(env)
    return RunConfig(
        prime_limit=int(args.prime_limit),
        delta=Fraction(args.delta),
        zeta_cutoff=int(args.zeta_cutoff),
        threads=max(1, threads),
        format=args.format or default_format,
    )


def _interval_text(x: Interval, digits: int = 6) -> str:
    return f"[{decimal_bound(x, digits, 'lower')}, {decimal_bound(x, digits, 'upper')}]"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mu2bounds",
        description="certified estimates for averages of squarefree-supported functions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_const = sub.add_parser("constants", help="compute certified named constants")
    p_const.add_argument("names", nargs="*", help="catalog names")
    p_const.add_argument("--all", action="store_true", dest="all_names")
    _add_common(p_const)

    p_est = sub.add_parser("estimate", help="emit an estimate report")
    p_est.add_argument("preset", choices=preset_names())
    p_est.add_argument("--q", type=int, default=1)
    p_est.add_argument(
        "--method", choices=("convolution", "critical", "auto"), default="auto"
    )
    p_est.add_argument("--alpha", type=str, default=None)
    _add_common(p_est)

    p_ver = sub.add_parser("verify", help="sweep a report against brute force")
    p_ver.add_argument("preset", nargs="?", choices=preset_names())
    p_ver.add_argument("--q", type=int, default=1)
    p_ver.add_argument(
        "--method", choices=("convolution", "critical", "auto"), default="auto"
    )
    p_ver.add_argument("--alpha", type=str, default=None)
    p_ver.add_argument("--xmax", type=float, default=1e6)
    p_ver.add_argument(
        "--all",
        action="store_true",
        dest="all_cases",
        help="run the full acceptance sweep matrix (presets x q in {1,2,3,6})",
    )
    _add_common(p_ver)

    p_cmp = sub.add_parser("compare-ra13", help="comparison table for q=2,3,5,6,10,14")
    _add_common(p_cmp)
    return parser


def _build_report(
    preset: str, alpha, q: int, method: str, config: RunConfig
) -> tuple[EstimateReport, str]:
    f = get_preset(preset, alpha=alpha)
    if method == "convolution":
        return (
            convolution_estimate(f, q, config.delta, config.prime_limit, config.threads),
            "convolution",
        )
    if method == "critical":
        return (
            critical_estimate(f, q, config.prime_limit, config.threads),
            "critical",
        )
    # auto: critical exactly when beta - alpha > 1/2 is certifiable
    try:
        return (
            critical_estimate(f, q, config.prime_limit, config.threads),
            "critical",
        )
    except BetaGapTooSmall as exc:
        print(f"warning: {exc}; falling back to convolution", file=sys.stderr)
        return (
            convolution_estimate(f, q, config.delta, config.prime_limit, config.threads),
            "convolution",
        )


def _report_payload(
    report: EstimateReport, preset: str, q: int, method: str, config: RunConfig, ms: int
) -> dict:
    terms = []
    for term in report.main.terms:
        entry = {"shape": term.shape, "coefficient": interval_to_json(term.coefficient)}
        if term.exponent is not None:
            entry["exponent"] = interval_to_json(term.exponent)
        terms.append(entry)
    return {
        "preset": preset,
        "q": q,
        "method": method,
        "main": terms,
        "error_constant": interval_to_json(report.error_constant),
        "error_exponent": interval_to_json(report.error_exponent),
        "error_has_log": report.error_has_log,
        "additive_error_const": interval_to_json(report.additive_error_const),
        "domain": report.domain,
        "tail_sum": report.tail_sum,
        "provenance": report.provenance,
        "prime_limit": config.prime_limit,
        "time_ms": ms,
    }


def cmd_constants(args: argparse.Namespace) -> int:
    config = _config(args, default_format="json")
    zeta.set_default_cutoff(config.zeta_cutoff)
    names = list(args.names)
    if args.all_names or not names:
        names = constant_names()
    results = []
    for name in names:
        t0 = time.perf_counter()
        res = compute_constant(name, config.prime_limit, config.threads)
        ms = int((time.perf_counter() - t0) * 1000)
        results.append((res, ms))
    if config.format == "json":
        payload = [
            {
                "name": r.name,
                **interval_to_json(r.value),
                "prime_limit": r.prime_limit,
                "time_ms": ms,
            }
            for r, ms in results
        ]
        print(json.dumps(payload, indent=2))
    elif config.format == "csv":
        print("name,lo,hi,prime_limit,time_ms")
        for r, ms in results:
            j = interval_to_json(r.value)
            print(f"{r.name},{j['lo']},{j['hi']},{r.prime_limit},{ms}")
    else:
        for r, ms in results:
            print(f"{r.name} = {_interval_text(r.value)}  ({ms} ms)")
    return 0


def cmd_estimate(args: argparse.Namespace) -> int:
    config = _config(args, default_format="json")
    zeta.set_default_cutoff(config.zeta_cutoff)
    alpha = Fraction(args.alpha) if args.alpha else None
    t0 = time.perf_counter()
    report, method = _build_report(args.preset, alpha, args.q, args.method, config)
    ms = int((time.perf_counter() - t0) * 1000)
    payload = _report_payload(report, args.preset, args.q, method, config, ms)
    if config.format == "json":
        print(json.dumps(payload, indent=2))
    elif config.format == "csv":
        j = payload
        print("field,value")
        for k in ("preset", "q", "method", "domain", "provenance"):
            print(f"{k},{j[k]}")
        print(f"error_constant,{j['error_constant']['lo']}..{j['error_constant']['hi']}")
    else:
        print(f"{report.provenance}: domain {report.domain}")
        for term in report.main.terms:
            label = term.shape
            if term.exponent is not None:
                label += f"^{_interval_text(term.exponent)}"
            print(f"  main {label}: {_interval_text(term.coefficient)}")
        log_note = " * (1 + log(X)/2)" if report.error_has_log else ""
        print(
            f"  |error| <= {_interval_text(report.additive_error_const)} + "
            f"{_interval_text(report.error_constant)} * "
            f"X^-{_interval_text(report.error_exponent)}{log_note}"
        )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    config = _config(args, default_format="csv")
    zeta.set_default_cutoff(config.zeta_cutoff)
    if args.all_cases:
        return _verify_all(args, config)
    if args.preset is None:
        print("error: a preset (or --all) is required", file=sys.stderr)
        return 2
    alpha = Fraction(args.alpha) if args.alpha else None
    report, method = _build_report(args.preset, alpha, args.q, args.method, config)
    f = get_preset(args.preset, alpha=alpha)
    grid = default_grid(f, args.q, args.xmax)
    rows = bound_sweep(report, f, args.q, grid)
    passed = sweep_passes(rows)
    if config.format == "json":
        payload = {
            "preset": args.preset,
            "q": args.q,
            "method": method,
            "rows": len(rows),
            "passed": passed,
            "worst_margin_lo": min(r.margin.lo for r in rows) if rows else None,
        }
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(rows_to_csv(rows))
    print(
        f"verify {args.preset} q={args.q} method={method}: "
        f"{'PASS' if passed else 'FAIL'} over {len(rows)} points",
        file=sys.stderr,
    )
    return 0 if passed else 1


def _verify_all(args: argparse.Namespace, config: RunConfig) -> int:
    """The acceptance sweep matrix: exit 0 iff every certified margin >= 0.

    The critical one_over_p bounds are attained in the limit X -> 1^-, so
    those cases need constants at prime limit 1e8 for the margin at the
    left-limit grid point to be certifiable; the limit is raised for them
    (and only them) when the configured limit is smaller.
    """
    import dataclasses

    failures = 0
    sharp_config = dataclasses.replace(
        config, prime_limit=max(config.prime_limit, 10**8)
    )
    cases = []
    for q in (1, 2, 3, 6):
        cases.append(("one_over_phi", q, "convolution", config))
        cases.append(("one_over_phi", q, "critical", config))
        cases.append(("one_over_p", q, "convolution", config))
        cases.append(("one_over_p", q, "critical", sharp_config))
        cases.append(("unit", q, "critical", config))
    for preset, q, method, cfg in cases:
        report, _ = _build_report(preset, None, q, method, cfg)
        f = get_preset(preset)
        rows = bound_sweep(report, f, q, default_grid(f, q, args.xmax))
        ok = sweep_passes(rows)
        failures += 0 if ok else 1
        print(
            f"verify {preset} q={q} method={method}: "
            f"{'PASS' if ok else 'FAIL'} over {len(rows)} points",
            file=sys.stderr,
        )
    print(
        f"verify --all: {len(cases) - failures}/{len(cases)} sweeps passed",
        file=sys.stderr,
    )
    return 0 if failures == 0 else 1


def cmd_compare(args: argparse.Namespace) -> int:
    config = _config(args, default_format="text")
    zeta.set_default_cutoff(config.zeta_cutoff)
    table = comparison_table(config.prime_limit)
    if config.format == "json":
        payload = [
            {
                "q": row.q,
                "ours": interval_to_json(row.ours),
                "theirs": interval_to_json(row.theirs),
                "verdict": "improved" if row.ours_leq_theirs else "not improved",
            }
            for row in table
        ]
        print(json.dumps(payload, indent=2))
    elif config.format == "csv":
        print("q,ours_hi,theirs_lo,verdict")
        for row in table:
            print(
                f"{row.q},{decimal_bound(row.ours, 6, 'upper')},"
                f"{decimal_bound(row.theirs, 6, 'lower')},"
                f"{'improved' if row.ours_leq_theirs else 'not improved'}"
            )
    else:
        for row in table:
            verdict = "improved" if row.ours_leq_theirs else "not improved"
            print(
                f"q={row.q:3d}  ours <= {decimal_bound(row.ours, 3, 'upper')}  "
                f"cited {decimal_bound(row.theirs, 3, 'lower')}  {verdict}"
            )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "constants": cmd_constants,
        "estimate": cmd_estimate,
        "verify": cmd_verify,
        "compare-ra13": cmd_compare,
    }
    try:
        return handlers[args.command](args)
    except (Mu2BoundsError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

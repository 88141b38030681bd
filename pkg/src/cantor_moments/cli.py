"""Command-line front end: computation, verification, and export.

Commands
--------

``cantor-moments constant --digits D [--json]``
    The series constant to D fractional digits with certified error.

``cantor-moments moments --max-n N --format json|csv``
    Exact moments 0..N as numerator/denominator plus a 20-digit decimal.

``cantor-moments verify --suite S [--json]``
    Run a named check suite (oracle, identity, decay, mellin, cantor,
    all); exit 1 if any check fails.

A single JSON cache file holding Bernoulli numbers and both moment
tables can be enabled by the ``CANTOR_CACHE`` environment variable or
the global ``--cache-path`` flag (the flag wins); with neither present,
caching is disabled.

Exit codes: 0 all-pass, 1 check failure, 2 usage error.  JSON output is
byte-deterministic for identical invocations (fixed field order and
rendering; wall time is reported only on stderr in human mode).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import cantor, constant, contour, exact, moments

_MAX_DIGITS = 60
_MAX_MOMENT_INDEX = 512
_SUITES = ("oracle", "identity", "decay", "mellin", "cantor", "all")


# ---------------------------------------------------------------------------
# Report plumbing
# ---------------------------------------------------------------------------


@dataclass
class RunReport:
    """Outcome of one CLI command."""

    command: str
    parameters: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    wall_time_ms: int = 0

    def add_check(self, name: str, passed: bool, measured: str, tolerance: str) -> None:
        self.checks.append(
            {
                "name": name,
                "status": "pass" if passed else "fail",
                "measured": measured,
                "tolerance": tolerance,
            }
        )

    @property
    def all_pass(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def to_json_dict(self) -> dict:
        # wall_time_ms deliberately omitted: identical invocations must
        # produce byte-identical JSON.
        out = {"command": self.command, "parameters": self.parameters}
        if self.results:
            out["results"] = self.results
        if self.checks:
            out["checks"] = self.checks
            out["all_pass"] = self.all_pass
        return out


def _emit(report: RunReport, json_mode: bool, human_lines: list[str]) -> None:
    if json_mode:
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        for line in human_lines:
            print(line)
        for check in report.checks:
            print(
                f"[{check['status'].upper():4}] {check['name']}: "
                f"measured {check['measured']}, tolerance {check['tolerance']}"
            )
        print(f"wall time: {report.wall_time_ms} ms", file=sys.stderr)


def _fmt(x: float) -> str:
    """Stable scientific rendering for measured values and tolerances."""
    return f"{x:.6e}"


def _ensure_str_digits(*values: int) -> None:
    """Raise CPython's int->str guard high enough for the given ints."""
    need = max(
        (v.bit_length() for v in values if isinstance(v, int)), default=0
    )
    need = int(need * 0.30103) + 12
    if sys.get_int_max_str_digits() < need:
        sys.set_int_max_str_digits(need)


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------


def _fraction_to_str(x: Fraction) -> str:
    _ensure_str_digits(x.numerator, x.denominator)
    return f"{x.numerator}/{x.denominator}"


def _fraction_from_str(s: str) -> Fraction:
    num, _, den = s.partition("/")
    prev = sys.get_int_max_str_digits()
    if len(s) + 10 > prev:
        sys.set_int_max_str_digits(len(s) + 10)
    return Fraction(int(num), int(den or "1"))


def _load_cache(path: str) -> None:
    if not os.path.exists(path):
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        exact.bernoulli_table_restore(
            [_fraction_from_str(s) for s in payload.get("bernoulli", [])]
        )
        moments.memo_restore(
            {int(k): _fraction_from_str(v) for k, v in payload.get("moment_bernoulli", {}).items()},
            [_fraction_from_str(s) for s in payload.get("moment_recursive", [])],
        )
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as err:
        print(f"warning: ignoring unreadable cache {path}: {err}", file=sys.stderr)


def _save_cache(path: str) -> None:
    bern_form, recursive = moments.memo_snapshot()
    payload = {
        "bernoulli": [_fraction_to_str(b) for b in exact.bernoulli_table_snapshot()],
        "moment_bernoulli": {
            str(k): _fraction_to_str(v) for k, v in sorted(bern_form.items())
        },
        "moment_recursive": [_fraction_to_str(v) for v in recursive],
    }
    tmp = f"{path}.tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    except OSError as err:
        print(f"warning: could not write cache {path}: {err}", file=sys.stderr)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_constant(digits: int, json_mode: bool) -> tuple[RunReport, int]:
    start = time.monotonic()
    budget = constant.default_budget(digits)
    result = constant.moment_series_constant(budget)
    rendered = result.value.decimal_string(digits)
    report = RunReport(
        command="constant",
        parameters={"digits": digits},
        results={
            "constant": rendered,
            "digits": digits,
            "certified_error": _fmt(result.certified_error),
            "budget": {
                "target_digits": budget.target_digits,
                "guard_digits": budget.guard_digits,
                "series_cutoff": budget.series_cutoff,
                "exact_switch": budget.exact_switch,
                "em_order": budget.em_order,
            },
        },
    )
    report.wall_time_ms = int((time.monotonic() - start) * 1000)
    human = [
        f"constant = {rendered}",
        f"certified error <= {_fmt(result.certified_error)}",
        f"budget: K = {budget.series_cutoff}, K0 = {budget.exact_switch}, "
        f"J = {budget.em_order}, guard = {budget.guard_digits}",
    ]
    if json_mode:
        # Match the documented schema exactly for the constant command.
        payload = {
            "constant": rendered,
            "digits": digits,
            "certified_error": _fmt(result.certified_error),
            "budget": report.results["budget"],
        }
        print(json.dumps(payload, indent=2))
    else:
        _emit(report, False, human)
    return report, 0


def cmd_moments(max_n: int, fmt: str) -> tuple[RunReport, int]:
    start = time.monotonic()
    rows = []
    for n in range(max_n + 1):
        value = moments.moment_bernoulli(n)
        _ensure_str_digits(value.numerator, value.denominator)
        rows.append(
            {
                "n": n,
                "num": value.numerator,
                "den": value.denominator,
                "decimal": exact.to_fixed(value, 20).decimal_string(),
            }
        )
    report = RunReport(
        command="moments",
        parameters={"max_n": max_n, "format": fmt},
        results={"rows": len(rows)},
    )
    report.wall_time_ms = int((time.monotonic() - start) * 1000)
    if fmt == "json":
        print(json.dumps(rows, indent=2))
    else:
        print("n,num,den,decimal")
        for row in rows:
            print(f"{row['n']},{row['num']},{row['den']},{row['decimal']}")
    return report, 0


# -- verify suites -----------------------------------------------------------


def _suite_oracle(report: RunReport) -> None:
    for n in range(65):
        equal = moments.moment_bernoulli(n) == moments.moment_recursive(n)
        report.add_check(
            f"moment_oracle_n{n}",
            equal,
            "equal" if equal else "unequal",
            "exact",
        )


def _suite_identity(report: RunReport) -> None:
    for K in range(1, 13):
        try:
            value = constant.double_sum_check(K)
            harmonic_form = 1 + Fraction(2, 3) * (
                constant.weighted_harmonic_sum_exact(K)
                - sum(Fraction(2, 3) ** k for k in range(1, K + 1))
            )
            equal = value == harmonic_form
        except AssertionError:
            equal = False
        report.add_check(
            f"double_sum_K{K}",
            equal,
            "equal" if equal else "unequal",
            "exact",
        )


def _suite_decay(report: RunReport) -> None:
    result = constant.moment_series_constant(constant.default_budget(30))
    Ns = [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
    fit = moments.decay_fit(Ns, result.value)
    in_band = -0.75 <= fit.slope <= -0.45
    report.add_check(
        "decay_slope_band", in_band, f"{fit.slope:.4f}", "[-0.75, -0.45]"
    )
    positive = all(r > 0 for r in fit.remainders)
    report.add_check(
        "remainders_positive",
        positive,
        "all positive" if positive else "sign violation",
        "> 0",
    )
    decreasing = all(b < a for a, b in zip(fit.remainders, fit.remainders[1:]))
    report.add_check(
        "remainders_decreasing",
        decreasing,
        "strictly decreasing" if decreasing else "non-monotone",
        "decreasing at each doubling",
    )


def _suite_mellin(report: RunReport) -> None:
    spec = contour.QuadratureSpec()
    for t, expected, tol in (
        (0.5, 0.0, 1.0e-3),
        (1.0, 0.0, 1.0e-2),
        (1.5, 0.5, 1.0e-3),
        (2.0, 1.0, 1.0e-3),
        (4.0, 3.0, 1.0e-3),
    ):
        got = contour.perron_kernel(t, spec)
        err = abs(got - expected)
        report.add_check(f"perron_t_{t}", err <= tol, _fmt(err), _fmt(tol))
    for n in (1, 2, 5):
        got = contour.moment_contour(n, spec)
        err = abs(got - float(moments.moment_bernoulli(n)))
        report.add_check(f"moment_contour_n{n}", err <= 1.0e-3, _fmt(err), _fmt(1.0e-3))
    reference = constant.moment_series_constant(constant.default_budget(30))
    got = contour.constant_contour(spec)
    err = abs(got - reference.value.to_float())
    report.add_check("constant_contour", err <= 5.0e-3, _fmt(err), _fmt(5.0e-3))


def _suite_cantor(report: RunReport) -> None:
    for n in (1, 2, 5):
        got = cantor.integral_quadrature(n, 10**6)
        err = abs(got - float(moments.moment_bernoulli(n)))
        report.add_check(
            f"cantor_integral_n{n}", err <= 5.0e-3, _fmt(err), _fmt(5.0e-3)
        )
    monotone_ok, symmetry_max, self_similar_max = cantor.self_similarity_residuals(
        10**4
    )
    report.add_check(
        "cantor_monotone",
        monotone_ok,
        "nondecreasing" if monotone_ok else "violation",
        "nondecreasing on grid",
    )
    bound = 2.0 * 2.0**-64
    report.add_check(
        "cantor_symmetry", symmetry_max <= bound, _fmt(symmetry_max), _fmt(bound)
    )
    report.add_check(
        "cantor_self_similarity",
        self_similar_max <= bound,
        _fmt(self_similar_max),
        _fmt(bound),
    )


def cmd_verify(suite: str, json_mode: bool) -> tuple[RunReport, int]:
    start = time.monotonic()
    report = RunReport(command="verify", parameters={"suite": suite})
    runners = {
        "oracle": _suite_oracle,
        "identity": _suite_identity,
        "decay": _suite_decay,
        "mellin": _suite_mellin,
        "cantor": _suite_cantor,
    }
    selected = list(runners) if suite == "all" else [suite]
    for name in selected:
        runners[name](report)
    report.wall_time_ms = int((time.monotonic() - start) * 1000)
    passed = sum(1 for c in report.checks if c["status"] == "pass")
    human = [f"suite '{suite}': {passed}/{len(report.checks)} checks passed"]
    _emit(report, json_mode, human)
    return report, 0 if report.all_pass else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantor-moments",
        description="Exact Cantor-distribution moments, their certified "
        "series constant, and numerical verification suites.",
    )
    parser.add_argument(
        "--cache-path",
        default=None,
        help="JSON cache file for Bernoulli/moment tables "
        "(overrides CANTOR_CACHE; caching off when neither is set)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_const = sub.add_parser("constant", help="evaluate the series constant")
    p_const.add_argument("--digits", type=int, required=True)
    p_const.add_argument("--json", action="store_true")

    p_mom = sub.add_parser("moments", help="tabulate exact moments")
    p_mom.add_argument("--max-n", type=int, required=True)
    p_mom.add_argument("--format", choices=("json", "csv"), default="csv")

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("--suite", choices=_SUITES, required=True)
    p_ver.add_argument("--json", action="store_true")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    cache_path = args.cache_path or os.environ.get("CANTOR_CACHE")
    if cache_path:
        _load_cache(cache_path)

    try:
        if args.subcommand == "constant":
            if not (1 <= args.digits <= _MAX_DIGITS):
                print(
                    f"error: --digits must be in [1, {_MAX_DIGITS}]",
                    file=sys.stderr,
                )
                return 2
            _, code = cmd_constant(args.digits, args.json)
        elif args.subcommand == "moments":
            if not (0 <= args.max_n <= _MAX_MOMENT_INDEX):
                print(
                    f"error: --max-n must be in [0, {_MAX_MOMENT_INDEX}]",
                    file=sys.stderr,
                )
                return 2
            _, code = cmd_moments(args.max_n, args.format)
        else:
            _, code = cmd_verify(args.suite, args.json)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    if cache_path:
        _save_cache(cache_path)
    return code


if __name__ == "__main__":
    sys.exit(main())

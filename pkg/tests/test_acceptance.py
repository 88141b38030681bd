"""Acceptance criteria, one test per criterion.

Each test measures what the criterion states, records a single
"PASS/FAIL — <criterion>: measured … vs tolerance …" line (printed in the
terminal summary), and asserts.  Tolerances and runtime bounds are the
ones stated in the package contract; see README.md.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from cantor_moments import (
    QuadratureSpec,
    CantorEvalSpec,
    constant_contour,
    decay_fit,
    default_budget,
    euler_gamma,
    harmonic_exact,
    integral_quadrature,
    ln2,
    ln2_alt,
    moment_bernoulli,
    moment_contour,
    moment_recursive,
    moment_series_constant,
    perron_kernel,
)
from cantor_moments.constant import double_sum_check
from cantor_moments.moments import clear_memos

# The reference constant as printed (29 fractional digits, last rounded).
PRINTED_CONSTANT = Fraction("3.36465072810092516083893496289")


@pytest.mark.criterion("constant reproduction (CLI, 30 digits, < 10 s)")
def test_constant_cli_30_digits(acceptance):
    t0 = time.perf_counter()
    proc = subprocess.run(
        [
            sys.executable,
            "-c",
            "import sys; from cantor_moments.cli import main; "
            "sys.exit(main(['constant', '--digits', '30', '--json']))",
        ],
        capture_output=True,
        text=True,
        timeout=60,
    )
    elapsed = time.perf_counter() - t0
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    value = Fraction(payload["constant"])
    gap = abs(value - PRINTED_CONSTANT)
    ok = gap <= Fraction(1, 10**28) and elapsed < 10.0
    acceptance(
        ok,
        f"measured |value - printed| = {float(gap):.3e} vs tolerance 1e-28; "
        f"runtime {elapsed:.2f} s vs bound 10 s",
    )


@pytest.mark.criterion("oracle equivalence n <= 64 (exact, < 5 s)")
def test_oracle_equivalence(acceptance):
    clear_memos()
    t0 = time.perf_counter()
    mismatches = [
        n for n in range(65) if moment_bernoulli(n) != moment_recursive(n)
    ]
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 5.0
    acceptance(
        ok,
        f"measured {65 - len(mismatches)}/65 exact rational equalities "
        f"vs tolerance zero (exact); runtime {elapsed:.2f} s vs bound 5 s",
    )


@pytest.mark.criterion("truncation identity double_sum_check K = 1..12 (exact)")
def test_truncation_identity(acceptance):
    failures = []
    for K in range(1, 13):
        value = double_sum_check(K)  # raises if the two forms disagree
        harmonic_form = 1 + Fraction(2, 3) * sum(
            Fraction(2, 3) ** k * (harmonic_exact(2**k) - 1)
            for k in range(1, K + 1)
        )
        if value != harmonic_form:
            failures.append(K)
    ok = not failures
    acceptance(
        ok,
        f"measured {12 - len(failures)}/12 exact equalities vs tolerance "
        "zero (exact rational identity)",
    )


@pytest.mark.criterion("decay exponent in [-0.75, -0.45], remainders shrinking")
def test_decay_exponent(acceptance, constant_d30):
    fit = decay_fit(
        [16, 32, 64, 128, 256, 512, 1024, 2048, 4096], constant_d30.value
    )
    in_band = -0.75 <= fit.slope <= -0.45
    positive = all(r > 0 for r in fit.remainders)
    decreasing = all(
        a > b for a, b in zip(fit.remainders, fit.remainders[1:])
    )
    ok = in_band and positive and decreasing
    acceptance(
        ok,
        f"measured slope {fit.slope:.4f} vs tolerance band [-0.75, -0.45]; "
        f"remainders positive: {positive}, decreasing at each doubling: "
        f"{decreasing}",
    )


@pytest.mark.criterion("Perron kernel step values at T = 1e4")
def test_perron_kernel_steps(acceptance):
    spec = QuadratureSpec()  # T = 1e4, abs_tol = 1e-4
    cases = [
        (0.5, 0.0, 1e-3),
        (1.0, 0.0, 1e-2),
        (1.5, 0.5, 1e-3),
        (2.0, 1.0, 1e-3),
        (4.0, 3.0, 1e-3),
    ]
    details = []
    ok = True
    for t, want, tol in cases:
        got = perron_kernel(t, spec)
        err = abs(got - want)
        ok = ok and err <= tol
        details.append(f"t={t}: {err:.2e} (tol {tol:g})")
    acceptance(ok, "measured errors " + ", ".join(details))


@pytest.mark.criterion("contour representation of moments and constant")
def test_contour_representation(acceptance, constant_d30):
    spec = QuadratureSpec()
    details = []
    ok = True
    for n in (1, 2, 5):
        got = moment_contour(n, spec)
        err = abs(got - float(moment_bernoulli(n)))
        ok = ok and err <= 1e-3
        details.append(f"n={n}: {err:.2e} (tol 1e-03)")
    got = constant_contour(spec)
    err = abs(got - constant_d30.value.to_float())
    ok = ok and err <= 5e-3
    details.append(f"constant: {err:.2e} (tol 5e-03)")
    acceptance(ok, "measured errors " + ", ".join(details))


@pytest.mark.criterion("Cantor-integral consistency at 1e6 points")
def test_cantor_integral_consistency(acceptance):
    spec = CantorEvalSpec()
    details = []
    ok = True
    for n in (1, 2, 5):
        got = integral_quadrature(n, 10**6, spec)
        err = abs(got - float(moment_bernoulli(n)))
        ok = ok and err <= 5e-3
        details.append(f"n={n}: {err:.2e}")
    acceptance(ok, "measured errors " + ", ".join(details) + " vs tolerance 5e-03")


@pytest.mark.criterion("high-precision self-consistency (dual oracles)")
def test_high_precision_self_consistency(acceptance):
    bound = Fraction(1, 10**30)
    ln2_gap = abs(ln2(40).to_fraction() - ln2_alt(40).to_fraction())
    gamma_gap = abs(
        euler_gamma(40, q=18).to_fraction()
        - euler_gamma(40, q=20).to_fraction()
    )
    r20 = moment_series_constant(default_budget(20))
    r40 = moment_series_constant(default_budget(40))
    const_gap = abs(r40.value.to_fraction() - r20.value.to_fraction())
    certified = Fraction(r20.certified_error)
    ok = ln2_gap <= bound and gamma_gap <= bound and const_gap <= certified
    acceptance(
        ok,
        f"measured ln2 dual gap {float(ln2_gap):.1e}, gamma dual gap "
        f"{float(gamma_gap):.1e} vs tolerance 1e-30; D=40 vs D=20 gap "
        f"{float(const_gap):.1e} vs certified error {float(certified):.1e}",
    )

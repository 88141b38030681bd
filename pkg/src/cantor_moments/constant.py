"""Certified high-precision evaluation of the moment-series constant.

The moment series sums to

    L = -1/3 + (2/3) * sum_{k>=1} (2/3)**k * H(2**k)

where H(m) is the m-th harmonic number.  Direct exact summation is
impossible at useful precision (H(2**k) for k ~ 200 has ~10**60 terms),
so harmonic numbers switch to an Euler-Maclaurin expansion beyond a
cutoff, which in turn needs ln 2 and the Euler-Mascheroni constant to
working precision.  Everything here is evaluated in decimal fixed point
(:class:`~cantor_moments.exact.BigFixed`) with *computed* error bounds:
series tails, Euler-Maclaurin remainders, and a per-operation rounding
allowance are all accumulated into a certified error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import BigFixed, bernoulli, divround, harmonic_exact, to_fixed

# Largest exponent the exact-summation path will ever take (the exact
# harmonic cap is 2**22).
_EXACT_SWITCH_CAP = 22

# Below this exponent the direct path sums true exact rationals; above
# it (and up to the exact_switch) it sums certified fixed-point terms.
_RATIONAL_SWITCH = 12


# ---------------------------------------------------------------------------
# Precision budget
# ---------------------------------------------------------------------------


def series_tail_bound(K: int) -> Fraction:
    """Exact upper bound for the weighted harmonic series tail after K.

    Bound: sum_{k>K} (2/3)**k * H(2**k) <= (2/3)**(K+1) * (3(K+2) + 6),
    using H(2**k) <= 1 + k and the closed form of sum_{k>K} (k+1) x**k
    at x = 2/3.
    """
    return Fraction(2**(K + 1) * (3 * (K + 2) + 6), 3**(K + 1))


def _em_harmonic_remainder(k_exp: int, order: int) -> Fraction:
    """Euler-Maclaurin remainder bound for H(2**k_exp) at a given order.

    The remainder after the order-J correction is bounded by the first
    omitted term: |B_{2J+2}| / ((2J+2) * 2**((2J+2) * k_exp)).
    """
    j2 = 2 * order + 2
    return abs(bernoulli(j2)) / (j2 * Fraction(2) ** (j2 * k_exp))


@dataclass(frozen=True)
class PrecisionBudget:
    """Parameters controlling the certified evaluation.

    Fields: requested digits D, guard digits G (working precision
    P = D + G), series cutoff K, exact/asymptotic switch K0, and
    Euler-Maclaurin order J for the asymptotic harmonic path.
    """

    target_digits: int
    guard_digits: int
    series_cutoff: int
    exact_switch: int
    em_order: int

    @property
    def working_precision(self) -> int:
        return self.target_digits + self.guard_digits

    def validate(self) -> None:
        """Check every budget invariant; raise with the failing bound."""
        if self.target_digits < 1 or self.guard_digits < 1:
            raise ValueError("budget insufficient for target: digits must be positive")
        if not (1 <= self.exact_switch <= _EXACT_SWITCH_CAP):
            raise ValueError(
                f"budget insufficient for target: exact_switch must be in "
                f"[1, {_EXACT_SWITCH_CAP}]"
            )
        if self.em_order < 1:
            raise ValueError("budget insufficient for target: em_order must be >= 1")
        tail = series_tail_bound(self.series_cutoff)
        tail_cap = Fraction(1, 10 ** (self.target_digits + 2))
        if tail >= tail_cap:
            raise ValueError(
                f"budget insufficient for target: series tail bound {float(tail):.3e} "
                f"not below 10^-{self.target_digits + 2}"
            )
        rem = _em_harmonic_remainder(self.exact_switch + 1, self.em_order)
        rem_cap = Fraction(1, 10 ** (self.working_precision + 2))
        if rem >= rem_cap:
            raise ValueError(
                f"budget insufficient for target: Euler-Maclaurin remainder "
                f"{float(rem):.3e} at k = {self.exact_switch + 1} not below "
                f"10^-{self.working_precision + 2}"
            )


def default_budget(target_digits: int) -> PrecisionBudget:
    """Default budget for D requested digits (1 <= D <= 60).

    G = 12 guard digits, K0 = 20, J = smallest order >= 3 meeting the
    remainder invariant, K = smallest cutoff whose exact tail bound is
    below 10**-(D+2) (checked by pure integer comparison).
    """
    if not (1 <= target_digits <= 60):
        raise ValueError("target digits out of supported range [1, 60]")
    guard = 12
    exact_switch = 20
    precision = target_digits + guard

    em_order = 3
    while (
        _em_harmonic_remainder(exact_switch + 1, em_order)
        >= Fraction(1, 10 ** (precision + 2))
    ):
        em_order += 1

    # Smallest K with 2^(K+1) * (3K+12) * 10^(D+2) < 3^(K+1).
    cap = 10 ** (target_digits + 2)
    K = 1
    while 2 ** (K + 1) * (3 * K + 12) * cap >= 3 ** (K + 1):
        K += 1

    budget = PrecisionBudget(target_digits, guard, K, exact_switch, em_order)
    budget.validate()
    return budget


@dataclass(frozen=True)
class ConstantResult:
    """A certified value: fixed-point number plus total error bound."""

    value: BigFixed
    certified_error: float
    budget: PrecisionBudget

    def __post_init__(self) -> None:
        if self.certified_error < 0:
            raise ValueError("certified error must be nonnegative")
        if self.certified_error > 10.0 ** (-self.budget.target_digits):
            raise ValueError(
                f"budget insufficient for target: certified error "
                f"{self.certified_error:.3e} exceeds 10^-{self.budget.target_digits}"
            )


# ---------------------------------------------------------------------------
# ln 2
# ---------------------------------------------------------------------------


def ln2(precision: int) -> BigFixed:
    """ln 2 with error <= 10**-precision.

    Series: ln 2 = 2 * atanh(1/3) = 2 * sum_{j>=0} (1/3)**(2j+1) / (2j+1).
    Terms shrink by at least 9x, so once a rounded term reaches zero the
    remaining true tail is below (9/8) * (1/2) ulp.  Total error at the
    padded precision: <= (terms * 1/2 + 2) ulp, well under the final ulp
    after narrowing.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    work = precision + 6
    scale = 2 * 10**work
    acc = 0
    j = 0
    while True:
        term = divround(scale, (2 * j + 1) * 3 ** (2 * j + 1))
        if term == 0:
            break
        acc += term
        j += 1
    return BigFixed(acc, work).rescale(precision)


def ln2_alt(precision: int) -> BigFixed:
    """Independent ln 2 oracle: sum_{k>=1} 1/(k * 2**k).

    Same certification pattern as :func:`ln2`; the two series share no
    structure beyond big-integer division, so 30-digit agreement is a
    strong implementation check.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    work = precision + 6
    scale = 10**work
    acc = 0
    k = 1
    while True:
        term = divround(scale, k * 2**k)
        if term == 0:
            break
        acc += term
        k += 1
    return BigFixed(acc, work).rescale(precision)


# ---------------------------------------------------------------------------
# Harmonic numbers in fixed point
# ---------------------------------------------------------------------------


def _harmonic_direct_fixed(m: int, precision: int) -> BigFixed:
    """H_m by direct summation of fixed-point terms.

    Each term is one exact floor division 10**P' // i (error < 1 ulp,
    one-sided), so the result's total error is < m ulp at the padded
    precision P' = precision + digits(m) + 2 — i.e. < 10**-(precision+2)
    after narrowing.  This is what makes the direct path affordable at
    m = 2**20 (~0.1 s) where exact rationals take ~27 s.
    """
    pad = len(str(m)) + 2
    scale = 10 ** (precision + pad)
    total = sum(scale // i for i in range(1, m + 1))
    return BigFixed(total, precision + pad).rescale(precision)


def harmonic_fixed(
    k: int,
    precision: int,
    exact_switch: int = 20,
    em_order: int | None = None,
) -> BigFixed:
    """H(2**k) with error <= 10**-precision.

    Two independent regimes:

    * direct path (k <= exact_switch): exact rational summation for
      k <= 12, certified fixed-point summation above (see
      :func:`_harmonic_direct_fixed`);
    * asymptotic path (k > exact_switch): Euler-Maclaurin expansion
      H(2**k) = k ln 2 + gamma + 2**-(k+1)
                - sum_{j=1..J} B_{2j} / (2j * 2**(2jk)),
      remainder bounded by the first omitted term and required to be
      below 10**-(precision+2).

    The two regimes agree to 10**-30 at the switch (tested for
    k in {18, 19, 20}).
    """
    if k < 1:
        raise ValueError("harmonic exponent must be positive")
    if not (1 <= exact_switch <= _EXACT_SWITCH_CAP):
        raise ValueError("exact_switch out of range")
    if k <= exact_switch:
        if k <= _RATIONAL_SWITCH:
            return to_fixed(harmonic_exact(2**k), precision)
        return _harmonic_direct_fixed(2**k, precision)

    work = precision + 6
    order = em_order
    if order is None:
        order = 1
        while _em_harmonic_remainder(k, order) >= Fraction(1, 10 ** (precision + 2)):
            order += 1
    elif _em_harmonic_remainder(k, order) >= Fraction(1, 10 ** (precision + 2)):
        raise ValueError(
            "budget insufficient for target: Euler-Maclaurin remainder too large"
        )

    acc = ln2(work + 2).rescale(work).mul_int(k)
    acc = acc + euler_gamma(work)
    acc = acc + BigFixed.from_fraction(Fraction(1, 2 ** (k + 1)), work)
    for j in range(1, order + 1):
        b2j = bernoulli(2 * j)
        acc = acc - BigFixed.from_fraction(b2j / (2 * j * Fraction(2) ** (2 * j * k)), work)
    return acc.rescale(precision)


# ---------------------------------------------------------------------------
# Euler-Mascheroni constant
# ---------------------------------------------------------------------------

_GAMMA_CACHE: dict[tuple[int, int, int], BigFixed] = {}


def euler_gamma(
    precision: int,
    q: int | None = None,
    em_order: int | None = None,
) -> BigFixed:
    """Euler's gamma with error <= 10**-precision.

    Euler-Maclaurin at m = 2**q:

        gamma = H_m - ln m - 1/(2m) + sum_{j=1..J} B_{2j} / (2j * m**(2j))

    with remainder bounded by |B_{2J+2}| / ((2J+2) * m**(2J+2)), required
    to be below 10**-(precision+2).  H_m comes from the certified direct
    summation.  Supported precision comfortably exceeds 60 digits
    (q <= 22); beyond that the harmonic cap would be breached.

    Raises:
        ValueError: "precision beyond supported range" when no
            (q <= 22, J <= 60) pair meets the remainder bound.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")

    def order_for(qq: int) -> int | None:
        target = Fraction(1, 10 ** (precision + 2))
        m = 2**qq
        for j in range(1, 61):
            j2 = 2 * j + 2
            if abs(bernoulli(j2)) / (j2 * Fraction(m) ** j2) < target:
                return j
        return None

    if q is None:
        q = 18 if precision <= 90 else 20
    if not (1 <= q <= _EXACT_SWITCH_CAP):
        raise ValueError("precision beyond supported range")
    order = em_order if em_order is not None else order_for(q)
    if order is None:
        raise ValueError("precision beyond supported range")
    target = Fraction(1, 10 ** (precision + 2))
    m = 2**q
    j2 = 2 * order + 2
    if abs(bernoulli(j2)) / (j2 * Fraction(m) ** j2) >= target:
        raise ValueError("precision beyond supported range")

    key = (precision, q, order)
    cached = _GAMMA_CACHE.get(key)
    if cached is not None:
        return cached

    work = precision + 6
    acc = _harmonic_direct_fixed(m, work)
    acc = acc - ln2(work + 2).rescale(work).mul_int(q)
    acc = acc - BigFixed.from_fraction(Fraction(1, 2 * m), work)
    for j in range(1, order + 1):
        b2j = bernoulli(2 * j)
        acc = acc + BigFixed.from_fraction(b2j / (2 * j * Fraction(m) ** (2 * j)), work)
    result = acc.rescale(precision)
    _GAMMA_CACHE[key] = result
    return result


# ---------------------------------------------------------------------------
# The weighted harmonic series and the constant
# ---------------------------------------------------------------------------


def weighted_harmonic_sum_exact(K: int) -> Fraction:
    """Exact rational truncation sum_{k=1..K} (2/3)**k * H(2**k).

    Reference implementation for small K (tests and the double-sum
    identity); K is capped where exact harmonic numbers stay cheap.
    """
    if not (1 <= K <= 14):
        raise ValueError("exact weighted sum supports 1 <= K <= 14")
    return sum(
        Fraction(2, 3) ** k * harmonic_exact(2**k) for k in range(1, K + 1)
    )


def weighted_harmonic_sum(budget: PrecisionBudget) -> ConstantResult:
    """S = sum_{k=1..K} (2/3)**k * H(2**k) with certified error.

    The certified error totals (a) the exact series tail bound, (b) each
    term's harmonic error <= (2/3)**k * 10**-P, (c) Euler-Maclaurin
    remainders already inside (b)'s budget, and (d) one ulp per
    fixed-point operation (3 per term).  Terms are evaluated in a fixed
    order for bit-reproducibility.
    """
    budget.validate()
    P = budget.working_precision
    ulp = Fraction(1, 10**P)

    total = BigFixed.from_int(0, P)
    err = series_tail_bound(budget.series_cutoff)
    for k in range(1, budget.series_cutoff + 1):
        weight = BigFixed.from_fraction(Fraction(2**k, 3**k), P)
        h = harmonic_fixed(k, P, budget.exact_switch, budget.em_order)
        total = total + weight * h
        # weight rounding (<= 1/2 ulp) times H < k+1, harmonic error
        # times weight < 1, product + add rounding: 3 ulps covers it.
        err += Fraction(2, 3) ** k * ulp + Fraction(k + 1, 2) * ulp + 3 * ulp

    certified = float(err) * (1.0 + 1e-9)
    return ConstantResult(total, certified, budget)


def moment_series_constant(budget: PrecisionBudget | None = None) -> ConstantResult:
    """The limit of the moment series: -1/3 + (2/3) * S, certified.

    Default budget targets 30 digits.  The certified error propagates
    S's bound scaled by 2/3 plus the rounding of the two final
    operations, and must come in below 10**-D or the result is refused.
    """
    if budget is None:
        budget = default_budget(30)
    series = weighted_harmonic_sum(budget)
    P = budget.working_precision
    value = BigFixed.from_fraction(Fraction(-1, 3), P) + series.value.mul_int(2).div_int(3)
    err = series.certified_error * (2.0 / 3.0) + 2.0 * 10.0 ** (-P)
    return ConstantResult(value, err, budget)


# ---------------------------------------------------------------------------
# Double-sum identity
# ---------------------------------------------------------------------------


def _pairwise_fraction_sum(terms: list[Fraction], lo: int, hi: int) -> Fraction:
    """Balanced pairwise sum (keeps denominators near the range lcm)."""
    if lo == hi:
        return terms[lo]
    mid = (lo + hi) // 2
    return _pairwise_fraction_sum(terms, lo, mid) + _pairwise_fraction_sum(
        terms, mid + 1, hi
    )


def double_sum_check(K: int) -> Fraction:
    """Exact truncation of the double-sum form, checked against the
    harmonic-number form.

    Evaluates 1 + (2/3) * sum_{k=1..K} 3**-k * sum_{m=1..2**k} (2**k/m - 1)
    term by term in exact rationals (the inner sum is *not* collapsed
    into harmonic numbers — the point is structural independence), then
    verifies exact equality with

        1 + (2/3) * sum_{k=1..K} ((2/3)**k * H(2**k) - (2/3)**k)

    and returns the common value.

    Raises:
        ValueError: K out of [1, 14] ("inner sum too large for exact mode").
    """
    if K < 1 or K > 14:
        raise ValueError("inner sum too large for exact mode")
    outer = Fraction(0)
    for k in range(1, K + 1):
        two_k = 2**k
        inner_terms = [Fraction(two_k - m, m) for m in range(1, two_k + 1)]
        inner = _pairwise_fraction_sum(inner_terms, 0, len(inner_terms) - 1)
        outer += Fraction(1, 3**k) * inner
    double_form = 1 + Fraction(2, 3) * outer

    harmonic_form = 1 + Fraction(2, 3) * sum(
        Fraction(2, 3) ** k * (harmonic_exact(2**k) - 1) for k in range(1, K + 1)
    )
    if double_form != harmonic_form:
        raise AssertionError(
            "double-sum and harmonic-form truncations disagree — "
            "exact identity violated"
        )
    return double_form

"""Exact integer/rational arithmetic primitives.

This module supplies the exact building blocks used everywhere else:
binomial coefficients, Bernoulli numbers (``B1 = -1/2`` convention),
exact harmonic numbers, and :class:`BigFixed` — a decimal fixed-point
carrier for high-precision real values.

All values are exact rationals (``fractions.Fraction``) or scaled big
integers; no binary floating point is involved, so decimal digit claims
are direct.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

# Exact rational carrier: canonical form (gcd 1, positive denominator)
# is guaranteed by fractions.Fraction itself.
Rational = Fraction

# Hard cap for exact harmonic numbers; beyond this the asymptotic path in
# cantor_moments.constant must be used (the exact denominator of H_{2^22}
# has ~1.8 million digits).
HARMONIC_CAP = 2**22

# ---------------------------------------------------------------------------
# Integer helpers
# ---------------------------------------------------------------------------


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k).

    Raises:
        ValueError: if the arguments are negative or k > n.
    """
    if n < 0 or k < 0 or k > n:
        raise ValueError("invalid binomial arguments")
    return comb(n, k)


def divround(num: int, den: int) -> int:
    """Nearest integer to num/den, rounding half away from zero.

    ``den`` must be positive.  This is the single rounding primitive for
    all fixed-point arithmetic, so every operation's rounding error is
    at most half a unit in the last place.
    """
    if den <= 0:
        raise ValueError("denominator must be positive")
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

# Memo table: _BERNOULLI[j] = B_j.  Grown on demand by bernoulli();
# values are immutable Fractions, so sharing the list is safe as long as
# growth happens in one execution context (see module docstring note).
_BERNOULLI: list[Fraction] = [Fraction(1), Fraction(-1, 2)]


def bernoulli(j: int) -> Fraction:
    """Bernoulli number B_j under the convention B1 = -1/2.

    Computed by the defining recurrence
    ``sum_{k=0}^{m} C(m+1, k) * B_k = 0`` for m >= 1 with B_0 = 1,
    memoized across calls.  The convention is validated downstream: only
    B1 = -1/2 makes the moment formula agree with the independent
    self-similarity recursion.
    """
    if j < 0:
        raise ValueError("invalid bernoulli index")
    while len(_BERNOULLI) <= j:
        m = len(_BERNOULLI)
        if m % 2 == 1:
            # Odd-index Bernoulli numbers vanish for m >= 3.
            _BERNOULLI.append(Fraction(0))
            continue
        acc = Fraction(0)
        for k in range(m):
            bk = _BERNOULLI[k]
            if bk:
                acc += comb(m + 1, k) * bk
        _BERNOULLI.append(-acc / (m + 1))
    return _BERNOULLI[j]


# ---------------------------------------------------------------------------
# Harmonic numbers
# ---------------------------------------------------------------------------


def _harmonic_range(lo: int, hi: int) -> Fraction:
    """Exact sum of 1/k for lo <= k <= hi by balanced divide & conquer.

    Balanced splitting keeps intermediate denominators near the lcm of
    the range instead of the full factorial product, and the final gcd
    per merge is far cheaper than one gcd per term.
    """
    if lo == hi:
        return Fraction(1, lo)
    mid = (lo + hi) // 2
    return _harmonic_range(lo, mid) + _harmonic_range(mid + 1, hi)


def harmonic_exact(m: int) -> Fraction:
    """Exact harmonic number H_m = sum_{k=1..m} 1/k.

    The cap guards against pathological memory use: at the cap the
    reduced denominator already has about 1.8 million digits.  Calls
    near the cap are *slow* (minutes); high-precision consumers use the
    asymptotic path in :mod:`cantor_moments.constant` instead.

    Raises:
        ValueError: if m < 1 or m exceeds the 2**22 cap.
    """
    if m < 1:
        raise ValueError("harmonic index must be positive")
    if m > HARMONIC_CAP:
        raise ValueError("harmonic index above cap")
    return _harmonic_range(1, m)


# ---------------------------------------------------------------------------
# Decimal fixed point
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BigFixed:
    """High-precision real as a scaled big integer.

    The represented value is ``mantissa * 10**(-precision_digits)``.
    The base is decimal, not binary, so rendering to
    ``precision_digits`` decimal digits is exact — digit-count claims
    against printed reference constants need no conversion argument.

    Arithmetic contract: results carry the *minimum* precision of the
    operands; every operation rounds half away from zero and is
    accurate to <= 1/2 unit in the last place (exactly 0 for add,
    subtract, and small-integer multiply).  Callers count operations to
    bound total rounding error.
    """

    mantissa: int
    precision_digits: int

    def __post_init__(self) -> None:
        if self.precision_digits < 1:
            raise ValueError("precision must be >= 1")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_fraction(x: Fraction, precision: int) -> "BigFixed":
        """Round the exact rational x to ``precision`` decimal digits."""
        if precision < 1:
            raise ValueError("precision must be >= 1")
        num = x.numerator * 10**precision
        return BigFixed(divround(num, x.denominator), precision)

    @staticmethod
    def from_int(n: int, precision: int) -> "BigFixed":
        return BigFixed(n * 10**precision, precision)

    # -- precision plumbing -------------------------------------------------

    def rescale(self, precision: int) -> "BigFixed":
        """Re-express at a different precision (rounds when narrowing)."""
        if precision == self.precision_digits:
            return self
        if precision > self.precision_digits:
            shift = 10 ** (precision - self.precision_digits)
            return BigFixed(self.mantissa * shift, precision)
        shift = 10 ** (self.precision_digits - precision)
        return BigFixed(divround(self.mantissa, shift), precision)

    def _common(self, other: "BigFixed") -> tuple[int, int, int]:
        p = min(self.precision_digits, other.precision_digits)
        return self.rescale(p).mantissa, other.rescale(p).mantissa, p

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "BigFixed") -> "BigFixed":
        a, b, p = self._common(other)
        return BigFixed(a + b, p)

    def __sub__(self, other: "BigFixed") -> "BigFixed":
        a, b, p = self._common(other)
        return BigFixed(a - b, p)

    def __neg__(self) -> "BigFixed":
        return BigFixed(-self.mantissa, self.precision_digits)

    def __mul__(self, other: "BigFixed") -> "BigFixed":
        a, b, p = self._common(other)
        return BigFixed(divround(a * b, 10**p), p)

    def mul_int(self, k: int) -> "BigFixed":
        """Exact multiplication by an integer (no rounding)."""
        return BigFixed(self.mantissa * k, self.precision_digits)

    def div_int(self, k: int) -> "BigFixed":
        """Division by a nonzero integer, <= 1/2 ulp rounding."""
        if k == 0:
            raise ZeroDivisionError("division by zero")
        if k < 0:
            return (-self).div_int(-k)
        return BigFixed(divround(self.mantissa, k), self.precision_digits)

    def __truediv__(self, other: "BigFixed") -> "BigFixed":
        a, b, p = self._common(other)
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return BigFixed(divround(a * 10**p, b), p)

    # -- comparisons (exact, via common precision) --------------------------

    def __lt__(self, other: "BigFixed") -> bool:
        a, b, _ = self._common(other)
        return a < b

    def __le__(self, other: "BigFixed") -> bool:
        a, b, _ = self._common(other)
        return a <= b

    # -- conversions ---------------------------------------------------------

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10**self.precision_digits)

    def to_float(self) -> float:
        return self.mantissa / 10**self.precision_digits

    def ulp(self) -> Fraction:
        """One unit in the last place as an exact rational."""
        return Fraction(1, 10**self.precision_digits)

    def decimal_string(self, digits: int | None = None) -> str:
        """Render with ``digits`` fractional digits (default: full precision).

        Narrowing rounds half away from zero, matching every other
        rounding step in this module.
        """
        if digits is None:
            digits = self.precision_digits
        x = self.rescale(digits)
        mant, p = x.mantissa, x.precision_digits
        sign = "-" if mant < 0 else ""
        mant = abs(mant)
        whole, frac = divmod(mant, 10**p)
        return f"{sign}{whole}.{frac:0{p}d}"

    def __str__(self) -> str:
        return self.decimal_string()


def to_fixed(x: Fraction, precision: int) -> BigFixed:
    """Round an exact rational to ``precision`` decimal digits.

    Round-half-away-from-zero; |result - x| <= 10**(-precision) (in fact
    <= half that).
    """
    return BigFixed.from_fraction(x, precision)


# ---------------------------------------------------------------------------
# Cache plumbing (used by the CLI's optional disk cache)
# ---------------------------------------------------------------------------


def bernoulli_table_snapshot() -> list[Fraction]:
    """Immutable snapshot of the Bernoulli memo table."""
    return list(_BERNOULLI)


def bernoulli_table_restore(values: list[Fraction]) -> None:
    """Seed the Bernoulli memo table (longer of current/provided wins).

    Restored values are trusted only after a consistency spot-check:
    the first two entries must be the recurrence base values.
    """
    if len(values) >= 2 and (values[0] != 1 or values[1] != Fraction(-1, 2)):
        raise ValueError("inconsistent bernoulli cache")
    if len(values) > len(_BERNOULLI):
        _BERNOULLI[:] = values

"""Exact combinatorial arithmetic, log-space counterparts, and canonical subset orders.

Ground-set elements are 1-based ({1..n}) in every public signature; bit
positions are 0-based internally and the conversion never leaves this module
or :mod:`kneserlab.family`. The canonical order on k-subsets is colex
(colexicographic) everywhere in the package: for equal-size subsets this is
simply numeric order of their bitmasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator


def binom_exact(n: int, k: int) -> int:
    """C(n, k) as an exact arbitrary-precision integer; out-of-range k gives 0."""
    if n < 0:
        raise ValueError(f"binom_exact: n must be non-negative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def ceil_div(a: int, b: int) -> int:
    """Exact ceiling of a/b for integers with b > 0."""
    return -(-a // b)


@dataclass(frozen=True)
class LogReal:
    """A non-negative quantity stored as its natural logarithm.

    ln 0 is not representable, so exact zero carries a dedicated flag; bound
    evaluators use it to short-circuit impossible events instead of
    propagating -inf arithmetic.
    """

    ln_value: float
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "LogReal":
        return cls(float("-inf"), True)

    @classmethod
    def from_ln(cls, ln_value: float) -> "LogReal":
        return cls(float(ln_value), False)

    @classmethod
    def from_value(cls, value: float) -> "LogReal":
        if value < 0:
            raise ValueError("LogReal holds non-negative quantities")
        if value == 0:
            return cls.zero()
        return cls(math.log(value), False)

    def value(self) -> float:
        """exp(ln_value); 0.0 for exact zero, inf past float range."""
        if self.is_zero:
            return 0.0
        try:
            return math.exp(self.ln_value)
        except OverflowError:
            return float("inf")


def _ln_factorial(m: int) -> float:
    """ln(m!) for non-negative integer m of any size."""
    try:
        return math.lgamma(m + 1)
    except OverflowError:
        # m does not fit a float; Stirling with the 1/(12m) correction is
        # accurate far beyond float resolution at this magnitude.
        lnm = math.log(m)
        return m * lnm - m + 0.5 * (lnm + math.log(2 * math.pi)) + 1.0 / (12 * m)


def log_binom(n: int, k: int) -> LogReal:
    """ln C(n, k) to ~1e-12 relative accuracy; exact zero outside 0 <= k <= n.

    n may be an arbitrarily large integer (counts such as C(q, k) feed back in
    as the first argument of further binomials).
    """
    if n < 0:
        raise ValueError(f"log_binom: n must be non-negative, got {n}")
    if k < 0 or k > n:
        return LogReal.zero()
    kk = min(k, n - k)
    if kk == 0:
        return LogReal.from_ln(0.0)
    if kk <= 2000:
        # Direct sum of logs: math.log accepts big ints at full precision.
        s = 0.0
        for j in range(1, kk + 1):
            s += math.log(n - kk + j) - math.log(j)
        return LogReal.from_ln(s)
    try:
        return LogReal.from_ln(
            math.lgamma(n + 1) - math.lgamma(kk + 1) - math.lgamma(n - kk + 1)
        )
    except OverflowError:
        # n beyond float range with kk > 2000: n/kk is astronomically large,
        # so the falling-factorial correction is below float resolution.
        return LogReal.from_ln(kk * math.log(n) - _ln_factorial(kk))


def colex_rank(members: Iterable[int]) -> int:
    """Colex rank of a k-subset given by its 1-based elements.

    rank(S) = sum_j C(i_j - 1, j) over the sorted elements i_1 < ... < i_k,
    the inverse of :func:`colex_unrank`.
    """
    elems = sorted(members)
    for a, b in zip(elems, elems[1:]):
        if a == b:
            raise ValueError(f"colex_rank: duplicate element {a}")
    if elems and elems[0] < 1:
        raise ValueError(f"colex_rank: elements must be >= 1, got {elems[0]}")
    return sum(math.comb(e - 1, j + 1) for j, e in enumerate(elems))


def colex_unrank(rank: int, k: int, n: int) -> tuple[int, ...]:
    """The k-subset of [1..n] with the given colex rank (combinadic decoding)."""
    total = binom_exact(n, k)
    if not 0 <= rank < total:
        raise ValueError(f"colex_unrank: rank {rank} out of range [0, {total})")
    out = []
    r = rank
    for kk in range(k, 0, -1):
        # largest m with C(m, kk) <= r
        m = kk - 1
        while math.comb(m + 1, kk) <= r:
            m += 1
        out.append(m + 1)
        r -= math.comb(m, kk)
    return tuple(reversed(out))


def _gap_subsets(j: int, hi: int, lo: int, s: int) -> Iterator[tuple[int, ...]]:
    """j-subsets of [lo..hi] with consecutive gaps >= s, streamed in colex order."""
    if j == 0:
        yield ()
        return
    for last in range(lo + (j - 1) * s, hi + 1):
        for head in _gap_subsets(j - 1, last - s, lo, s):
            yield head + (last,)


def enumerate_stable(n: int, k: int, s: int) -> Iterator[tuple[int, ...]]:
    """Stream the s-stable k-subsets of [1..n] in colex order.

    A subset {i_1 < ... < i_k} qualifies when i_{j+1} - i_j >= s for every
    consecutive pair and additionally i_1 + n - i_k >= s (the cyclic wrap
    gap). s = 1 imposes no constraint; s = 2 gives the stable sets of the
    n-cycle underlying Schrijver graphs.
    """
    if n < 1 or k < 1 or s < 1:
        raise ValueError("enumerate_stable: n, k, s must all be >= 1")
    for last in range((k - 1) * s + 1, n + 1):
        lo = max(1, last + s - n)  # wrap condition constrains the minimum element
        if k == 1:
            if last >= lo:
                yield (last,)
        else:
            for head in _gap_subsets(k - 1, last - s, lo, s):
                yield head + (last,)


def stable_count_bound(n: int, k: int, r: int) -> int:
    """C(n-(r-1)(k-1), k): upper bound on the number of r-stable k-subsets."""
    if n < 1 or k < 1 or r < 1:
        raise ValueError("stable_count_bound: n, k, r must all be >= 1")
    m = n - (r - 1) * (k - 1)
    if m < 0:
        return 0
    return binom_exact(m, k)


def linear_stable_count(n: int, k: int, r: int) -> int:
    """Count of k-subsets of [1..n] with consecutive gaps >= r (no wrap condition).

    Satisfies f(n, k) = f(n-1, k) + f(n-r, k-1) with f(r(k-1)+1, k) = 1 and
    coincides with the closed form C(n-(r-1)(k-1), k); below the initial
    condition the count is 0.
    """
    if k < 1 or r < 1:
        raise ValueError("linear_stable_count: k, r must be >= 1")
    if n < r * (k - 1) + 1:
        return 0
    return binom_exact(n - (r - 1) * (k - 1), k)

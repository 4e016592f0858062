"""Closed-form evaluators: exact chromatic formulas, derived parameter
schedules, and probability bounds / threshold predicates, all in log space.

Every evaluator is a deterministic pure function. Probability bounds are
reported even when vacuous (>= 1); a flag marks them instead of clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .combinatorics import LogReal, binom_exact, ceil_div, log_binom


def chromatic_formula(n: int, k: int, r: int) -> int:
    """ceil((n - r(k-1)) / (r-1)), the chromatic number of KG^r_{n,k} for n >= rk.

    For r = 2 this is n - 2k + 2. Below n = rk the hypergraph is edgeless and
    the value is 1.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if k < 1 or n < 1:
        raise ValueError("n, k must be >= 1")
    if n < r * k:
        return 1
    return ceil_div(n - r * (k - 1), r - 1)


@dataclass(frozen=True)
class Schedule:
    """Derived parameter pack controlling witness sizes and color thresholds.

    q_0 = k+l and q_i = ceil(2^i (k + l^beta)) for i >= 1, with beta = 1 for
    r = 2 and r/(r-1) otherwise; u is the largest index with q_u <= n.
    t_i = ceil(C(q_i,k)/d) and z_i = ceil(C(q_i,k)/(2 s q_i)). s is kept as an
    unrounded real and only ever used inside the z_i ceiling: rounding it
    separately would change z_i.
    """

    n: int
    k: int
    l: int
    r: int
    beta: Fraction
    s: float
    u: int
    d: int
    q: tuple[int, ...]
    t: tuple[int, ...]
    z: tuple[int, ...]


def schedule(n: int, k: int, l: int, r: int) -> Schedule:
    """Build the Schedule for (n, k, l, r); requires n >= r(k+l) and u >= 0."""
    if r < 2 or k < 1 or l < 1:
        raise ValueError("schedule: need r >= 2, k >= 1, l >= 1")
    if n < r * (k + l):
        raise ValueError(f"schedule: n={n} below r(k+l)={r * (k + l)}")
    beta = Fraction(1) if r == 2 else Fraction(r, r - 1)
    # base = k + l^beta; exact integer for r = 2, float for r >= 3
    lpow = l if r == 2 else l ** (r / (r - 1))
    base = k + lpow
    if base > n:
        raise ValueError(f"schedule: k + l^beta = {base} exceeds n = {n} (u < 0)")
    u = 0
    while 2 ** (u + 1) * base <= n:
        u += 1
    q = [k + l]
    for i in range(1, u + 1):
        q.append(math.ceil(2**i * base))
    d = chromatic_formula(n, k + l, r) - 1
    if r == 2:
        s = float(2 * r + 1)
    elif r == 3:
        s = (2 * r + 1) * l ** (1 / (r - 1))
    else:
        s = (2 * r + 1) * l ** (1 / (r - 1)) * k
    t = tuple(ceil_div(binom_exact(qi, k), d) for qi in q)
    # Fraction(float) is exact, so the ceiling is exact w.r.t. the float s.
    z = tuple(math.ceil(Fraction(binom_exact(qi, k)) / Fraction(2 * s * qi)) for qi in q)
    return Schedule(n, k, l, r, beta, s, u, d, tuple(q), t, z)


@dataclass(frozen=True)
class BoundReport:
    """A probability bound in log space, broken into named additive components.

    ln_bound equals the sum of the components (exactly zero when any component
    is an exact zero); vacuous marks bounds >= 1.
    """

    ln_bound: LogReal
    components: dict[str, float] = field(compare=False)
    params: dict[str, object] = field(compare=False)
    vacuous: bool = False


def _report(components: dict[str, float], params: dict[str, object],
            zero: bool = False) -> BoundReport:
    if zero:
        return BoundReport(LogReal.zero(), components, params, vacuous=False)
    total = math.fsum(components.values())
    return BoundReport(LogReal.from_ln(total), components, params, vacuous=total >= 0.0)


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p={p} outside the open interval (0, 1)")


def thm1_bound(edge_count: int, m: int, d: int, r: int, p: float) -> BoundReport:
    """ln of |E| * C(m, ceil(m/d))^r * (1-p)^(ceil(m/d)^r).

    Upper-bounds the probability that a d-coloring survives in the random
    subhypergraph of any member of the blow-up quotient class of a hypergraph
    with chromatic number d+1 and |E| edges.
    """
    _check_p(p)
    if m < 1 or d < 1:
        raise ValueError("thm1_bound: m and d must be >= 1")
    if edge_count < 0:
        raise ValueError("edge_count must be non-negative")
    mm = ceil_div(m, d)
    params = {"edge_count": edge_count, "m": m, "d": d, "r": r, "p": p, "part_size": mm}
    comps = {
        "edge_choices": math.log(edge_count) if edge_count > 0 else float("-inf"),
        "part_choices": r * log_binom(m, mm).ln_value,
        "empty_pattern": float(mm) ** r * math.log1p(-p),
    }
    return _report(comps, params, zero=edge_count == 0)


def lemma31_lhs(n: int, k: int, l: int, r: int, p: float) -> float:
    """3r((k+l) ln(n/k) + t ln d) - p t^r with t = ceil(C(k+l,k)/d).

    d is the chromatic formula value at (n, k+l, r) minus one; a large
    negative result is the direction in which the d-coloring of the random
    hypergraph is ruled out.
    """
    if n < r * k:
        raise ValueError(f"lemma31_lhs: n={n} below rk={r * k}")
    d = chromatic_formula(n, k + l, r) - 1
    if d == 0:
        raise ValueError("lemma31_lhs: d = 0 (formula value 1)")
    t = ceil_div(binom_exact(k + l, k), d)
    return 3 * r * ((k + l) * math.log(n / k) + t * math.log(d)) - p * float(t) ** r


def case_i_bound(sched: Schedule, i: int, p: float) -> BoundReport:
    """ln of C(n,q_i)^r * C(C(q_i,k), z_i)^r * (1-p)^(z_i^r)."""
    _check_p(p)
    if not 0 <= i <= sched.u:
        raise ValueError(f"case_i_bound: level {i} outside [0, {sched.u}]")
    qi, zi = sched.q[i], sched.z[i]
    comps = {
        "window_choices": sched.r * log_binom(sched.n, qi).ln_value,
        "color_class_choices": sched.r * log_binom(binom_exact(qi, sched.k), zi).ln_value,
        "empty_pattern": float(zi) ** sched.r * math.log1p(-p),
    }
    params = {"n": sched.n, "k": sched.k, "r": sched.r, "i": i, "q_i": qi, "z_i": zi, "p": p}
    return _report(comps, params)


def case_ii_bound(sched: Schedule, i: int, p: float) -> BoundReport:
    """ln of n^(r q_{i+1}) * C(C(q_{i+1},k), z_{i+1})^r * (1-p)^(t_i z_{i+1}^{r-1})."""
    _check_p(p)
    if not 0 <= i <= sched.u - 1:
        raise ValueError(f"case_ii_bound: level {i} outside [0, {sched.u - 1}]")
    qn, zn, ti = sched.q[i + 1], sched.z[i + 1], sched.t[i]
    comps = {
        "window_vertices": sched.r * qn * math.log(sched.n),
        "color_class_choices": sched.r * log_binom(binom_exact(qn, sched.k), zn).ln_value,
        "empty_pattern": float(ti) * float(zn) ** (sched.r - 1) * math.log1p(-p),
    }
    params = {
        "n": sched.n, "k": sched.k, "r": sched.r, "i": i,
        "q_next": qn, "z_next": zn, "t_i": ti, "p": p,
    }
    return _report(comps, params)


def lemma42_lhs(sched: Schedule, i: int, p: float) -> tuple[float, Optional[float]]:
    """The pair of per-level expressions whose divergence to -inf drives the
    d-coloring exclusion:

      3r(q_i ln n + z_i ln(2 s q_i)) - p z_i^r
      3r(q_{i+1} ln n + z_{i+1} ln(2 s q_{i+1})) - p t_i z_{i+1}^{r-1}

    The second value is None at the top level i = u.
    """
    if not 0 <= i <= sched.u:
        raise ValueError(f"lemma42_lhs: level {i} outside [0, {sched.u}]")
    r, n, s = sched.r, sched.n, sched.s
    qi, zi = sched.q[i], sched.z[i]
    first = 3 * r * (qi * math.log(n) + zi * math.log(2 * s * qi)) - p * float(zi) ** r
    if i == sched.u:
        return first, None
    qn, zn, ti = sched.q[i + 1], sched.z[i + 1], sched.t[i]
    second = (
        3 * r * (qn * math.log(n) + zn * math.log(2 * s * qn))
        - p * float(ti) * float(zn) ** (r - 1)
    )
    return first, second


@dataclass(frozen=True)
class ThresholdPredicate:
    """One evaluated growth condition: holds iff ln_lhs >= ln_rhs (C included)."""

    name: str
    ln_lhs: float
    ln_rhs: float
    holds: bool


def _ln_gen_binom(x: float, k: int) -> float:
    """ln of the generalized binomial C(x, k) = x(x-1)...(x-k+1)/k! for real x > k-1."""
    if x <= k - 1:
        raise ValueError(f"generalized binomial needs x > k-1, got x={x}, k={k}")
    return math.fsum(math.log(x - j) for j in range(k)) - math.lgamma(k + 1)


def _pred(name: str, ln_lhs: float, ln_rhs_base: float, c: float) -> ThresholdPredicate:
    ln_rhs = math.log(c) + ln_rhs_base
    return ThresholdPredicate(name, ln_lhs, ln_rhs, ln_lhs >= ln_rhs)


def threshold_check(n: int, k: int, l: int, r: int, c: float) -> dict[str, ThresholdPredicate]:
    """Evaluate the growth conditions for the given uniformity, with the
    asymptotic "sufficiently large constant" replaced by the caller's c.

    r = 2 has a single condition; r = 3 and r > 3 each have a pair. Both
    sides are reported in log space; doubling c is monotone (can only turn a
    predicate from holding to failing).
    """
    if c <= 0:
        raise ValueError("the threshold constant must be positive")
    if r < 2:
        raise ValueError("r must be >= 2")
    logn = math.log(n)
    lnlogn = math.log(logn) if logn > 0 else float("-inf")
    out: dict[str, ThresholdPredicate] = {}
    if r == 2:
        # C(k+l, k) >> n log n
        rhs = logn + lnlogn
        out["pair_count_vs_nlogn"] = _pred(
            "pair_count_vs_nlogn", log_binom(k + l, k).ln_value, rhs, c
        )
    elif r == 3:
        # C(k+l,k)^3 >> (k+l)^4 l^{3/2} log n
        rhs_a = 4 * math.log(k + l) + 1.5 * math.log(l) + lnlogn
        out["subset_count_cubed"] = _pred(
            "subset_count_cubed", 3 * log_binom(k + l, k).ln_value, rhs_a, c
        )
        # C(2(k+l^{3/2}), k)^2 >> (k+l)^3 l log n
        x = 2 * (k + l ** 1.5)
        rhs_b = 3 * math.log(k + l) + math.log(l) + lnlogn
        out["doubled_window_squared"] = _pred(
            "doubled_window_squared", 2 * _ln_gen_binom(x, k), rhs_b, c
        )
    else:
        beta = r / (r - 1)
        # C(k+l,k)^r >> k^r (k+l)^{r+1} l^{r/(r-1)} log n
        rhs_a = r * math.log(k) + (r + 1) * math.log(k + l) + beta * math.log(l) + lnlogn
        out["subset_count_power"] = _pred(
            "subset_count_power", r * log_binom(k + l, k).ln_value, rhs_a, c
        )
        # C(2(k+l^beta), k)^{r-1} >> k^{r-1} (k+l) (k+l^beta)^{r-1} l log n
        x = 2 * (k + l ** beta)
        rhs_b = (
            (r - 1) * math.log(k)
            + math.log(k + l)
            + (r - 1) * math.log(k + l ** beta)
            + math.log(l)
            + lnlogn
        )
        out["doubled_window_power"] = _pred(
            "doubled_window_power", (r - 1) * _ln_gen_binom(x, k), rhs_b, c
        )
    return out


def upper_cond(n: int, k: int, l: int, r: int, p: float) -> float:
    """ln n + (prod_{i=1..r} C(l+ik, k)) ln(1-p).

    Large positive means the empty-window event behind the color-saving upper
    bound is likely; the value is strictly decreasing in p.
    """
    _check_p(p)
    prod = 1
    for i in range(1, r + 1):
        prod *= binom_exact(l + i * k, k)
    try:
        fprod = float(prod)
    except OverflowError:
        return float("-inf")
    return math.log(n) + fprod * math.log1p(-p)


def shadow_bound(family_size: int, k: int, l: int, d: int, r: int, p: float) -> BoundReport:
    """ln of the failure term |H| * C(C(k+l,k), T)^r * (1-p)^(T^r) with
    T = ceil(C(k+l,k)/d), for Kneser hypergraphs over a k-th shadow family."""
    _check_p(p)
    if d < 1:
        raise ValueError("shadow_bound: d must be >= 1")
    if family_size < 0:
        raise ValueError("family_size must be non-negative")
    m = binom_exact(k + l, k)
    t = ceil_div(m, d)
    comps = {
        "family_count": math.log(family_size) if family_size > 0 else float("-inf"),
        "color_class_choices": r * log_binom(m, t).ln_value,
        "empty_pattern": float(t) ** r * math.log1p(-p),
    }
    params = {"family_size": family_size, "k": k, "l": l, "d": d, "r": r, "p": p, "t": t}
    return _report(comps, params, zero=family_size == 0)

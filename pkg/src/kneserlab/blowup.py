"""Blow-ups, quotient identification maps, the monochromatic multipartite
extraction, majority-lifted colorings, and the two-case witness search over
derived schedules.

Every surfaced witness or extracted part is re-validated against its
definition from scratch before being returned; nothing is trusted from the
search path itself.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence

from .bounds import Schedule, chromatic_formula, schedule
from .combinatorics import binom_exact, ceil_div, colex_rank
from .coloring import Coloring
from .family import Hypergraph, _k_masks, full_family, kneser_hypergraph, mask_elements


def blow_up(h: Hypergraph, m: int) -> Hypergraph:
    """Replace each vertex by m copies and each edge by the complete r-partite
    pattern over the copies: copy i of vertex v becomes index v*m + i."""
    if m < 1:
        raise ValueError("blow-up multiplicity must be >= 1")
    edges = []
    for e in h.edges():
        for copies in product(range(m), repeat=h.r):
            edges.append(tuple(v * m + i for v, i in zip(e, copies)))
    edges.sort()
    return Hypergraph.from_edges(h.r, h.n_vertices * m, edges)


@dataclass(frozen=True)
class QuotientMap:
    """An identification of blow-up copies: (vertex v, copy i) -> target id.

    Valid maps are injective on each vertex's copies (condition 1), separate
    the endpoints of every blow-up edge (condition 2), and are surjective
    onto [0, target_size) (condition 3).
    """

    source: Hypergraph
    m: int
    table: tuple[tuple[int, ...], ...]
    target_size: int


@dataclass(frozen=True)
class QuotientViolation:
    condition: int
    witness: tuple

    def __str__(self) -> str:
        return f"condition {self.condition} violated at {self.witness}"


def check_quotient(f: QuotientMap) -> Optional[QuotientViolation]:
    """None if f satisfies conditions 1-3, else the first violation found."""
    if len(f.table) != f.source.n_vertices:
        raise ValueError("table must cover every source vertex")
    for v, row in enumerate(f.table):
        if len(row) != f.m:
            raise ValueError(f"table row for vertex {v} has {len(row)} entries, expected {f.m}")
        for tid in row:
            if not 0 <= tid < f.target_size:
                raise ValueError(f"target id {tid} outside [0, {f.target_size})")
    # condition 1: copies of one vertex stay distinct
    images = []
    for v, row in enumerate(f.table):
        seen: dict[int, int] = {}
        for i, tid in enumerate(row):
            if tid in seen:
                return QuotientViolation(1, (v, seen[tid], i))
            seen[tid] = i
        images.append(frozenset(row))
    # condition 2: endpoints of every blow-up edge map to distinct ids, i.e.
    # image sets of distinct vertices of any source edge are disjoint
    for e in f.source.edges():
        for a, b in combinations(e, 2):
            common = images[a] & images[b]
            if common:
                tid = min(common)
                return QuotientViolation(
                    2, ((a, f.table[a].index(tid)), (b, f.table[b].index(tid)))
                )
    # condition 3: surjective onto the target
    hit = set()
    for row in f.table:
        hit.update(row)
    if len(hit) != f.target_size:
        missing = min(set(range(f.target_size)) - hit)
        return QuotientViolation(3, (missing,))
    return None


def apply_quotient(f: QuotientMap) -> Hypergraph:
    """The image hypergraph on target ids, edge multiset deduplicated to a set."""
    viol = check_quotient(f)
    if viol is not None:
        raise ValueError(f"invalid quotient map: {viol}")
    edges: set[tuple[int, ...]] = set()
    r = f.source.r
    for e in f.source.edges():
        rows = [f.table[v] for v in e]
        for copies in product(range(f.m), repeat=r):
            edges.add(tuple(sorted(row[i] for row, i in zip(rows, copies))))
    return Hypergraph.from_edges(r, f.target_size, sorted(edges))


def kneser_quotient(n: int, k: int, l: int, r: int) -> QuotientMap:
    """The identification realizing KG^r_{n,k} as a quotient of the blow-up of
    KG^r_{n,k+l} with multiplicity C(k+l, k).

    Copy i of vertex S maps to the i-th k-subset of S in colex order,
    identified by its global colex rank. Needs n >= (k+l)r so that every
    target edge lifts to disjoint supersets.
    """
    if n < (k + l) * r:
        raise ValueError(f"kneser_quotient: n={n} below (k+l)r={(k + l) * r}")
    fam = full_family(n, k + l)
    src = kneser_hypergraph(fam, r)
    m = binom_exact(k + l, k)
    table = []
    for vs in fam:
        subs = sorted(
            sum(1 << (e - 1) for e in sub) for sub in combinations(vs.elements, k)
        )
        table.append(tuple(colex_rank(mask_elements(s)) for s in subs))
    return QuotientMap(src, m, tuple(table), binom_exact(n, k))


def majority_lift(n: int, k: int, kappa: Coloring, q: int) -> Coloring:
    """Color each q-subset of [1..n] by the most popular kappa-color among its
    k-subsets, ties broken by the smallest color id.

    kappa must be aligned with the colex order of the k-subsets; the result is
    aligned with the colex order of the q-subsets and keeps kappa's palette.
    """
    if q < k:
        raise ValueError(f"majority_lift: q={q} below k={k}")
    if len(kappa.colors) != binom_exact(n, k):
        raise ValueError("kappa must color every k-subset of [1..n]")
    out = []
    for mask in _k_masks(n, q):
        counts = [0] * kappa.palette_size
        for sub in combinations(mask_elements(mask), k):
            counts[kappa.colors[colex_rank(sub)]] += 1
        best = max(range(kappa.palette_size), key=lambda c: (counts[c], -c))
        out.append(best)
    return Coloring(tuple(out), kappa.palette_size)


def _verify_parts(h: Hypergraph, m: int, coloring: Coloring,
                  parts: Sequence[Sequence[int]], need: int) -> None:
    """Independent re-check of extracted multipartite parts; raises on failure."""
    bases = []
    for part in parts:
        if len(part) != need:
            raise RuntimeError(f"part size {len(part)} != {need}")
        base = {u // m for u in part}
        if len(base) != 1:
            raise RuntimeError("part spans multiple blow-up classes")
        cols = {coloring.colors[u] for u in part}
        if len(cols) != 1:
            raise RuntimeError("part is not monochromatic")
        bases.append(base.pop())
    if len({coloring.colors[p[0]] for p in parts}) != 1:
        raise RuntimeError("parts disagree on the color")
    if not h.has_edge(tuple(sorted(bases))):
        raise RuntimeError("base classes do not form a source edge")


def find_mono_multipartite(h: Hypergraph, m: int, coloring: Coloring,
                           d: int) -> Optional[tuple[tuple[int, ...], ...]]:
    """Extract r monochromatic parts of size ceil(m/d), one inside each blow-up
    class of a single edge of h, from a d-coloring of blow_up(h, m).

    Lifts the coloring to h by per-class majority and locates a monochromatic
    h-edge; guaranteed to succeed when d < chi(h). Returns None when the
    lifted coloring is proper (possible only if d >= chi(h)).
    """
    if m < 1 or d < 1:
        raise ValueError("m and d must be >= 1")
    if coloring.palette_size > d:
        raise ValueError(f"palette {coloring.palette_size} exceeds d={d}")
    if len(coloring.colors) != h.n_vertices * m:
        raise ValueError("coloring must cover the blow-up vertex set")
    need = ceil_div(m, d)
    cols = coloring.colors
    lifted = []
    for v in range(h.n_vertices):
        counts = [0] * coloring.palette_size
        for i in range(m):
            counts[cols[v * m + i]] += 1
        lifted.append(max(range(coloring.palette_size), key=lambda c: (counts[c], -c)))
    for e in h.edges():
        c0 = lifted[e[0]]
        if all(lifted[v] == c0 for v in e[1:]):
            parts = tuple(
                tuple(v * m + i for i in range(m) if cols[v * m + i] == c0)[:need]
                for v in e
            )
            _verify_parts(h, m, coloring, parts, need)
            return parts
    return None


@dataclass(frozen=True)
class WitnessReport:
    """A two-case witness: r pairwise disjoint ground-set windows rich in one color.

    Case "i" at level i: r windows of size q_i, each holding >= z_i k-subsets
    of color alpha. Case "ii" at level i: one window of size q_i with >= t_i
    such subsets plus r-1 windows of size q_{i+1} with >= z_{i+1} each.
    """

    case: str
    level: int
    alpha: int
    parts: tuple[tuple[int, ...], ...]
    mono_sets: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(ms) for ms in self.mono_sets)

    def to_json(self) -> str:
        return json.dumps(
            {
                "case": self.case,
                "i": self.level,
                "alpha": self.alpha,
                "parts": [list(p) for p in self.parts],
                "counts": list(self.counts),
            },
            separators=(",", ":"),
        )


class WitnessBudgetError(Exception):
    """The witness search ran out of its work budget; distinct from "no witness"."""

    def __init__(self, spent: int, budget: int):
        super().__init__(f"witness search budget exhausted ({spent} > {budget} units)")
        self.spent = spent
        self.budget = budget


def _mono_subsets(mask: int, k: int, alpha: int, kappa: Coloring) -> tuple[tuple[int, ...], ...]:
    return tuple(
        sub
        for sub in combinations(mask_elements(mask), k)
        if kappa.colors[colex_rank(sub)] == alpha
    )


def _first_disjoint(cands: Sequence[int], need: int, charge) -> Optional[tuple[int, ...]]:
    """Lexicographically first choice of `need` pairwise disjoint masks from a
    colex-ordered candidate list, or None."""
    out: list[int] = []

    def rec(start: int, union: int) -> bool:
        if len(out) == need:
            return True
        for j in range(start, len(cands) - (need - len(out)) + 1):
            charge(1)
            cand = cands[j]
            if cand & union == 0:
                out.append(cand)
                if rec(j + 1, union | cand):
                    return True
                out.pop()
        return False

    return tuple(out) if rec(0, 0) else None


def lemma1_witness(n: int, k: int, l: int, r: int, kappa: Coloring,
                   budget: int = 50_000_000) -> Optional[WitnessReport]:
    """Search for a two-case witness under a coloring of the k-subsets of [1..n]
    in at most d = chromatic_formula(n, k+l, r) - 1 colors.

    Case "i" is searched before case "ii", smaller levels first, colors in
    ascending id, windows in colex order, so the returned witness is the first
    in (case, level, alpha, colex) order. Exhaustive at desk scale: None means
    no witness exists for this coloring (reported, not treated as impossible).
    Raises WitnessBudgetError when the work budget runs out.
    """
    d = chromatic_formula(n, k + l, r) - 1
    if d < 1:
        raise ValueError("d = 0: the target formula value is 1")
    if kappa.palette_size > d:
        raise ValueError(f"palette {kappa.palette_size} exceeds d = {d}")
    if len(kappa.colors) != binom_exact(n, k):
        raise ValueError("kappa must color every k-subset of [1..n]")
    sched = schedule(n, k, l, r)
    if sched.u < 1:
        raise ValueError(f"n={n} too small: the schedule needs at least two levels")

    spent = [0]

    def charge(units: int) -> None:
        spent[0] += units
        if spent[0] > budget:
            raise WitnessBudgetError(spent[0], budget)

    palette = kappa.palette_size
    zcand: dict[int, dict[int, list[int]]] = {}
    tcand: dict[int, dict[int, list[int]]] = {}

    def level_scan(i: int) -> None:
        if i in zcand:
            return
        q, zi, ti = sched.q[i], sched.z[i], sched.t[i]
        cost = binom_exact(q, k)
        zc: dict[int, list[int]] = defaultdict(list)
        tc: dict[int, list[int]] = defaultdict(list)
        for mask in _k_masks(n, q):
            charge(cost)
            counts = [0] * palette
            for sub in combinations(mask_elements(mask), k):
                counts[kappa.colors[colex_rank(sub)]] += 1
            for alpha in range(palette):
                if counts[alpha] >= zi:
                    zc[alpha].append(mask)
                if counts[alpha] >= ti:
                    tc[alpha].append(mask)
        zcand[i] = zc
        tcand[i] = tc

    def finish(case: str, level: int, alpha: int, masks: Sequence[int]) -> WitnessReport:
        report = WitnessReport(
            case,
            level,
            alpha,
            tuple(mask_elements(msk) for msk in masks),
            tuple(_mono_subsets(msk, k, alpha, kappa) for msk in masks),
        )
        if not validate_witness(sched, kappa, report):
            raise RuntimeError(f"internal error: witness failed re-validation: {report}")
        return report

    for i in range(sched.u + 1):
        level_scan(i)
        for alpha in range(palette):
            cands = zcand[i].get(alpha, [])
            if len(cands) < r:
                continue
            combo = _first_disjoint(cands, r, charge)
            if combo is not None:
                return finish("i", i, alpha, combo)

    for i in range(sched.u):
        level_scan(i)
        level_scan(i + 1)
        for alpha in range(palette):
            heads = tcand[i].get(alpha, [])
            others = zcand[i + 1].get(alpha, [])
            if not heads or len(others) < r - 1:
                continue
            for head in heads:
                charge(1)
                rest = [o for o in others if o & head == 0]
                combo = _first_disjoint(rest, r - 1, charge)
                if combo is not None:
                    return finish("ii", i, alpha, (head,) + combo)
    return None


def validate_witness(sched: Schedule, kappa: Coloring, report: WitnessReport) -> bool:
    """Recheck a WitnessReport against its definition from scratch."""
    n, k, r = sched.n, sched.k, sched.r
    i = report.level
    if report.case == "i":
        if not 0 <= i <= sched.u or len(report.parts) != r:
            return False
        sizes = [sched.q[i]] * r
        thresholds = [sched.z[i]] * r
    elif report.case == "ii":
        if not 0 <= i <= sched.u - 1 or len(report.parts) != r:
            return False
        sizes = [sched.q[i]] + [sched.q[i + 1]] * (r - 1)
        thresholds = [sched.t[i]] + [sched.z[i + 1]] * (r - 1)
    else:
        return False
    if not 0 <= report.alpha < kappa.palette_size:
        return False
    union = 0
    for part, size, threshold, stored in zip(
        report.parts, sizes, thresholds, report.mono_sets
    ):
        if len(part) != size or len(set(part)) != size:
            return False
        if any(not 1 <= e <= n for e in part):
            return False
        mask = sum(1 << (e - 1) for e in part)
        if mask & union:
            return False
        union |= mask
        recount = _mono_subsets(mask, k, report.alpha, kappa)
        if len(recount) < threshold or set(recount) != set(stored):
            return False
    return True

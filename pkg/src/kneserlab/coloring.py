"""Weak (no-monochromatic-edge) coloring machinery.

Includes validation, the windowed standard coloring of Kneser hypergraphs,
greedy/packing bounds, and an exact chromatic-number solver used as the
ground-truth oracle at desk scale. For r = 2 weak coloring coincides with
proper graph coloring and a faster incremental path is used.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .combinatorics import ceil_div
from .family import Hypergraph, full_family


@dataclass(frozen=True)
class Coloring:
    """Color ids (0-based), one per vertex index, under a declared palette size.

    palette_size may exceed the number of colors actually used; every color id
    must be < palette_size.
    """

    colors: tuple[int, ...]
    palette_size: int

    def __post_init__(self) -> None:
        if self.palette_size < 0:
            raise ValueError("palette_size must be non-negative")
        for c in self.colors:
            if not 0 <= c < self.palette_size:
                raise ValueError(f"color id {c} outside palette of size {self.palette_size}")

    @classmethod
    def from_colors(cls, colors: Sequence[int], palette_size: Optional[int] = None) -> "Coloring":
        cols = tuple(int(c) for c in colors)
        if palette_size is None:
            palette_size = max(cols) + 1 if cols else 0
        return cls(cols, palette_size)

    def used_colors(self) -> int:
        return len(set(self.colors))


def validate(h: Hypergraph, coloring: Coloring) -> Optional[tuple[int, ...]]:
    """None if no edge is monochromatic, else the first violating edge in canonical order."""
    cols = coloring.colors
    if len(cols) != h.n_vertices:
        raise ValueError(
            f"coloring covers {len(cols)} vertices, hypergraph has {h.n_vertices}"
        )
    for e in h.edges():
        c0 = cols[e[0]]
        for v in e[1:]:
            if cols[v] != c0:
                break
        else:
            return e
    return None


def standard_coloring(n: int, k: int, r: int) -> Coloring:
    """The windowed coloring of KG^r_{n,k} in ceil((n-r(k-1))/(r-1)) colors.

    Sets whose minimum element lies in the window [(r-1)(j-1)+1, (r-1)j] get
    color j (for minima up to n-rk+1); sets inside [n-rk+2, n] get color 0.
    No r pairwise disjoint sets share a window (their minima are distinct),
    and the tail has fewer than rk elements, so the result is proper.
    """
    if r < 2 or k < 1:
        raise ValueError("standard_coloring: need r >= 2 and k >= 1")
    if n < r * k:
        raise ValueError(f"standard_coloring: n={n} below rk={r * k}")
    limit = n - r * k + 1
    colors = []
    for vs in full_family(n, k):
        m = (vs.mask & -vs.mask).bit_length()  # minimum element
        colors.append(ceil_div(m, r - 1) if m <= limit else 0)
    palette = ceil_div(n - r * (k - 1), r - 1)
    return Coloring(tuple(colors), palette)


def _incident_tuples(n: int, edges: Sequence[tuple[int, ...]]) -> list[list[tuple[int, ...]]]:
    others: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for e in edges:
        for v in e:
            others[v].append(tuple(w for w in e if w != v))
    return others


def greedy_upper(h: Hypergraph, order: Optional[Sequence[int]] = None) -> Coloring:
    """Greedy weak coloring: each vertex takes the smallest color that does not
    complete a monochromatic edge. Default order is by descending degree."""
    n = h.n_vertices
    edges = list(h.edges())
    others = _incident_tuples(n, edges)
    if order is None:
        order = sorted(range(n), key=lambda v: (-len(others[v]), v))
    else:
        order = list(order)
        if sorted(order) != list(range(n)):
            raise ValueError("order must be a permutation of the vertex indices")
    colors = [-1] * n
    used = 0
    for v in order:
        forbidden = 0
        for t in others[v]:
            c0 = colors[t[0]]
            if c0 < 0 or forbidden >> c0 & 1:
                continue
            if all(colors[w] == c0 for w in t[1:]):
                forbidden |= 1 << c0
        c = 0
        while forbidden >> c & 1:
            c += 1
        colors[v] = c
        if c + 1 > used:
            used = c + 1
    return Coloring(tuple(colors), used if n else 0)


def packing_lower(h: Hypergraph) -> int:
    """ceil(M / (r-1)) where M is a greedily grown set of vertices every
    r-subset of which is an edge; a color class can hold at most r-1 of them,
    so this never exceeds the chromatic number.

    Family-backed hypergraphs grow a pairwise-disjoint packing (for the lazy
    Kneser generator every r-subset of one is automatically an edge; explicit
    edge lists are additionally checked edge by edge). Opaque-vertex
    hypergraphs seed the packing with the first edge and extend it under full
    edge checks.
    """
    r = h.r
    n = h.n_vertices
    if n == 0:
        return 0
    if h.family is not None:
        masks = h.family.masks()
        generator = h.is_generator()
        packing: list[int] = []
        union = 0
        for v in range(n):
            if masks[v] & union:
                continue
            if not generator and len(packing) >= r - 1:
                if not all(h.has_edge(c + (v,)) for c in combinations(packing, r - 1)):
                    continue
            packing.append(v)
            union |= masks[v]
    else:
        first = next(iter(h.edges()), None)
        if first is None:
            return 1
        packing = list(first)
        for v in range(packing[-1] + 1, n):
            if all(h.has_edge(c + (v,)) for c in combinations(packing, r - 1)):
                packing.append(v)
    return max(1, ceil_div(len(packing), r - 1))


class SolverTimeout(Exception):
    """Raised by is_colorable when the caller-supplied deadline expires."""


class _Timeout(Exception):
    pass


class _SearchBase:
    """DSATUR-style backtracking over weak colorings with canonical colors.

    Vertex 0 is fixed to color 0 and a new color may only be introduced as
    (current max + 1), collapsing the palette symmetry so exhaustion proves
    non-colorability. Vertices with a single remaining option are assigned
    by unit propagation before branching.
    """

    n: int
    c_limit: int
    colors: list[int]
    deg: list[int]
    work: int
    deadline: Optional[float]

    def _assign(self, v: int, c: int) -> None:
        raise NotImplementedError

    def _unassign(self, v: int, c: int) -> None:
        raise NotImplementedError

    def _forbidden(self, v: int, used_mask: int) -> int:
        raise NotImplementedError

    def run(self) -> bool:
        if self.n == 0:
            return True
        self._assign(0, 0)
        self.n_uncolored = self.n - 1
        return self._rec(1)

    def _select(self, used: int):
        used_mask = (1 << used) - 1
        can_new = used < self.c_limit
        best_v = -1
        best_key = (-1, -1)
        forced_v = -1
        forced_mask = 0
        forced_new = False
        colors = self.colors
        for v in range(self.n):
            if colors[v] >= 0:
                continue
            fmask = self._forbidden(v, used_mask)
            sat = fmask.bit_count()
            options = (used - sat) + (1 if can_new else 0)
            if options == 0:
                return ("dead", v, 0, False)
            if options == 1:
                if forced_v < 0:
                    forced_v = v
                    forced_new = sat == used
                    forced_mask = 0 if forced_new else (~fmask & used_mask)
                continue
            key = (sat, self.deg[v])
            if key > best_key:
                best_key = key
                best_v = v
        if forced_v >= 0:
            return ("forced", forced_v, forced_mask, forced_new)
        return ("branch", best_v, ~self._forbidden(best_v, used_mask) & used_mask, can_new)

    def _rec(self, used: int) -> bool:
        self.work += 1
        if self.deadline is not None and self.work & 1023 == 0:
            if time.monotonic() > self.deadline:
                raise _Timeout
        trail: list[tuple[int, int]] = []
        while True:
            if self.n_uncolored == 0:
                return True
            kind, v, avail_mask, can_new = self._select(used)
            if kind == "dead":
                break
            if kind == "forced":
                c = used if can_new else (avail_mask & -avail_mask).bit_length() - 1
                if can_new:
                    used += 1
                self._assign(v, c)
                self.n_uncolored -= 1
                trail.append((v, c))
                continue
            m = avail_mask
            while m:
                b = m & -m
                c = b.bit_length() - 1
                m ^= b
                self._assign(v, c)
                self.n_uncolored -= 1
                if self._rec(used):
                    return True
                self._unassign(v, c)
                self.n_uncolored += 1
            if can_new:
                self._assign(v, used)
                self.n_uncolored -= 1
                if self._rec(used + 1):
                    return True
                self._unassign(v, used)
                self.n_uncolored += 1
            break
        for tv, tc in reversed(trail):
            self._unassign(tv, tc)
            self.n_uncolored += 1
        return False


class _GraphSearch(_SearchBase):
    """r = 2 path: adjacency bitmasks with incremental neighbor-color counts."""

    def __init__(self, n: int, edges: Sequence[tuple[int, ...]], c_limit: int,
                 deadline: Optional[float]):
        self.n = n
        self.c_limit = c_limit
        self.deadline = deadline
        adj = [0] * n
        for a, b in edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        self.adj = adj
        self.deg = [a.bit_count() for a in adj]
        self.colors = [-1] * n
        self.cnt = [[0] * c_limit for _ in range(n)]
        self.forb = [0] * n
        self.n_uncolored = n
        self.work = 0

    def _assign(self, v: int, c: int) -> None:
        self.work += 1
        self.colors[v] = c
        bit = 1 << c
        m = self.adj[v]
        cnt = self.cnt
        forb = self.forb
        while m:
            b = m & -m
            u = b.bit_length() - 1
            m ^= b
            row = cnt[u]
            row[c] += 1
            if row[c] == 1:
                forb[u] |= bit

    def _unassign(self, v: int, c: int) -> None:
        self.colors[v] = -1
        bit = 1 << c
        m = self.adj[v]
        cnt = self.cnt
        forb = self.forb
        while m:
            b = m & -m
            u = b.bit_length() - 1
            m ^= b
            row = cnt[u]
            row[c] -= 1
            if row[c] == 0:
                forb[u] &= ~bit

    def _forbidden(self, v: int, used_mask: int) -> int:
        return self.forb[v] & used_mask


class _WeakSearch(_SearchBase):
    """General r >= 3 path: forbidden colors recomputed from incident tuples."""

    def __init__(self, n: int, edges: Sequence[tuple[int, ...]], c_limit: int,
                 deadline: Optional[float]):
        self.n = n
        self.c_limit = c_limit
        self.deadline = deadline
        self.others = _incident_tuples(n, edges)
        self.deg = [len(o) for o in self.others]
        self.colors = [-1] * n
        self.n_uncolored = n
        self.work = 0

    def _assign(self, v: int, c: int) -> None:
        self.work += 1
        self.colors[v] = c

    def _unassign(self, v: int, c: int) -> None:
        self.colors[v] = -1

    def _forbidden(self, v: int, used_mask: int) -> int:
        m = 0
        colors = self.colors
        for t in self.others[v]:
            c0 = colors[t[0]]
            if c0 < 0 or m >> c0 & 1:
                continue
            for w in t[1:]:
                if colors[w] != c0:
                    break
            else:
                m |= 1 << c0
        return m & used_mask


_FOUND, _EXHAUSTED, _TIMEOUT = "found", "exhausted", "timeout"


def _solve(n: int, r: int, edges: list[tuple[int, ...]], c: int,
           deadline: Optional[float]) -> tuple[str, Optional[tuple[int, ...]], int]:
    if c >= n:
        return (_FOUND, tuple(range(n)), 0)
    cls = _GraphSearch if r == 2 else _WeakSearch
    search = cls(n, edges, c, deadline)
    try:
        ok = search.run()
    except _Timeout:
        return (_TIMEOUT, None, search.work)
    if ok:
        return (_FOUND, tuple(search.colors), search.work)
    return (_EXHAUSTED, None, search.work)


def is_colorable(h: Hypergraph, c: int, deadline_s: Optional[float] = None) -> Optional[Coloring]:
    """A proper weak c-coloring, or None once exhaustive backtracking rules one out.

    With a deadline, raises SolverTimeout if the search does not finish in time.
    """
    if c < 1:
        raise ValueError("c must be >= 1")
    n = h.n_vertices
    deadline = time.monotonic() + deadline_s if deadline_s is not None else None
    status, cols, _ = _solve(n, h.r, list(h.edges()), c, deadline)
    if status == _TIMEOUT:
        raise SolverTimeout(f"deadline of {deadline_s}s expired deciding {c}-colorability")
    if status == _EXHAUSTED:
        return None
    return Coloring(cols, c)


@dataclass(frozen=True)
class ChiCertificate:
    """Result of exact_chi: either an exact value or a bracket when censored.

    exact means the search below chi_lo was exhaustive; the witness is always
    a proper coloring with palette_size == chi_hi. work is the deterministic
    count of solver decisions (the reproducible runtime proxy).
    """

    chi_lo: int
    chi_hi: int
    witness: Coloring
    exact: bool
    work: int

    @property
    def chi(self) -> int:
        if not self.exact:
            raise ValueError(f"censored result: chi lies in [{self.chi_lo}, {self.chi_hi}]")
        return self.chi_hi


def exact_chi(h: Hypergraph, deadline_s: Optional[float] = None,
              lower_hint: Optional[int] = None) -> ChiCertificate:
    """Exact weak chromatic number, bracketed by packing and greedy bounds.

    Iterates c upward from the packing lower bound, deciding c-colorability
    exhaustively. On deadline expiry the result is the bracket
    [first undecided c, greedy palette] with exact=False. lower_hint must be
    a valid lower bound on chi(h) (e.g. from a sub-hypergraph in a coupled
    sweep); it is trusted, not re-derived.
    """
    n = h.n_vertices
    if n == 0:
        return ChiCertificate(0, 0, Coloring((), 0), True, 0)
    hm = h.materialize()
    edges = list(hm.edges())
    lb = packing_lower(hm)
    if lower_hint is not None:
        lb = max(lb, lower_hint)
    greedy = greedy_upper(hm)
    ub = greedy.palette_size
    witness = greedy
    deadline = time.monotonic() + deadline_s if deadline_s is not None else None
    work_total = 0
    c = lb
    while c < ub:
        if deadline is not None and time.monotonic() > deadline:
            return ChiCertificate(c, ub, witness, False, work_total)
        status, cols, w = _solve(n, hm.r, edges, c, deadline)
        work_total += w
        if status == _TIMEOUT:
            return ChiCertificate(c, ub, witness, False, work_total)
        if status == _FOUND:
            return ChiCertificate(c, c, Coloring(cols, c), True, work_total)
        c += 1
    return ChiCertificate(ub, ub, witness, True, work_total)

"""Vertex families and r-uniform Kneser hypergraphs.

A Family is an ordered, duplicate-free sequence of k-subsets of [1..n]; a
Hypergraph pairs a uniformity r with either an explicit canonical edge list
or the lazy "all pairwise-disjoint r-tuples" generator over a Family.
Binomial random subhypergraphs are drawn with per-edge uniforms; in coupled
mode the uniform is a counter-based hash of (seed, canonical edge rank), so
edge sets are nested across p for a fixed seed.
"""

from __future__ import annotations

import hashlib
import json
import random
import struct
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .combinatorics import enumerate_stable

_MASK64 = (1 << 64) - 1


def _mask_from_elements(n: int, elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set [1..{n}]")
        bit = 1 << (e - 1)
        if mask & bit:
            raise ValueError(f"duplicate element {e}")
        mask |= bit
    return mask


def mask_elements(mask: int) -> tuple[int, ...]:
    """1-based elements of a ground-set bitmask, ascending."""
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length())
        mask ^= b
    return tuple(out)


@dataclass(frozen=True)
class VertexSet:
    """A k-subset of the ground set [1..n], stored as a bitmask (bit j <-> j+1)."""

    n: int
    mask: int

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> "VertexSet":
        return cls(n, _mask_from_elements(n, elements))

    @property
    def k(self) -> int:
        return self.mask.bit_count()

    @property
    def elements(self) -> tuple[int, ...]:
        return mask_elements(self.mask)

    def disjoint(self, other: "VertexSet") -> bool:
        return self.mask & other.mask == 0

    def contains(self, element: int) -> bool:
        return bool(self.mask >> (element - 1) & 1) if 1 <= element <= self.n else False

    def __repr__(self) -> str:
        return f"VertexSet({set(self.elements) or '{}'} in [1..{self.n}])"


class Family:
    """An ordered, indexed collection of k-subsets sharing one (n, k).

    Duplicates are rejected rather than silently merged; :func:`shadow` is the
    sanctioned deduplication path.
    """

    def __init__(self, n: int, k: int, sets: Iterable[VertexSet]):
        self.n = n
        self.k = k
        self.sets: tuple[VertexSet, ...] = tuple(sets)
        index: dict[int, int] = {}
        for i, vs in enumerate(self.sets):
            if vs.n != n:
                raise ValueError(f"set {vs} has ground size {vs.n}, family has {n}")
            if vs.k != k:
                raise ValueError(f"set {vs} has {vs.k} elements, family expects {k}")
            if vs.mask in index:
                raise ValueError(f"duplicate set {vs} at positions {index[vs.mask]} and {i}")
            index[vs.mask] = i
        self._index = index

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.sets)

    def __getitem__(self, i: int) -> VertexSet:
        return self.sets[i]

    def __contains__(self, vs: VertexSet) -> bool:
        return vs.mask in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return (self.n, self.k, self.sets) == (other.n, other.k, other.sets)

    def __repr__(self) -> str:
        return f"Family(n={self.n}, k={self.k}, {len(self.sets)} sets)"

    def index_of(self, vs: VertexSet) -> int:
        try:
            return self._index[vs.mask]
        except KeyError:
            raise KeyError(f"{vs} not in family") from None

    def masks(self) -> tuple[int, ...]:
        return tuple(vs.mask for vs in self.sets)


def _k_masks(n: int, k: int) -> Iterator[int]:
    """All k-bit masks below 2^n in increasing numeric (= colex) order."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    v = (1 << k) - 1
    limit = 1 << n
    while v < limit:
        yield v
        u = v & -v
        w = v + u
        v = w | ((v ^ w) >> (u.bit_length() + 1))


def full_family(n: int, k: int) -> Family:
    """All C(n, k) k-subsets of [1..n] in colex order; empty when k > n."""
    if n < 1 or k < 1:
        raise ValueError("full_family: n, k must be >= 1")
    return Family(n, k, (VertexSet(n, m) for m in _k_masks(n, k)))


def stable_family(n: int, k: int, s: int) -> Family:
    """The s-stable k-subsets in colex order; s=2 is the Schrijver vertex set."""
    return Family(n, k, (VertexSet.from_elements(n, t) for t in enumerate_stable(n, k, s)))


def shadow(fam: Family, k: int) -> Family:
    """All k-subsets contained in at least one member of fam, deduplicated, colex order."""
    if k > fam.k:
        raise ValueError(f"shadow: k={k} exceeds family k={fam.k}")
    if k < 0:
        raise ValueError("shadow: k must be non-negative")
    seen: set[int] = set()
    for vs in fam:
        for sub in combinations(vs.elements, k):
            m = 0
            for e in sub:
                m |= 1 << (e - 1)
            seen.add(m)
    return Family(fam.n, k, (VertexSet(fam.n, m) for m in sorted(seen)))


class Hypergraph:
    """An r-uniform hypergraph on vertex indices 0..n_vertices-1.

    Vertices usually come from a Family of k-subsets; blow-ups and quotient
    images have opaque indices and carry no family. Edges are canonical:
    each edge is a strictly increasing r-tuple of vertex indices, and the
    edge stream is lexicographic over those tuples. Edge ranks (positions in
    the stream) drive coupled sampling.
    """

    def __init__(
        self,
        r: int,
        *,
        family: Optional[Family] = None,
        n_vertices: Optional[int] = None,
        edges: Optional[Sequence[Sequence[int]]] = None,
        generator: bool = False,
    ):
        if r < 2:
            raise ValueError(f"uniformity r must be >= 2, got {r}")
        self.r = r
        self.family = family
        if family is not None:
            n_vertices = len(family)
        if n_vertices is None:
            raise ValueError("n_vertices required when no family is given")
        self._n_vertices = n_vertices
        self._edge_count: Optional[int] = None
        self._edge_set: Optional[frozenset[tuple[int, ...]]] = None
        if generator:
            if family is None:
                raise ValueError("generator mode requires a family")
            if edges is not None:
                raise ValueError("generator mode excludes an explicit edge list")
            self._edges: Optional[tuple[tuple[int, ...], ...]] = None
        else:
            if edges is None:
                raise ValueError("explicit mode requires an edge list (may be empty)")
            canon = []
            for e in edges:
                t = tuple(e)
                if len(t) != r:
                    raise ValueError(f"edge {t} is not an r-tuple (r={r})")
                if any(not 0 <= v < n_vertices for v in t):
                    raise ValueError(f"edge {t} has out-of-range vertex index")
                if any(a >= b for a, b in zip(t, t[1:])):
                    t = tuple(sorted(t))
                    if len(set(t)) != r:
                        raise ValueError(f"edge {t} repeats a vertex")
                canon.append(t)
            canon.sort()
            for a, b in zip(canon, canon[1:]):
                if a == b:
                    raise ValueError(f"duplicate edge {a}")
            self._edges = tuple(canon)
            self._edge_count = len(canon)

    @classmethod
    def kneser(cls, family: Family, r: int) -> "Hypergraph":
        return cls(r, family=family, generator=True)

    @classmethod
    def from_edges(
        cls,
        r: int,
        n_vertices: int,
        edges: Sequence[Sequence[int]],
        family: Optional[Family] = None,
    ) -> "Hypergraph":
        return cls(r, family=family, n_vertices=n_vertices, edges=edges)

    @property
    def n_vertices(self) -> int:
        return self._n_vertices

    def is_generator(self) -> bool:
        return self._edges is None

    def _disjoint_tuples(self) -> Iterator[tuple[int, ...]]:
        masks = self.family.masks()  # type: ignore[union-attr]
        n = len(masks)
        r = self.r

        def rec(start: int, chosen: tuple[int, ...], union: int) -> Iterator[tuple[int, ...]]:
            need = r - len(chosen)
            if need == 0:
                yield chosen
                return
            for i in range(start, n - need + 1):
                if masks[i] & union == 0:
                    yield from rec(i + 1, chosen + (i,), union | masks[i])

        yield from rec(0, (), 0)

    def edges(self) -> Iterator[tuple[int, ...]]:
        """Stream edges in canonical (lexicographic) order."""
        if self._edges is not None:
            return iter(self._edges)
        return self._disjoint_tuples()

    def edge_count(self) -> int:
        if self._edge_count is None:
            self._edge_count = sum(1 for _ in self.edges())
        return self._edge_count

    def has_edge(self, vertices: Sequence[int]) -> bool:
        t = tuple(sorted(vertices))
        if len(t) != self.r or len(set(t)) != self.r:
            return False
        if any(not 0 <= v < self._n_vertices for v in t):
            return False
        if self._edges is None:
            masks = self.family.masks()  # type: ignore[union-attr]
            union = 0
            for v in t:
                if masks[v] & union:
                    return False
                union |= masks[v]
            return True
        if self._edge_set is None:
            self._edge_set = frozenset(self._edges)
        return t in self._edge_set

    def materialize(self) -> "Hypergraph":
        """An explicit-edge copy; identity for already-explicit hypergraphs."""
        if self._edges is not None:
            return self
        return Hypergraph.from_edges(self.r, self._n_vertices, list(self.edges()), family=self.family)

    def __repr__(self) -> str:
        kind = "generator" if self.is_generator() else f"{self._edge_count} edges"
        return f"Hypergraph(r={self.r}, {self._n_vertices} vertices, {kind})"


def kneser_hypergraph(fam: Family, r: int) -> Hypergraph:
    """The Kneser hypergraph on fam: edges are all pairwise-disjoint r-tuples."""
    return Hypergraph.kneser(fam, r)


def edge_count(h: Hypergraph) -> int:
    """Exact edge count (streams the generator if needed)."""
    return h.edge_count()


@dataclass(frozen=True)
class SampleConfig:
    """Parameters of a binomial edge sample.

    In coupled mode one uniform per potential edge is derived from
    (seed, edge rank), so samples at p <= p' with the same seed are nested.
    Independent mode consumes a sequential PRNG stream along the canonical
    edge order; both modes are deterministic given the seed.
    """

    p: float
    seed: int
    mode: str = "coupled"

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        if self.mode not in ("coupled", "independent"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")


def _edge_uniform(seed: int, rank: int) -> float:
    digest = hashlib.blake2b(
        struct.pack("<QQ", seed & _MASK64, rank & _MASK64),
        digest_size=8,
        person=b"edge-unif",
    ).digest()
    return int.from_bytes(digest, "little") / 2.0**64


def sample(h: Hypergraph, cfg: SampleConfig) -> Hypergraph:
    """Binomial random subhypergraph: each edge kept iff its uniform is < p.

    The result is explicit-edge, on the same vertex set; large generators are
    streamed and filtered, never materialized in full.
    """
    if cfg.mode == "coupled":
        kept = [e for rank, e in enumerate(h.edges()) if _edge_uniform(cfg.seed, rank) < cfg.p]
    else:
        rng = random.Random(cfg.seed)
        kept = [e for e in h.edges() if rng.random() < cfg.p]
    return Hypergraph.from_edges(h.r, h.n_vertices, kept, family=h.family)


def hypergraph_to_json(h: Hypergraph, coloring: Optional[Sequence[int]] = None) -> str:
    """Canonical UTF-8 JSON interchange form (family-backed hypergraphs only)."""
    if h.family is None:
        raise ValueError("interchange format requires a family-backed hypergraph")
    obj: dict = {
        "n": h.family.n,
        "k": h.family.k,
        "r": h.r,
        "vertices": [list(vs.elements) for vs in h.family],
    }
    if h.is_generator():
        obj["generator"] = "kneser"
    else:
        obj["edges"] = [list(e) for e in h.edges()]
    if coloring is not None:
        obj["coloring"] = list(coloring)
    return json.dumps(obj, separators=(",", ":"))


def hypergraph_from_json(text: str) -> tuple[Hypergraph, Optional[list[int]]]:
    """Parse the interchange format; returns (hypergraph, coloring-or-None)."""
    obj = json.loads(text)
    for field in ("n", "k", "r", "vertices"):
        if field not in obj:
            raise ValueError(f"interchange object missing field {field!r}")
    n, k, r = obj["n"], obj["k"], obj["r"]
    fam = Family(n, k, (VertexSet.from_elements(n, elems) for elems in obj["vertices"]))
    if obj.get("generator") == "kneser":
        h = Hypergraph.kneser(fam, r)
    elif "edges" in obj:
        h = Hypergraph.from_edges(r, len(fam), obj["edges"], family=fam)
    else:
        raise ValueError("interchange object needs either 'edges' or 'generator'")
    coloring = obj.get("coloring")
    if coloring is not None:
        if len(coloring) != len(fam):
            raise ValueError("coloring length does not match vertex count")
        coloring = [int(c) for c in coloring]
    return h, coloring

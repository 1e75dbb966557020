"""Weighted-graph core: deterministic shortest paths and the per-pair
max-edge metric that every spanner condition references.

Graphs are undirected, simple, positively weighted, with vertices 0..n-1.
Weights are either binary64 floats or exact rationals (int / Fraction);
a graph never mixes the two regimes.  All shortest-path work on exact
graphs happens in integers over one common denominator, so distances and
comparisons are exact with no tolerance questions.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Union

Weight = Union[int, float, Fraction]
Pair = tuple[int, int]
EdgeTuple = tuple[int, int, Weight]

INF = math.inf


class GraphError(ValueError):
    """Base class for malformed graph input."""


class ParseError(GraphError):
    """Edge-list or instance document could not be parsed."""


class SelfLoopError(GraphError):
    """An edge joins a vertex to itself."""


class DuplicateEdgeError(GraphError):
    """An unordered vertex pair appears more than once."""


class NonpositiveWeightError(GraphError):
    """An edge weight is zero or negative."""


class DisconnectedError(GraphError):
    """The graph is not connected."""


class InvalidVertexError(GraphError):
    """A vertex id is outside 0..n-1."""


class UnknownEdgeError(GraphError):
    """An edge does not belong to the host graph."""


class NonExactArithmeticError(GraphError):
    """Exact oracles require rational (int / Fraction) edge weights."""


def canonical(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


def is_exact_weight(w: Weight) -> bool:
    return isinstance(w, (int, Fraction)) and not isinstance(w, bool)


@dataclass(frozen=True)
class Beta:
    """An additive spanner condition: d_H <= d_G + slack.

    mode "relative" gives slack = value * W(u, v) where W(u, v) is the
    maximum edge weight on the fixed shortest path between u and v;
    mode "wmax" gives slack = value * W_max over the whole graph.
    """

    mode: str  # "relative" | "wmax"
    value: Weight

    def __post_init__(self) -> None:
        if self.mode not in ("relative", "wmax"):
            raise ValueError(f"unknown beta mode {self.mode!r}")
        if self.value < 0:
            raise ValueError("beta value must be nonnegative")

    def slack(self, w_pair: Weight, w_max: Weight) -> Weight:
        if self.mode == "relative":
            return self.value * w_pair
        return self.value * w_max


@dataclass(frozen=True, eq=True)
class Graph:
    """Immutable undirected weighted graph over vertices 0..n-1.

    Construction through this initializer performs no validation; use
    :func:`load_graph`, :meth:`Graph.from_edges` or the generators for
    checked instances.  Internal pipeline stages (scaled or spliced
    graphs) may legitimately be disconnected.
    """

    n: int
    edges: tuple[EdgeTuple, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[EdgeTuple]) -> "Graph":
        """Validated constructor enforcing all graph invariants."""
        seen: set[Pair] = set()
        canon: list[EdgeTuple] = []
        for u, v, w in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertexError(f"edge ({u},{v}) outside 0..{n - 1}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            key = canonical(u, v)
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}")
            if not w > 0:
                raise NonpositiveWeightError(f"edge {key} has weight {w}")
            seen.add(key)
            canon.append((key[0], key[1], w))
        g = cls(n, tuple(sorted(canon, key=lambda e: (e[0], e[1]))))
        if not g.is_connected():
            raise DisconnectedError("graph is not connected")
        return g

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, Weight], ...], ...]:
        adj: list[list[tuple[int, Weight]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return tuple(tuple(a) for a in adj)

    @cached_property
    def weight_by_pair(self) -> dict[Pair, Weight]:
        return {(u, v): w for u, v, w in self.edges}

    @cached_property
    def total_weight(self) -> Weight:
        return sum(w for _, _, w in self.edges)

    @cached_property
    def w_max(self) -> Weight:
        return max((w for _, _, w in self.edges), default=0)

    @cached_property
    def is_exact(self) -> bool:
        return all(is_exact_weight(w) for _, _, w in self.edges)

    @cached_property
    def _packed(self) -> tuple[int | None, tuple[tuple[tuple[int, Weight], ...], ...]]:
        """Adjacency with weights lifted to integers over one denominator.

        Exact graphs only; float graphs keep their weights as-is
        (denominator None).  Keeps the Dijkstra inner loop on machine
        comparisons instead of Fraction arithmetic.
        """
        if not self.is_exact:
            return None, self.adjacency
        denom = 1
        for _, _, w in self.edges:
            if isinstance(w, Fraction):
                denom = math.lcm(denom, w.denominator)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            wi = int(w * denom)
            adj[u].append((v, wi))
            adj[v].append((u, wi))
        return denom, tuple(tuple(a) for a in adj)

    def weight_of(self, u: int, v: int) -> Weight:
        try:
            return self.weight_by_pair[canonical(u, v)]
        except KeyError:
            raise UnknownEdgeError(f"edge ({u},{v}) not in graph") from None

    def has_edge(self, u: int, v: int) -> bool:
        return canonical(u, v) in self.weight_by_pair

    def check_vertex(self, u: int) -> None:
        if not (0 <= u < self.n):
            raise InvalidVertexError(f"vertex {u} outside 0..{self.n - 1}")

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        adj = self.adjacency
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n


class ShortestPaths:
    """Single-source result of the deterministic label-setting search.

    Tie-break among equal-length paths: fewer hops first, then the
    smallest predecessor id at every step (equivalently, the reversed
    vertex sequence is lexicographically minimal).  This makes every
    fixed path, and everything built from fixed paths, reproducible.
    """

    __slots__ = ("source", "_dist", "_hops", "_parent", "_denom")

    def __init__(self, source: int, dist: dict[int, Weight],
                 hops: dict[int, int], parent: dict[int, int],
                 denom: int | None) -> None:
        self.source = source
        self._dist = dist
        self._hops = hops
        self._parent = parent
        self._denom = denom

    def reachable(self, v: int) -> bool:
        return v in self._dist

    def distance(self, v: int) -> Weight:
        if v not in self._dist:
            return INF
        d = self._dist[v]
        if self._denom is None or self._denom == 1:
            return d
        return Fraction(d, self._denom)

    def distance_raw(self, v: int) -> Weight:
        """Packed-integer distance (same denominator as the host graph)."""
        return self._dist.get(v, INF)

    def hops(self, v: int) -> int:
        return self._hops[v]

    def path_to(self, v: int) -> list[int]:
        if v not in self._dist:
            raise UnknownEdgeError(f"vertex {v} not reachable from {self.source}")
        out = [v]
        while out[-1] != self.source:
            out.append(self._parent[out[-1]])
        out.reverse()
        return out

    def reached(self) -> Iterator[int]:
        return iter(self._dist)


def shortest_paths_adj(adj, source: int, denom: int | None = None) -> ShortestPaths:
    """Deterministic Dijkstra over an adjacency structure.

    `adj` maps or indexes each vertex to (neighbor, weight) pairs; with
    strictly positive weights the (distance, hops, parent) label of a
    vertex is final when it is popped, so parent pointers need no
    post-settlement fixups.
    """
    dist: dict[int, Weight] = {source: 0}
    hops: dict[int, int] = {source: 0}
    parent: dict[int, int] = {source: -1}
    heap: list[tuple[Weight, int, int]] = [(0, 0, source)]
    settled: set[int] = set()
    while heap:
        d, h, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        for v, w in adj[u]:
            if v in settled:
                continue
            nd = d + w
            nh = h + 1
            if v not in dist or (nd, nh, u) < (dist[v], hops[v], parent[v]):
                push = v not in dist or (nd, nh) < (dist[v], hops[v])
                dist[v] = nd
                hops[v] = nh
                parent[v] = u
                if push:
                    heapq.heappush(heap, (nd, nh, v))
    return ShortestPaths(source, dist, hops, parent, denom)


def shortest_paths(g: Graph, source: int) -> ShortestPaths:
    g.check_vertex(source)
    denom, adj = g._packed
    return shortest_paths_adj(adj, source, denom)


class SubgraphAdjacency:
    """Mutable adjacency over a subset of a host graph's edges.

    Used by greedy loops that repeatedly query distances on a growing
    edge set; weights are taken packed from the host graph.
    """

    def __init__(self, host: Graph, edges: Iterable[Pair] = ()) -> None:
        self.host = host
        denom, _ = host._packed
        self.denom = denom
        self._adj: dict[int, list[tuple[int, Weight]]] = {}
        self._edges: set[Pair] = set()
        for e in edges:
            self.add_edge(*e)

    def add_edge(self, u: int, v: int) -> None:
        key = canonical(u, v)
        if key in self._edges:
            return
        w = self.host.weight_of(u, v)
        if self.denom is not None:
            w = int(w * self.denom)
        self._edges.add(key)
        self._adj.setdefault(u, []).append((v, w))
        self._adj.setdefault(v, []).append((u, w))

    def __contains__(self, pair: Pair) -> bool:
        return canonical(*pair) in self._edges

    @property
    def edges(self) -> frozenset[Pair]:
        return frozenset(self._edges)

    def sssp(self, source: int) -> ShortestPaths:
        class _View:
            __slots__ = ("adj",)

            def __init__(self, adj):
                self.adj = adj

            def __getitem__(self, u):
                return self.adj.get(u, ())

        return shortest_paths_adj(_View(self._adj), source, self.denom)

    def distance(self, u: int, v: int) -> Weight:
        return self.sssp(u).distance(v)

    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    def multi_source_distances(self, sources: Iterable[int]) -> dict[int, Weight]:
        """Distance from the nearest source, for every reachable vertex."""
        srcs = [s for s in sources if s in self._adj]
        dist: dict[int, Weight] = {s: 0 for s in srcs}
        heap = [(0, s) for s in sorted(srcs)]
        heapq.heapify(heap)
        settled: set[int] = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in settled:
                continue
            settled.add(u)
            for v, w in self._adj.get(u, ()):
                nd = d + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        if self.denom is None or self.denom == 1:
            return dist
        return {v: Fraction(d, self.denom) for v, d in dist.items()}


@dataclass(frozen=True)
class FixedPath:
    """The fixed shortest path of one vertex pair.

    dist is the true shortest-path distance; max_edge is the heaviest
    edge weight along this specific path (the W(u,v) of the pair).
    """

    endpoints: Pair
    dist: Weight
    vertices: tuple[int, ...]
    max_edge: Weight

    def edge_pairs(self) -> list[Pair]:
        vs = self.vertices
        return [canonical(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]


def _path_from_tree(g: Graph, sp: ShortestPaths, u: int, v: int) -> FixedPath:
    if u == v:
        return FixedPath((u, v), 0, (u,), 0)
    verts = sp.path_to(v)
    if verts[0] != u:
        verts = list(reversed(verts))
    max_edge = max(g.weight_of(a, b) for a, b in zip(verts, verts[1:]))
    return FixedPath((u, v), sp.distance(v), tuple(verts), max_edge)


def fixed_shortest_path(g: Graph, u: int, v: int) -> FixedPath:
    """Fixed (deterministically tie-broken) shortest path from u to v."""
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return FixedPath((u, v), 0, (u,), 0)
    # Canonical source is the smaller endpoint so both orientations of a
    # pair agree on the same undirected path.
    src, dst = canonical(u, v)
    sp = shortest_paths(g, src)
    path = _path_from_tree(g, sp, src, dst)
    if (u, v) != (src, dst):
        path = FixedPath((u, v), path.dist, tuple(reversed(path.vertices)),
                         path.max_edge)
    return path


@dataclass(frozen=True)
class PathTable:
    """Fixed paths for every unordered pair of a terminal set."""

    terminals: frozenset[int]
    pairs: dict[Pair, FixedPath] = field(compare=False)

    def _key(self, u: int, v: int) -> Pair:
        key = canonical(u, v)
        if key not in self.pairs:
            raise InvalidVertexError(f"pair ({u},{v}) not in table")
        return key

    def dist(self, u: int, v: int) -> Weight:
        if u == v:
            return 0
        return self.pairs[self._key(u, v)].dist

    def w(self, u: int, v: int) -> Weight:
        """Max edge weight on the fixed path of the pair: W(u, v)."""
        if u == v:
            return 0
        return self.pairs[self._key(u, v)].max_edge

    def path(self, u: int, v: int) -> FixedPath:
        return self.pairs[self._key(u, v)]

    def pair_keys(self) -> list[Pair]:
        return sorted(self.pairs)


def build_path_table(g: Graph, terminals: Iterable[int]) -> PathTable:
    """One fixed path per unordered terminal pair, bit-identical across runs."""
    ts = sorted(set(terminals))
    if not ts:
        raise InvalidVertexError("terminal set must be nonempty")
    for t in ts:
        g.check_vertex(t)
    pairs: dict[Pair, FixedPath] = {}
    for i, u in enumerate(ts):
        if i == len(ts) - 1:
            break
        sp = shortest_paths(g, u)
        for v in ts[i + 1:]:
            pairs[(u, v)] = _path_from_tree(g, sp, u, v)
    return PathTable(frozenset(ts), pairs)


def _parse_weight(token: str, exact: bool) -> Weight:
    try:
        if exact:
            w = Fraction(token)
            return int(w) if w.denominator == 1 else w
        return float(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad weight {token!r}") from exc


def load_graph(text: str, exact: bool = False) -> Graph:
    """Parse an edge-list document: one "u v w" per line, '#' comments.

    With exact=True weights become rationals parsed from their decimal
    (or p/q) notation, so downstream arithmetic is tolerance-free.
    """
    edges: list[EdgeTuple] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 'u v w', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad vertex id") from exc
        if u < 0 or v < 0:
            raise ParseError(f"line {lineno}: negative vertex id")
        w = _parse_weight(parts[2], exact)
        edges.append((u, v, w))
        max_id = max(max_id, u, v)
    if not edges:
        raise ParseError("no edges in document")
    return Graph.from_edges(max_id + 1, edges)


def load_instance(text: str, exact: bool = False):
    """Parse the JSON instance format.

    Returns (graph, terminals, levels) where levels is None when the
    document has no "levels" field.
    """
    try:
        doc = json.loads(text, parse_float=(Fraction if exact else float))
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise ParseError("instance must be an object with 'n' and 'edges'")
    try:
        n = int(doc["n"])
        edges = [(int(u), int(v), w) for u, v, w in doc["edges"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad edge entry: {exc}") from exc
    g = Graph.from_edges(n, edges)
    terminals = frozenset(int(t) for t in doc.get("terminals", range(n)))
    for t in terminals:
        g.check_vertex(t)
    levels = None
    if doc.get("levels") is not None:
        try:
            levels = {int(k): int(v) for k, v in doc["levels"].items()}
        except (TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"bad levels map: {exc}") from exc
    return g, terminals, levels


def dump_instance(g: Graph, terminals: Iterable[int],
                  levels: dict[int, int] | None = None) -> str:
    doc = {
        "n": g.n,
        "edges": [[u, v, float(w)] for u, v, w in g.edges],
        "terminals": sorted(set(terminals)),
    }
    if levels is not None:
        doc["levels"] = {str(k): v for k, v in sorted(levels.items())}
    return json.dumps(doc)

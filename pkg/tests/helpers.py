"""Shared independent oracles for the test suite.

Everything here is deliberately naive (Floyd-Warshall, exhaustive path
and tree enumeration) so it can double-check the library without sharing
code paths with it.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from lightspan.graph import Graph, canonical


def rand_connected_graph(seed: int, n: int, extra_edges: int,
                         exact: bool = True) -> Graph:
    """Random spanning tree plus extra edges, weights in {8/8 .. 80/8}."""
    rng = random.Random(seed)
    edges: dict = {}
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges[canonical(u, v)] = None
    while len(edges) < min(extra_edges + n - 1, n * (n - 1) // 2):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges[canonical(u, v)] = None
    out = []
    for (u, v) in sorted(edges):
        w = Fraction(rng.randint(8, 80), 8)
        out.append((u, v, w if exact else float(w)))
    return Graph.from_edges(n, out)


def rand_tree(seed: int, n: int, exact: bool = True,
              unit: bool = False) -> Graph:
    rng = random.Random(seed)
    out = []
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        w = 1 if unit else Fraction(rng.randint(8, 80), 8)
        if not exact:
            w = float(w)
        out.append((min(u, v), max(u, v), w))
    return Graph.from_edges(n, out)


def floyd_warshall(g: Graph):
    """All-pairs distances, independent of the library's Dijkstra."""
    inf = float("inf")
    dist = [[0 if i == j else inf for j in range(g.n)] for i in range(g.n)]
    for u, v, w in g.edges:
        if w < dist[u][v]:
            dist[u][v] = dist[v][u] = w
    for k in range(g.n):
        dk = dist[k]
        for i in range(g.n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(g.n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return dist


def all_shortest_paths(g: Graph, u: int, v: int):
    """Every shortest u-v path, as vertex tuples (tiny graphs only)."""
    dist = floyd_warshall(g)
    target = dist[u][v]
    out = []

    def dfs(x, acc, total):
        if x == v:
            if total == target:
                out.append(tuple(acc))
            return
        for y, w in g.adjacency[x]:
            if y in acc:
                continue
            if total + w + dist[y][v] == target:
                dfs(y, acc + [y], total + w)

    dfs(u, [u], 0)
    return out


def tie_break_choice(paths):
    """The documented rule: fewest hops, then reversed-sequence lex order."""
    return min(paths, key=lambda p: (len(p), tuple(reversed(p))))


def enumerate_steiner_optimum(g: Graph, terminals) -> Fraction:
    """Minimum Steiner tree weight by exhaustive edge-subset search."""
    ts = sorted(set(terminals))
    pairs = [canonical(u, v) for u, v, _ in g.edges]
    weights = {canonical(u, v): w for u, v, w in g.edges}
    best = None
    for r in range(len(pairs) + 1):
        if best is not None and r * min(weights.values()) > best:
            break
        for combo in itertools.combinations(pairs, r):
            # connectivity of terminals within the chosen edges
            parent = {}

            def find(x):
                parent.setdefault(x, x)
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for a, b in combo:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
            if all(find(t) == find(ts[0]) for t in ts):
                w = sum(weights[e] for e in combo)
                if best is None or w < best:
                    best = w
    return best


def subgraph_dist(g: Graph, edges, u: int, v: int):
    """Dijkstra-free distance inside an edge subset (Bellman-Ford style)."""
    inf = float("inf")
    dist = {u: 0}
    es = [(a, b, g.weight_of(a, b)) for a, b in edges]
    for _ in range(g.n + len(es)):
        changed = False
        for a, b, w in es:
            da, db = dist.get(a, inf), dist.get(b, inf)
            if da + w < db:
                dist[b] = da + w
                changed = True
            if db + w < da:
                dist[a] = db + w
                changed = True
        if not changed:
            break
    return dist.get(v, inf)

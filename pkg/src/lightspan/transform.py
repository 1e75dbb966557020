"""The scaled and subdivided universe every spanner construction works in.

Starting from a backbone tree H over S', the host graph is rescaled so
that H weighs exactly |V_H|, edges heavier than |V_H| are dropped (they
can never lie on a terminal-pair shortest path), H's scaled edges are
subdivided into unit-or-lighter pieces, and the pieces are spliced into
the scaled graph.  A provenance map carries every spliced edge back to
the original edge of the host so finished spanners can be expressed in
the input graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from .graph import Graph, Pair, UnknownEdgeError, Weight, canonical
from .steiner import Backbone


def _mk_graph(n: int, edges: Iterable[tuple[int, int, Weight]]) -> Graph:
    canon = sorted((canonical(u, v) + (w,) for u, v, w in edges),
                   key=lambda e: (e[0], e[1]))
    return Graph(n, tuple(canon))


@dataclass(frozen=True)
class ScaledInstance:
    """Progressively built scaled universe; immutable at every stage.

    Stages fill in: g_s and h_s (scale), heavy_removed (drop), h_prime
    and subdivision_of (subdivide), g_prime_s and provenance (splice).
    """

    base: Graph
    backbone: Backbone
    sigma: Weight
    g_s: Graph
    h_s: Graph
    heavy_removed: frozenset[Pair] = frozenset()
    h_prime: Graph | None = None
    subdivision_of: dict[Pair, Pair] | None = field(default=None, compare=False)
    g_prime_s: Graph | None = None
    provenance: dict[Pair, Pair] | None = field(default=None, compare=False)

    @property
    def v_h(self) -> int:
        """|V_H|: vertex count of the backbone tree."""
        return len(self.backbone.h.vertices)

    def h_prime_pairs(self) -> frozenset[Pair]:
        return frozenset(canonical(u, v) for u, v, _ in self.h_prime.edges)


def scale_instance(g: Graph, backbone: Backbone) -> ScaledInstance:
    """Multiply all edge weights by sigma = |V_H| / weight(H)."""
    weight_h = backbone.h.weight
    if not weight_h > 0:
        raise ValueError("backbone has zero weight; need at least two terminals")
    n_vh = len(backbone.h.vertices)
    if g.is_exact:
        sigma = Fraction(n_vh) / Fraction(weight_h)
    else:
        sigma = n_vh / weight_h
    g_s = _mk_graph(g.n, ((u, v, w * sigma) for u, v, w in g.edges))
    h_pairs = backbone.h.edges
    h_s = _mk_graph(g.n, ((u, v, w * sigma) for u, v, w in g.edges
                          if canonical(u, v) in h_pairs))
    return ScaledInstance(base=g, backbone=backbone, sigma=sigma,
                          g_s=g_s, h_s=h_s)


def drop_heavy_edges(inst: ScaledInstance) -> ScaledInstance:
    """Remove non-tree edges heavier than |V_H| from the scaled graph.

    The scaled backbone weighs exactly |V_H|, so no terminal-pair
    shortest path can use such an edge; tree edges themselves never
    exceed the threshold and are never candidates.
    """
    threshold = inst.v_h
    tree_pairs = inst.backbone.h.edges
    removed = frozenset(canonical(u, v) for u, v, w in inst.g_s.edges
                        if w > threshold and canonical(u, v) not in tree_pairs)
    if not removed:
        return inst
    g_s = _mk_graph(inst.g_s.n, (e for e in inst.g_s.edges
                                 if canonical(e[0], e[1]) not in removed))
    return replace(inst, g_s=g_s, heavy_removed=removed)


def subdivide_tree(inst: ScaledInstance) -> ScaledInstance:
    """Split each scaled tree edge of weight w into ceil(w) equal pieces.

    ceil(w) - 1 fresh vertices per edge, so every piece weighs at most
    one unit and the subdivision adds at most weight(H_s) = |V_H| new
    vertices in total.
    """
    next_id = inst.base.n
    edges: list[tuple[int, int, Weight]] = []
    sub_of: dict[Pair, Pair] = {}
    for u, v, w in inst.h_s.edges:
        orig = canonical(u, v)
        k = math.ceil(w)
        if k <= 1:
            edges.append((u, v, w))
            sub_of[orig] = orig
            continue
        piece = w / k
        chain = [u] + list(range(next_id, next_id + k - 1)) + [v]
        next_id += k - 1
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b, piece))
            sub_of[canonical(a, b)] = orig
    h_prime = _mk_graph(next_id, edges)
    return replace(inst, h_prime=h_prime, subdivision_of=sub_of)


def splice(inst: ScaledInstance) -> ScaledInstance:
    """Replace the scaled tree edges by their subdivided pieces.

    g'_s keeps every surviving non-tree edge of g_s plus all of H'.
    Distances between original vertices are unchanged; terminal-pair
    distances equal those of the unscaled graph times sigma.
    """
    if inst.h_prime is None:
        raise ValueError("subdivide_tree must run before splice")
    tree_pairs = inst.backbone.h.edges
    edges: list[tuple[int, int, Weight]] = []
    provenance: dict[Pair, Pair] = {}
    for u, v, w in inst.g_s.edges:
        pair = canonical(u, v)
        if pair in tree_pairs:
            continue
        edges.append((u, v, w))
        provenance[pair] = pair
    for u, v, w in inst.h_prime.edges:
        pair = canonical(u, v)
        edges.append((u, v, w))
        provenance[pair] = inst.subdivision_of[pair]
    g_prime_s = _mk_graph(inst.h_prime.n, edges)
    return replace(inst, g_prime_s=g_prime_s, provenance=provenance)


def map_back(inst: ScaledInstance, edges: Iterable[Pair]) -> frozenset[Pair]:
    """Translate g'_s edges to their originating edges of the host graph.

    Any selected piece of a subdivided edge restores the whole original
    edge, which can only shorten distances in the mapped subgraph.
    """
    if inst.provenance is None:
        raise ValueError("splice must run before map_back")
    out: set[Pair] = set()
    for e in edges:
        pair = canonical(*e)
        if pair not in inst.provenance:
            raise UnknownEdgeError(f"edge {pair} not in g'_s")
        out.add(inst.provenance[pair])
    return frozenset(out)


def scaled_universe(g: Graph, backbone: Backbone) -> ScaledInstance:
    """Run the full transform pipeline: scale, drop, subdivide, splice."""
    return splice(subdivide_tree(drop_heavy_edges(scale_instance(g, backbone))))

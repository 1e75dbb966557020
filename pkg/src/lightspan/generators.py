"""Seeded instance generators for experiments and acceptance runs.

All randomness flows through integer-seeded random.Random instances so
identical specs reproduce identical graphs; retry attempts derive their
seed arithmetically (never via hashing, which is process-randomized).
Weights are quantized to eighths (geometric distances to 1/1024) so the
exact and binary64 regimes describe the same instance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, GraphError, Weight

KINDS = ("erdos-renyi", "geometric", "grid", "unit-clique", "partition-gadget")
MAX_RETRIES = 50


class GenerationError(GraphError):
    """Generator could not produce a connected instance within retries."""


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int = 0
    p: float | None = None            # erdos-renyi edge probability
    radius: float | None = None       # geometric connection radius
    weight_range: tuple[int, int] = (1, 10)
    terminal_fraction: float = 0.25
    delta: Weight = Fraction(1, 10)   # partition-gadget within-side surcharge
    subdivided: bool = False          # partition-gadget: once-subdivided variant
    levels_k: int | None = None       # attach a level map for multi-level runs
    exact: bool = True
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise GenerationError(f"unknown generator kind {self.kind!r}")
        if self.n < 2:
            raise GenerationError("need at least two vertices")
        lo, hi = self.weight_range
        if not (0 < lo <= hi):
            raise GenerationError("weight range must be positive and ordered")
        if not 0 < self.terminal_fraction <= 1:
            raise GenerationError("terminal fraction must lie in (0, 1]")

    @property
    def label(self) -> str:
        return self.name or f"{self.kind}-n{self.n}-s{self.seed}"


def _weight(rng: random.Random, spec: GeneratorSpec) -> Weight:
    lo, hi = spec.weight_range
    k = rng.randint(8 * lo, 8 * hi)
    return Fraction(k, 8) if spec.exact else k / 8


def _quantized_distance(d: float, exact: bool) -> Weight:
    k = max(1, round(1024 * d))
    return Fraction(k, 1024) if exact else k / 1024


def _try_erdos_renyi(rng: random.Random, spec: GeneratorSpec):
    # default density safely above the ln(n)/n connectivity threshold
    p = spec.p if spec.p is not None else min(1.0, 1.7 * math.log(spec.n) / spec.n)
    edges = []
    for u in range(spec.n):
        for v in range(u + 1, spec.n):
            if rng.random() < p:
                edges.append((u, v, _weight(rng, spec)))
    return spec.n, edges


def _try_geometric(rng: random.Random, spec: GeneratorSpec):
    r = spec.radius if spec.radius is not None else 1.8 / math.sqrt(spec.n)
    pts = [(rng.random(), rng.random()) for _ in range(spec.n)]
    edges = []
    for u in range(spec.n):
        for v in range(u + 1, spec.n):
            d = math.hypot(pts[u][0] - pts[v][0], pts[u][1] - pts[v][1])
            if d <= r:
                edges.append((u, v, _quantized_distance(d, spec.exact)))
    return spec.n, edges


def _try_grid(rng: random.Random, spec: GeneratorSpec):
    rows = max(1, math.isqrt(spec.n))
    cols = math.ceil(spec.n / rows)
    edges = []
    for vid in range(spec.n):
        r, c = divmod(vid, cols)
        right = vid + 1
        down = vid + cols
        if c + 1 < cols and right < spec.n:
            edges.append((vid, right, _weight(rng, spec)))
        if down < spec.n:
            edges.append((vid, down, _weight(rng, spec)))
    return spec.n, edges


def _unit_clique(spec: GeneratorSpec):
    edges = [(u, v, 1) for u in range(spec.n) for v in range(u + 1, spec.n)]
    return spec.n, edges


def _partition_gadget(spec: GeneratorSpec):
    """The 2n-clique whose crossing edges (weight 2) undercut the
    within-side edges (weight 2 + delta); n here is the side size."""
    side = spec.n
    two: Weight = Fraction(2) if spec.exact else 2.0
    inner: Weight = (2 + Fraction(spec.delta)) if spec.exact else float(2 + spec.delta)
    edges = []
    total = 2 * side
    for u in range(total):
        for v in range(u + 1, total):
            crossing = (u < side) != (v < side)
            edges.append((u, v, two if crossing else inner))
    if not spec.subdivided:
        return total, edges, total
    mid = total
    out = []
    for u, v, w in edges:
        out.append((u, mid, w / 2))
        out.append((mid, v, w / 2))
        mid += 1
    return mid, out, total


def _terminals(rng: random.Random, spec: GeneratorSpec, n_terminals_from: int):
    size = max(2, round(spec.terminal_fraction * n_terminals_from))
    size = min(size, n_terminals_from)
    return frozenset(rng.sample(range(n_terminals_from), size))


def _levels(rng: random.Random, spec: GeneratorSpec,
            terminals: frozenset[int]) -> dict[int, int] | None:
    if spec.levels_k is None:
        return None
    k = spec.levels_k
    levels = {t: rng.randint(1, k) for t in sorted(terminals)}
    if not any(lvl == k for lvl in levels.values()):
        top = rng.choice(sorted(terminals))
        levels[top] = k
    return levels


def generate(spec: GeneratorSpec):
    """Produce (graph, terminals, levels) for a spec, deterministically.

    Disconnected draws are retried with arithmetically derived seeds; a
    GenerationError reports retry exhaustion.
    """
    if spec.kind == "unit-clique":
        n, edges = _unit_clique(spec)
        g = Graph.from_edges(n, edges)
        return g, frozenset(range(n)), None
    if spec.kind == "partition-gadget":
        n, edges, n_orig = _partition_gadget(spec)
        g = Graph.from_edges(n, edges)
        return g, frozenset(range(n_orig)), None

    builders = {
        "erdos-renyi": _try_erdos_renyi,
        "geometric": _try_geometric,
        "grid": _try_grid,
    }
    build = builders[spec.kind]
    for attempt in range(MAX_RETRIES):
        rng = random.Random(spec.seed * 1009 + attempt)
        n, edges = build(rng, spec)
        try:
            g = Graph.from_edges(n, edges)
        except GraphError:
            continue
        terminals = _terminals(rng, spec, n)
        return g, terminals, _levels(rng, spec, terminals)
    raise GenerationError(
        f"no connected draw for {spec.label} in {MAX_RETRIES} attempts")

"""Ground truth: exact spanner verification, subset-lightness against
Steiner lower bounds, and exhaustive optima at tiny scale.

Everything here that claims optimality (the exact_* operations) insists
on rational weights; binary64 inputs are rejected so that no optimality
statement ever rests on a tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import (
    Beta,
    Graph,
    GraphError,
    NonExactArithmeticError,
    Pair,
    PathTable,
    SubgraphAdjacency,
    Weight,
    build_path_table,
    canonical,
)
from .steiner import (
    Backbone,
    exact_steiner,
    _is_tree_graph,
    _steiner_subtree_of_tree,
)

EXACT_ONE_LEVEL_MAX_EDGES = 20
EXACT_MULTILEVEL_MAX_EDGES = 12
EXACT_MULTILEVEL_MAX_LEVELS = 3
# Cap on the Dreyfus-Wagner work 3^(t-1) * n accepted inside
# subset_lightness before it falls back to the approximate tree.
_EXACT_LIGHTNESS_BUDGET = 600_000


class InstanceTooLargeError(GraphError):
    """Input exceeds the exhaustive-search caps."""


@dataclass(frozen=True)
class Violation:
    pair: Pair
    d_g: Weight
    d_h: Weight
    allowed: Weight
    excess: Weight


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    violations: tuple[Violation, ...]
    max_excess: Weight

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "max_excess": float(self.max_excess),
            "violations": [
                {
                    "pair": list(v.pair),
                    "d_g": float(v.d_g),
                    "d_h": float(v.d_h),
                    "allowed": float(v.allowed),
                    "excess": float(v.excess),
                }
                for v in self.violations
            ],
        }


def _excess(d_h: Weight, allowed: Weight) -> Weight:
    if d_h == math.inf:
        return math.inf
    return d_h - allowed


def verify_spanner(g: Graph, terminals: Iterable[int], edges: Iterable[Pair],
                   beta: Beta, rel_tol: float = 0.0) -> VerificationReport:
    """Check d_H(u,v) <= d_G(u,v) + slack for every terminal pair.

    rel_tol = 0 gives the exact check (mandatory in rational mode);
    binary64 callers pass a small relative tolerance such as 1e-9.
    """
    ts = sorted(set(terminals))
    for t in ts:
        g.check_vertex(t)
    sub = SubgraphAdjacency(g, edges)  # raises UnknownEdgeError on foreign edges
    if len(ts) < 2:
        return VerificationReport(True, (), 0)
    table = build_path_table(g, ts)
    w_max = g.w_max
    violations: list[Violation] = []
    for i, u in enumerate(ts[:-1]):
        sp = sub.sssp(u)
        for v in ts[i + 1:]:
            d_g = table.dist(u, v)
            allowed = d_g + beta.slack(table.w(u, v), w_max)
            d_h = sp.distance(v)
            excess = _excess(d_h, allowed)
            margin = rel_tol * max(1.0, abs(float(allowed))) if rel_tol else 0
            if excess > margin:
                violations.append(Violation((u, v), d_g, d_h, allowed, excess))
    violations.sort(key=lambda x: x.pair)
    max_excess = max((v.excess for v in violations), default=0)
    return VerificationReport(not violations, tuple(violations), max_excess)


@dataclass(frozen=True)
class LightnessResult:
    """Subset-lightness with the provenance of its denominator."""

    ratio: Weight | None
    mode: str  # "exact" | "approx" | "degenerate"
    steiner_weight: Weight


def subset_lightness(g: Graph, backbone: Backbone,
                     spanner_weight: Weight) -> LightnessResult:
    """Spanner weight over the weight of the Steiner tree on S u S*.

    The denominator is exact (Dreyfus-Wagner, or the minimal subtree for
    tree hosts) whenever that is affordable, otherwise the backbone's
    2-approximate tree T with the mode recorded.
    """
    s_prime = backbone.s_prime
    t = len(s_prime)
    if _is_tree_graph(g):
        denom = _steiner_subtree_of_tree(g, sorted(s_prime)).weight
        mode = "exact"
    elif (g.is_exact and t <= 12
          and 3 ** max(t - 1, 0) * g.n <= _EXACT_LIGHTNESS_BUDGET):
        denom = exact_steiner(g, s_prime).weight
        mode = "exact"
    else:
        denom = backbone.t.weight
        mode = "approx"
    if not denom > 0:
        return LightnessResult(None, "degenerate", denom)
    if isinstance(spanner_weight, float) or isinstance(denom, float):
        ratio: Weight = spanner_weight / denom
    else:
        ratio = Fraction(spanner_weight) / Fraction(denom)
    return LightnessResult(ratio, mode, denom)


class _PairChecker:
    """Reusable exact condition checks against one (graph, terminals, beta)."""

    def __init__(self, g: Graph, terminals: Iterable[int], beta: Beta) -> None:
        self.g = g
        self.ts = sorted(set(terminals))
        self.beta = beta
        self.table: PathTable = build_path_table(g, self.ts)
        w_max = g.w_max
        self.allowed = {
            (u, v): self.table.dist(u, v) + beta.slack(self.table.w(u, v), w_max)
            for i, u in enumerate(self.ts[:-1]) for v in self.ts[i + 1:]
        }

    def feasible(self, edges: Iterable[Pair]) -> bool:
        sub = SubgraphAdjacency(self.g, edges)
        for i, u in enumerate(self.ts[:-1]):
            sp = sub.sssp(u)
            for v in self.ts[i + 1:]:
                if sp.distance(v) > self.allowed[(u, v)]:
                    return False
        return True


def _require_exact(g: Graph) -> None:
    if not g.is_exact:
        raise NonExactArithmeticError(
            "exact oracles require rational edge weights")


def _connects(edge_list: list[Pair], active: int, terminals: list[int]) -> bool:
    """Union-find check that the selected+undecided edges can join terminals."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for idx, (u, v) in enumerate(edge_list):
        if active & (1 << idx):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[rv] = ru
    root = find(terminals[0])
    return all(find(t) == root for t in terminals[1:])


def exact_one_level(g: Graph, terminals: Iterable[int],
                    beta: Beta) -> frozenset[Pair]:
    """Minimum-total-weight edge subset satisfying the spanner condition.

    Weight-ordered depth-first subset search; a branch is pruned as soon
    as its committed weight reaches the incumbent or it can no longer
    connect the terminals.
    """
    _require_exact(g)
    if len(g.edges) > EXACT_ONE_LEVEL_MAX_EDGES:
        raise InstanceTooLargeError(
            f"{len(g.edges)} edges exceed the cap {EXACT_ONE_LEVEL_MAX_EDGES}")
    ts = sorted(set(terminals))
    for t in ts:
        g.check_vertex(t)
    if len(ts) < 2:
        return frozenset()
    checker = _PairChecker(g, ts, beta)
    ordered = sorted(g.edges, key=lambda e: (e[2], e[0], e[1]), reverse=True)
    pairs = [canonical(u, v) for u, v, _ in ordered]
    weights = [w for _, _, w in ordered]
    m = len(pairs)
    full = (1 << m) - 1

    best_weight = g.total_weight
    best_set = frozenset(pairs)

    def dfs(idx: int, cur_weight: Weight, chosen_mask: int) -> None:
        nonlocal best_weight, best_set
        if cur_weight >= best_weight:
            return
        if idx == m:
            edges = [pairs[i] for i in range(m) if chosen_mask >> i & 1]
            if checker.feasible(edges):
                best_weight = cur_weight
                best_set = frozenset(edges)
            return
        # Exclude this edge first so light subsets are explored early,
        # but only if the terminals can still be connected without it.
        undecided_after = full & ~((1 << (idx + 1)) - 1)
        if _connects(pairs, chosen_mask | undecided_after, ts):
            dfs(idx + 1, cur_weight, chosen_mask)
        dfs(idx + 1, cur_weight + weights[idx], chosen_mask | (1 << idx))

    dfs(0, 0, 0)
    return best_set


@dataclass(frozen=True)
class ExactMultiLevel:
    edge_sets: tuple[frozenset[Pair], ...]  # E_1 down to E_k, nested
    cost: Weight


def exact_multilevel(inst) -> ExactMultiLevel:
    """Minimum-cost nested edge sets, exhaustive over per-edge top levels.

    Each edge is assigned a top level; E_i collects the edges of top
    level >= i, which makes the nesting automatic, and the cost equals
    the sum over levels of weight(E_i).  A subset-minimum dynamic program
    over edge masks finds the optimum.
    """
    g: Graph = inst.g
    _require_exact(g)
    k: int = inst.k
    if len(g.edges) > EXACT_MULTILEVEL_MAX_EDGES or k > EXACT_MULTILEVEL_MAX_LEVELS:
        raise InstanceTooLargeError(
            f"exact multilevel capped at {EXACT_MULTILEVEL_MAX_EDGES} edges "
            f"and {EXACT_MULTILEVEL_MAX_LEVELS} levels")
    pairs = [canonical(u, v) for u, v, _ in g.edges]
    weights = [w for _, _, w in g.edges]
    m = len(pairs)
    n_masks = 1 << m
    mask_weight: list[Weight] = [0] * n_masks
    for mask in range(1, n_masks):
        low = mask & -mask
        mask_weight[mask] = mask_weight[mask ^ low] + weights[low.bit_length() - 1]

    checkers: dict[frozenset[int], _PairChecker] = {}
    feas_cache: dict[tuple[int, frozenset[int]], bool] = {}

    def feasible(mask: int, terms: frozenset[int]) -> bool:
        key = (mask, terms)
        if key in feas_cache:
            return feas_cache[key]
        edge_list = [pairs[i] for i in range(m) if mask & (1 << i)]
        ts = sorted(terms)
        ok = len(ts) < 2 or (_connects(edge_list, (1 << len(edge_list)) - 1, ts)
                             and _checker(terms).feasible(edge_list))
        feas_cache[key] = ok
        return ok

    def _checker(terms: frozenset[int]) -> _PairChecker:
        if terms not in checkers:
            checkers[terms] = _PairChecker(g, terms, inst.condition)
        return checkers[terms]

    INFW = math.inf
    level_terms = [inst.terminal_set(i) for i in range(1, k + 1)]

    # cost_up[A] = cheapest cost of levels i..k when E_i = A, computed
    # top-down; the subset-minimum transform propagates the best nested
    # choice from the level above.
    cost_up: list[Weight] = [
        mask_weight[mask] if feasible(mask, level_terms[k - 1]) else INFW
        for mask in range(n_masks)
    ]
    choice: list[list[int]] = []
    for i in range(k - 1, 0, -1):
        best = list(cost_up)
        arg = list(range(n_masks))
        for b in range(m):
            bit = 1 << b
            for mask in range(n_masks):
                if mask & bit and best[mask ^ bit] < best[mask]:
                    best[mask] = best[mask ^ bit]
                    arg[mask] = arg[mask ^ bit]
        nxt: list[Weight] = []
        for mask in range(n_masks):
            if best[mask] < INFW and feasible(mask, level_terms[i - 1]):
                nxt.append(mask_weight[mask] + best[mask])
            else:
                nxt.append(INFW)
        cost_up = nxt
        choice.append(arg)

    best_mask = min(range(n_masks), key=lambda mk: (cost_up[mk], mk))
    if cost_up[best_mask] == INFW:
        raise GraphError("no feasible multilevel solution (disconnected host?)")
    masks = [best_mask]
    for arg in reversed(choice):
        masks.append(arg[masks[-1]])
    edge_sets = tuple(
        frozenset(pairs[i] for i in range(m) if mask & (1 << i))
        for mask in masks
    )
    return ExactMultiLevel(edge_sets, cost_up[best_mask])

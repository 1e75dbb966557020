"""The two deterministic constructions side by side.

The +eps*W(.,.) spanner seeds the greedy loop with one sub-unit edge per
S' vertex; the +(4+eps)*W(.,.) spanner instead buys a weight budget
d = |V_H|^(4/3) / |S|^(2/3) of cheap edges around every terminal and
tolerates four extra W of detour.  Both then process pairs by increasing
fixed-path max edge weight and patch any pair whose detour exceeds its
allowance.  Every output is certified pair by pair.
"""

import itertools
from fractions import Fraction

from lightspan import (
    EpsilonSplit,
    GeneratorSpec,
    Graph,
    eps_spanner,
    four_eps_spanner,
    generate,
)

split = EpsilonSplit.of(Fraction(1, 2))
g, terminals, _ = generate(GeneratorSpec("geometric", 40, seed=4,
                                         terminal_fraction=0.2))
print(f"geometric instance: n = {g.n}, m = {len(g.edges)}, "
      f"|S| = {len(terminals)}")

for name, build in (("+eps*W", eps_spanner), ("+(4+eps)*W", four_eps_spanner)):
    sp = build(g, terminals, split)
    print(f"\n{name} spanner (eps = {split.eps}):")
    print(f"  edges {len(sp.edges)}, weight {float(sp.weight):.3f}, "
          f"subset-lightness {float(sp.subset_lightness):.3f} "
          f"[{sp.meta['lightness_mode']}]")
    print(f"  greedy insertions: {sp.meta['insertions']}, "
          f"seed edges: {sp.meta['h0_edges']}")
    worst = max(sp.pair_report.items(),
                key=lambda kv: float(kv[1].d_h - kv[1].d_g))
    (u, v), chk = worst
    print(f"  loosest pair ({u},{v}): d_H = {float(chk.d_h):.3f} vs "
          f"d_G + slack = {float(chk.d_g + chk.slack):.3f}")

# Tightness: on a unit clique with S = V and eps <= 1 every edge is
# forced (any detour has length 2 > 1 + eps), so lightness is n/2.
print("\nunit cliques force all edges; subset-lightness = n/2:")
for n in (6, 10, 14):
    k = Graph.from_edges(
        n, [(u, v, 1) for u, v in itertools.combinations(range(n), 2)])
    sp = eps_spanner(k, range(n), split)
    print(f"  K_{n}: edges {len(sp.edges)}, lightness {sp.subset_lightness}")

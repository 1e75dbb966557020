"""Multi-level spanners: nested edge sets, rounding, and the e vs 4 story.

Terminal levels are rounded up onto a geometric grid p^(q+i); one
single-level spanner is built per distinct rounded level and merged
downward.  With p = 2 and q = 1 this is the deterministic
4-approximation; drawing q uniformly from (0, 1] and taking p = e brings
the expected ratio down to e ~ 2.718.  On tiny instances we can compare
against the exhaustive optimum.
"""

import math
import random
import statistics
from fractions import Fraction

from lightspan import (
    Beta,
    GeneratorSpec,
    MultiLevelInstance,
    exact_multilevel,
    exact_one_level,
    four_approx_baseline,
    generate,
    rounding_cost_ratio,
    rounding_ratio_analytic,
    solve_multilevel,
)
from lightspan.multilevel import _solve_with_q

condition = Beta("relative", Fraction(1, 2))

# expected rounding inflation: (p-1)/ln p, minimized overall at p = e
print("rounding-cost inflation, Monte-Carlo vs analytic:")
for p in (2.0, math.e, 4.0):
    est = rounding_cost_ratio(p, trials=20_000, seed=3)
    print(f"  p = {p:5.3f}: {est.mean:.4f} vs {rounding_ratio_analytic(p):.4f}")
print(f"  overall ratio p/ln p at p=e: {math.e / math.log(math.e):.4f} = e")

# a tiny instance where the optimum is computable exactly
g, terminals, _ = generate(GeneratorSpec("grid", 6, seed=9,
                                         terminal_fraction=1.0))
levels = {t: 1 + (i % 3) for i, t in enumerate(sorted(terminals))}
levels[sorted(terminals)[0]] = 3
inst = MultiLevelInstance(g, levels, 3, condition)
print(f"\ntiny instance: n = {g.n}, m = {len(g.edges)}, levels = {levels}")

cache = {}


def exact_oracle(graph, terms):
    key = frozenset(terms)
    if key not in cache:
        cache[key] = exact_one_level(graph, terms, condition)
    return cache[key]


opt = exact_multilevel(inst)
print(f"exhaustive optimum: cost {opt.cost}")

base = four_approx_baseline(inst, exact_oracle)
print(f"4-approx baseline (grid {base.rounded_levels}): cost {base.cost} "
      f"<= 4 x {opt.cost}")

rng = random.Random(17)
costs = []
for _ in range(2000):
    q = rng.random() or rng.random()
    costs.append(float(_solve_with_q(inst, exact_oracle, math.e, q).cost))
mean = statistics.fmean(costs)
print(f"randomized rounding, 2000 draws of q: mean cost {mean:.3f} "
      f"(e x OPT = {math.e * float(opt.cost):.3f})")

sol = solve_multilevel(inst, exact_oracle, seed=1)
print(f"\none sampled solution (q = {sol.q_used:.3f}, "
      f"grid {tuple(round(v, 3) for v in sol.rounded_levels)}):")
for i, es in enumerate(sol.edge_sets, start=1):
    print(f"  level {i}: {len(es)} edges, "
          f"weight {float(sum(g.weight_of(u, v) for u, v in es)):.2f}")
print(f"  nesting holds: {sol.nesting_ok}; total cost {sol.cost}")

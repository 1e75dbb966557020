"""Fixed shortest paths and the per-pair max-edge metric W(., .).

Every spanner condition in this library is of the form
    d_H(u, v) <= d_G(u, v) + beta * W
where W is either W(u, v), the heaviest edge on the *fixed* shortest
path of the pair, or W_max, the heaviest edge anywhere.  This script
shows how paths are fixed deterministically and what W looks like.
"""

from fractions import Fraction

from lightspan import build_path_table, fixed_shortest_path, load_graph

EDGES = """
# a small weighted graph; ids: a=0 b=1 c=2 d=3 x=4 y=5
0 4 10
4 1 10
1 5 20
5 2 20
0 3 7
3 2 35
"""

g = load_graph(EDGES, exact=True)
print(f"graph: {g.n} vertices, {len(g.edges)} edges, W_max = {g.w_max}")

p = fixed_shortest_path(g, 0, 2)
print(f"\nfixed path 0 -> 2: {' -> '.join(map(str, p.vertices))}")
print(f"  distance d(0,2)  = {p.dist}")
print(f"  max edge W(0,2)  = {p.max_edge}")

print("\nW table over terminals {0, 1, 2}:")
table = build_path_table(g, [0, 1, 2])
for (u, v) in table.pair_keys():
    print(f"  pair ({u},{v}): d = {table.dist(u, v):>4}, "
          f"W = {table.w(u, v):>4}, path = {table.path(u, v).vertices}")

# Tie-breaking: two equally short routes around a square. The fixed path
# prefers fewer hops, then the smallest predecessor at every step, so
# the choice below is always 0 -> 1 -> 2, never 0 -> 3 -> 2.
square = load_graph("0 1 1\n1 2 1\n0 3 1\n3 2 1", exact=True)
print("\nunit square, two shortest 0->2 routes; the deterministic winner:")
print(" ", fixed_shortest_path(square, 0, 2).vertices)

# The slack budget a +0.5*W(.,.) condition grants each pair:
eps = Fraction(1, 2)
print(f"\nper-pair allowance at eps = {eps}:")
for (u, v) in table.pair_keys():
    print(f"  ({u},{v}): d + eps*W = {table.dist(u, v)} + "
          f"{eps * table.w(u, v)} = {table.dist(u, v) + eps * table.w(u, v)}")

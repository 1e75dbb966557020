"""Lightness scaling: the guarantee is O_eps(|S|), practice is far below.

Runs the shipped trend configuration (Erdos-Renyi and geometric families
at fixed n, growing |S|), certifies every row, and prints lightness and
lightness/|S| per family.  The theory caps subset-lightness at a
constant times |S|; on random instances the measured curve divided by
|S| falls well below that and keeps decreasing.
"""

from lightspan.bench import emit_csv, run_experiment, trend_config, trend_curve

config = trend_config()
print(f"running {len(config['instances'])} instances x "
      f"{config['algorithms']} at eps = {config['epsilon']} ...")
rows = run_experiment(config)
print(f"{len(rows)} certified rows (all ok = {all(r.ok for r in rows)})\n")

for family, pts in trend_curve(rows).items():
    print(family)
    print("  |S|   lightness   lightness/|S|")
    for s, light in pts:
        print(f"  {s:3d}   {light:9.3f}   {light / s:13.4f}")
    print()

print("first CSV rows of the emitted table:")
print("\n".join(emit_csv(rows).splitlines()[:4]))

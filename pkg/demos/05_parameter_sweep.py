"""Cost and fidelity as the sampling step and bin count vary.

A smaller version of what ``fastce sweep`` writes to CSV.

Run: python3 demos/05_parameter_sweep.py
"""

from _common import out_path
from fastce import bench

images = bench.synthetic_corpus(4, 1024, 768, seed=7)
config = bench.SweepConfig(
    s_values=[1, 4, 8, 16], n_g_values=[256, 64, 32], algorithms=["fhe", "fsmirank"],
    repetitions=3, warmup=1,
)
records = bench.run_sweep(config, images)
bench.write_csv(records, out_path("sweep.csv"))

print(f"{'algorithm':<9} {'s':>3} {'ng':>4} {'ms':>8} {'speedup':>8} {'mean diff':>9}")
for row in bench.summarize(records):
    if row.speedup is None:
        continue
    print(f"{row.algorithm:<9} {row.s:>3} {row.n_g:>4} {row.mean_time_us / 1e3:>8.2f} "
          f"{row.speedup:>8.2f} {row.mean_abs_diff:>9.3f}")
for warning in bench.trend_warnings(records):
    print("note:", warning)
print(f"{len(records)} rows written to {out_path('sweep.csv')}")

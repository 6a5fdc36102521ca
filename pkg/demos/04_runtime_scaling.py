"""Runtime growth of the truncated pipeline against the full baseline.

Times the SL pipeline (truncated BFS + windowed SGD) and the baseline's
all-pairs distance phase on constant-degree graphs of doubling size, then
fits log-log slopes. Expect the SL pipeline near slope 1 (linear) and the
all-pairs phase near slope 2.

Run:  python3 demos/04_runtime_scaling.py          (~2 minutes)
"""

import time

import graph_umap as gu

sizes = [1000, 2000, 4000, 8000]
cfg = gu.OptimizerConfig(iterations=200, k=15, seed=0)

# warm the compiled kernels so the first data point is not compile time
warm = gu.synth_graph("random_regular", 64, seed=0, d=8)
gu.run_sl_gumap(warm, gu.OptimizerConfig(iterations=5, k=5, seed=0))
gu.all_pairs_bfs(warm)

sl_times, apsp_times = [], []
print(f"{'n':>7}{'SL total (s)':>14}{'all-pairs (s)':>15}")
for n in sizes:
    g = gu.synth_graph("random_regular", n, seed=1, d=8)

    t0 = time.perf_counter()
    gu.run_sl_gumap(g, cfg)
    sl_times.append(time.perf_counter() - t0)

    t0 = time.perf_counter()
    gu.all_pairs_bfs(g)
    apsp_times.append(time.perf_counter() - t0)

    print(f"{n:>7}{sl_times[-1]:>14.2f}{apsp_times[-1]:>15.2f}")

print(f"\nSL pipeline slope:   {gu.loglog_slope(sizes, sl_times):.2f}")
print(f"all-pairs BFS slope: {gu.loglog_slope(sizes, apsp_times):.2f}")

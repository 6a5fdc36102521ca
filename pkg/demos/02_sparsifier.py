"""Effective resistance and the spectral sparsifier, step by step.

Effective resistance treats the graph as a network of unit resistors; an
edge with resistance near 1 is structurally critical (a near-bridge), one
near 0 has many parallel alternatives. The sparsifier keeps a maximum
spanning tree under those weights plus the highest-resistance extras until
n*log2(n) edges remain.

Run:  python3 demos/02_sparsifier.py
"""

import numpy as np

import graph_umap as gu

g = gu.synth_graph("scale_free", 400, seed=1, m0=10)
print(f"graph: n={g.n} m={g.m}, sparsifier target = "
      f"{gu.sparsifier_target(g.n, g.m)} edges")

res = gu.effective_resistance_exact(g)
r = res.values
print(f"resistance range: [{r.min():.4f}, {r.max():.4f}]")
print(f"Foster's identity: sum r_e = {r.sum():.6f} (n - 1 = {g.n - 1})")

g_prime = gu.sparsify(g, res)
print(f"sparsified: m' = {g_prime.m}, connected = {g_prime.is_connected()}")

# the randomized sketch agrees with the exact values
approx = gu.effective_resistance_approx(g, epsilon=0.3, seed=0)
rel = np.abs(approx.values - r) / r
print(f"sketch vs exact: median rel err {np.median(rel):.4f}, "
      f"95th percentile {np.percentile(rel, 95):.4f}")

# dropping low-resistance edges barely moves the kNN structure: compare a
# layout of the sparsifier against a layout of the full graph
cfg = gu.OptimizerConfig(iterations=200, k=10, seed=3)
lay_full, _ = gu.run_gumap(g, cfg)
lay_sparse, _ = gu.run_ss_gumap(g, cfg, g_prime=g_prime)
m_full = gu.compute_metrics(g, lay_full, which=("np", "stress"))
m_sparse = gu.compute_metrics(g, lay_sparse, which=("np", "stress"))
print(f"full graph layout:   np {m_full.neighborhood_preservation:.3f}, "
      f"stress {m_full.stress:.3f}")
print(f"sparsifier layout:   np {m_sparse.neighborhood_preservation:.3f}, "
      f"stress {m_sparse.stress:.3f}")

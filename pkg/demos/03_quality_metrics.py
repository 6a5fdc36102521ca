"""What the four quality metrics reward and punish.

Scores three drawings of the same 10x10 mesh: the exact grid positions, an
optimized layout, and a random scatter.

Run:  python3 demos/03_quality_metrics.py
"""

import numpy as np

import graph_umap as gu
from graph_umap import Layout

n_side = 10
g = gu.synth_graph("grid", n_side * n_side, seed=0)

ideal = Layout(coords=np.array(
    [[v % n_side, v // n_side] for v in range(g.n)], dtype=float
))
optimized, _ = gu.run_gumap(g, gu.OptimizerConfig(iterations=300, k=8, seed=1))
scatter = gu.random_init(g, seed=2)

print(f"{'drawing':<12}{'np':>8}{'stress':>9}{'crossings':>11}{'shape':>8}")
for name, layout in (("ideal", ideal), ("optimized", optimized),
                     ("random", scatter)):
    m = gu.compute_metrics(g, layout)
    print(f"{name:<12}{m.neighborhood_preservation:>8.3f}{m.stress:>9.3f}"
          f"{m.crossings:>11d}{m.shape_jaccard:>8.3f}")

print()
print("improvement of the optimized drawing over the random baseline:")
m_opt = gu.compute_metrics(g, optimized)
m_rnd = gu.compute_metrics(g, scatter)
print(f"  stress:    {gu.improvement(m_rnd.stress, m_opt.stress):+.1%}")
print(f"  crossings: {gu.improvement(m_rnd.crossings, m_opt.crossings):+.1%}")
print(f"  np:        {gu.improvement(m_rnd.neighborhood_preservation, m_opt.neighborhood_preservation, higher_is_better=True):+.1%}")
print(f"  shape:     {gu.improvement(m_rnd.shape_jaccard, m_opt.shape_jaccard, higher_is_better=True):+.1%}")

"""
Searching for harmonic metrics on solvable algebras
===================================================

Multi-start descent over left-invariant metrics.  Every harmonic metric
found so far on a solvable algebra turned out to be Ricci-parallel.
"""

import numpy as np

from harmonic_lie import catalog, probe

rng = np.random.default_rng(2026)
algebras = [catalog.random_solvable(rng, 5) for _ in range(8)]
algebras.append(catalog.hyperbolic_solvable(4))
algebras.append(catalog.heisenberg3())

config = probe.ProbeConfig(seed=1, restarts=8)
results, counts = probe.sweep(algebras, config)
for alg, res in zip(algebras, results):
    print(f"dim {alg.dim}: {res.classification:32s} defect {res.defect:.1e}  |nabla Ric| {res.parallel_norm:.1e}")
print(counts)

# the best metric found on the hyperbolic algebra is Einstein
best = results[-2]
m = probe.metric_from_parameters(catalog.hyperbolic_solvable(4), probe.unit_volume(best.best_params, 4))
print("Ricci eigenvalues:", np.round(np.linalg.eigvals(m.ricci_matrix).real, 8))

"""
Ricci curvature, harmonic curvature and the eigenspace test
===========================================================

Two routes to the Ricci operator, and the link between the curvature
divergence, the Codazzi defect of Ric and the eigenspace conditions.
"""

import numpy as np

from harmonic_lie import catalog, geometry as geo, structure as st

rng = np.random.default_rng(0)

# Koszul formula versus R - B/2 - S(ad_H) on a random metric Lie algebra
alg = catalog.random_lie_algebra(rng, 6)
m = catalog.random_metric(rng, alg)
gap = np.abs(geo.ricci(m).matrix - geo.ricci_structure_formula(m).matrix).max()
print(f"dim {m.dim}: two Ricci formulas differ by {gap:.1e}")

# closed forms
for name in ("heisenberg3", "su2_biinvariant", "sl2r"):
    fx = catalog.named(name)
    print(name, "Ric diagonal:", [str(x) for x in np.diag(geo.ricci(fx).matrix)])

# the round sphere is harmonic, a Berger sphere is not
for label, g in (("round", np.eye(3)), ("Berger", np.diag([1.0, 1.0, 3.0]))):
    s = geo.MetricLieAlgebra(catalog.su2(), g)
    cod = geo.codazzi_defect(s, geo.ricci(s)).norm
    div = geo.curvature_divergence_norm(s)
    rep = st.verify_structure(s, st.decompose(s, geo.ricci(s)))
    print(f"{label:7s} |d Ric| = {cod:.3e}  |div R| = {div:.3e}  eigenspace test passed: {rep.passed}")

# Heisenberg: the Ricci eigenspace of -1/2 is not a subalgebra
h = catalog.named("heisenberg3")
rep = st.verify_structure(h, st.decompose(h, geo.ricci(h)))
print("heisenberg3 failed conditions:", rep.failed_conditions())

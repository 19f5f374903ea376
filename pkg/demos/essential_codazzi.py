"""
A Codazzi operator that is not parallel
=======================================

Six-dimensional metric Lie algebra with orthonormal e1..e6 and the diagonal
operator A = Diag(0, 1, 3, 7, 7, 7).  Everything below runs in exact
rational arithmetic.
"""

from fractions import Fraction

import numpy as np

from harmonic_lie import catalog, geometry as geo, structure as st
from harmonic_lie.lie_algebra import is_ideal, jacobi_defect, killing_form

m, a = catalog.paper_codazzi_example(0, 1, 3, 7, 1)
print(m, "operator diagonal:", [str(x) for x in np.diag(a.matrix)])

# the brackets close up: Jacobi holds exactly
print("Jacobi defect:", jacobi_defect(m.alg))

# A is Codazzi ...
d = geo.codazzi_defect(m, a)
print("Codazzi defect is zero:", d.is_zero)

# ... but not parallel
print("|nabla A|^2 =", geo.nabla_norm_sq(m, a))

# eigenspaces, and the triple of eigenspaces responsible for nabla A != 0
dec = st.decompose(m, a)
print("eigenvalues:", [str(x) for x in dec.eigenvalues], "multiplicities:", dec.multiplicities)
w = st.nonparallel_witness(m, dec)
print(f"<[u, v], w> = {w.value} for u in g_{w.i}, v in g_{w.j}, w in g_{w.k}")

# none of the eigenspaces is an ideal, and the algebra is compact semisimple
print("eigenspace ideals:", [is_ideal(m.alg, dec.subspace(i)) for i in range(dec.r)])
print("Killing form eigenvalues:", np.round(np.linalg.eigvalsh(killing_form(m.alg).astype(float)), 6))

# the same picture for another rational choice of parameters
m2, a2 = catalog.paper_codazzi_example(Fraction(-3, 2), 2, Fraction(5, 3), -4, Fraction(-1, 2))
print("second example, Codazzi:", geo.codazzi_defect(m2, a2).is_zero, " |nabla A|^2 =", geo.nabla_norm_sq(m2, a2))

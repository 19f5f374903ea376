"""Left-invariant Riemannian geometry of a metric Lie algebra.

Everything is expressed in the standard basis e_1..e_n of the algebra, with
adjoints, traces and norms taken against the Gram matrix.  Frobenius norms
are over a Gram-orthonormal frame; in exact mode the *squared* norms are
exact rationals and the float norm is derived from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels, linalg
from .lie_algebra import LieAlgebra, Subspace, derived_subalgebra

#: float-mode tolerance for self-adjointness of operators
SELF_ADJOINT_TOL = 1e-10


class GeometryError(ValueError):
    pass


def _sqrt(x) -> float:
    return math.sqrt(max(float(x), 0.0))


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """A Lie algebra with a positive-definite inner product ``gram``."""

    alg: LieAlgebra
    gram: np.ndarray
    ginv: np.ndarray = field(init=False, repr=False)
    frame: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        exact = self.alg.exact and linalg.is_exact(np.asarray(self.gram))
        alg = self.alg if exact else self.alg.to_float()
        g = np.asarray(self.gram)
        g = linalg.as_fraction_array(g) if exact else linalg.to_float(g)
        n = alg.dim
        if g.shape != (n, n):
            raise GeometryError(f"gram must be {n}x{n}, got {g.shape}")
        if any(a != b for a, b in zip(g.flat, g.T.flat)) if exact else not np.allclose(g, g.T, atol=1e-14, rtol=1e-12):
            raise GeometryError("gram matrix is not symmetric")
        if not exact:
            g = (g + g.T) / 2
        if not linalg.is_positive_definite(g):
            raise GeometryError("gram matrix is not positive definite")
        g.setflags(write=False)
        ginv = linalg.inverse(g)
        ginv.setflags(write=False)
        # frame rows: orthogonal (exact) / orthonormal (float) basis from Gram-Schmidt
        frame = linalg.gram_schmidt(linalg.eye(n, exact), g)
        frame.setflags(write=False)
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "ginv", ginv)
        object.__setattr__(self, "frame", frame)

    @classmethod
    def identity(cls, alg: LieAlgebra) -> "MetricLieAlgebra":
        return cls(alg, linalg.eye(alg.dim, alg.exact))

    @property
    def dim(self) -> int:
        return self.alg.dim

    @property
    def exact(self) -> bool:
        return self.alg.exact

    def to_float(self) -> "MetricLieAlgebra":
        if not self.exact:
            return self
        return MetricLieAlgebra(self.alg.to_float(), linalg.to_float(self.gram))

    def inner(self, x, y):
        return np.asarray(x) @ self.gram @ np.asarray(y)

    def adjoint(self, m: np.ndarray) -> np.ndarray:
        """Adjoint of an endomorphism with respect to the Gram matrix."""
        return self.ginv @ m.T @ self.gram

    @cached_property
    def levi_civita_all(self) -> np.ndarray:
        """Stack of L_{e_u} matrices, shape (n, n, n)."""
        return kernels.levi_civita(self.alg.c, self.gram, self.ginv)

    @cached_property
    def ricci_matrix(self) -> np.ndarray:
        return kernels.ricci_operator(self.alg.c, self.gram, self.ginv, self.levi_civita_all)

    def __repr__(self):
        return f"MetricLieAlgebra(dim={self.dim}, field={'rational' if self.exact else 'float'})"


@dataclass(frozen=True, eq=False)
class SymmetricOperator:
    """Endomorphism self-adjoint with respect to ``m.gram``."""

    matrix: np.ndarray
    m: MetricLieAlgebra = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.matrix)
        if self.m.exact:
            a = linalg.as_fraction_array(a) if linalg.is_exact(a) or a.dtype.kind in "iu" else None
            if a is None:
                raise GeometryError("exact metric algebra needs an exact operator")
        else:
            a = linalg.to_float(a)
        n = self.m.dim
        if a.shape != (n, n):
            raise GeometryError(f"operator must be {n}x{n}")
        ga = self.m.gram @ a
        if self.m.exact:
            if any(x != y for x, y in zip(ga.flat, ga.T.flat)):
                raise GeometryError("operator is not self-adjoint")
        else:
            scale = max(1.0, float(np.abs(ga).max()))
            if np.abs(ga - ga.T).max() > SELF_ADJOINT_TOL * scale:
                raise GeometryError("operator is not self-adjoint")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)


@dataclass(frozen=True, eq=False)
class CodazziDefect:
    """d(u, v, w) = <(nabla_u T) v - (nabla_v T) u, w> on basis vectors."""

    tensor: np.ndarray
    norm_sq: object
    max_abs: float

    @property
    def norm(self) -> float:
        return _sqrt(self.norm_sq)

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.tensor.flat)


def _as_vec(m: MetricLieAlgebra, u) -> np.ndarray:
    return m.alg._vec(u)


def levi_civita(m: MetricLieAlgebra, u) -> np.ndarray:
    """L_u, defined by Koszul's formula."""
    return np.einsum("i,imn->mn", _as_vec(m, u), m.levi_civita_all)


def curvature(m: MetricLieAlgebra, u, v) -> np.ndarray:
    """K(u, v) = L_{[u,v]} - [L_u, L_v]."""
    u, v = _as_vec(m, u), _as_vec(m, v)
    luv = np.einsum("i,j,ijk->k", u, v, m.alg.c)
    lu, lv = levi_civita(m, u), levi_civita(m, v)
    return levi_civita(m, luv) - (lu @ lv - lv @ lu)


def ricci(m: MetricLieAlgebra) -> SymmetricOperator:
    return SymmetricOperator(m.ricci_matrix, m)


def ricci_form(m: MetricLieAlgebra) -> np.ndarray:
    """Bilinear form ric[i, j] = <Ric e_i, e_j>."""
    return m.gram @ m.ricci_matrix


def ricci_structure_formula(m: MetricLieAlgebra) -> SymmetricOperator:
    """Ricci operator from R - B/2 - S(ad_H) (bracket data only)."""
    return SymmetricOperator(kernels.ricci_structure(m.alg.c, m.gram, m.ginv), m)


def mean_curvature_vector(m: MetricLieAlgebra) -> np.ndarray:
    """H with <H, u> = tr(ad_u)."""
    return m.ginv @ kernels.trace_ad(m.alg.c)


def scalar_curvature(m: MetricLieAlgebra):
    return np.trace(m.ricci_matrix)


def _check_operator(m: MetricLieAlgebra, t) -> np.ndarray:
    if isinstance(t, SymmetricOperator):
        if t.m is m:
            return t.matrix
        t = t.matrix
    return SymmetricOperator(np.asarray(t), m).matrix


def covariant_derivative(m: MetricLieAlgebra, t, u) -> np.ndarray:
    """nabla_u T = L_u T - T L_u for a self-adjoint T."""
    mat = _check_operator(m, t)
    lu = levi_civita(m, u)
    return lu @ mat - mat @ lu


def _pack_trilinear(m: MetricLieAlgebra, d: np.ndarray) -> tuple:
    norm_sq = kernels.frame_norm_sq3(d, m.ginv)
    max_abs = float(np.abs(linalg.to_float(d)).max()) if d.size else 0.0
    if not m.exact:
        norm_sq = float(norm_sq)
    return norm_sq, max_abs


def codazzi_defect(m: MetricLieAlgebra, t) -> CodazziDefect:
    mat = _check_operator(m, t)
    d = kernels.codazzi_trilinear(m.levi_civita_all, mat, m.gram)
    norm_sq, max_abs = _pack_trilinear(m, d)
    return CodazziDefect(d, norm_sq, max_abs)


def nabla_norm_sq(m: MetricLieAlgebra, t):
    mat = _check_operator(m, t)
    p = kernels.nabla_trilinear(m.levi_civita_all, mat, m.gram)
    return _pack_trilinear(m, p)[0]


def nabla_norm(m: MetricLieAlgebra, t) -> float:
    """Frobenius norm of u -> nabla_u T over an orthonormal frame."""
    return _sqrt(nabla_norm_sq(m, t))


def curvature_divergence_tensor(m: MetricLieAlgebra) -> np.ndarray:
    """(X, Y, Z) -> sum_i <(nabla_{E_i} K)(E_i, X) Y, Z>."""
    div = kernels.curvature_divergence(m.alg.c, m.levi_civita_all, m.ginv)
    return np.einsum("xmy,mz->xyz", div, m.gram)


def curvature_divergence_norm(m: MetricLieAlgebra) -> float:
    d = curvature_divergence_tensor(m)
    return _sqrt(kernels.frame_norm_sq3(d, m.ginv))


def orthogonal_ric_identity_residual(m: MetricLieAlgebra, s, atol: float = 1e-10):
    """|ric(s,s) + tr((ad_s + ad_s^*)^2)/4| for s orthogonal to [g, g]."""
    s = _as_vec(m, s)
    n_basis = derived_subalgebra(m.alg).basis
    pairing = n_basis @ m.gram @ s
    if m.exact:
        if any(p != 0 for p in pairing):
            raise GeometryError("s is not orthogonal to the derived subalgebra")
    elif pairing.size and np.abs(pairing).max() > atol * max(1.0, float(np.linalg.norm(s))):
        raise GeometryError("s is not orthogonal to the derived subalgebra")
    ric_ss = s @ ricci_form(m) @ s
    ad_s = m.alg.ad(s)
    sym = ad_s + m.adjoint(ad_s)
    res = ric_ss + np.trace(sym @ sym) / 4
    return abs(res)


def derived_orthocomplement(m: MetricLieAlgebra) -> Subspace:
    return orthogonal_complement(m, derived_subalgebra(m.alg))


def orthogonal_complement(m: MetricLieAlgebra, s: Subspace) -> Subspace:
    if s.dim == 0:
        return Subspace(m.dim, linalg.eye(m.dim, m.exact))
    return Subspace(m.dim, linalg.nullspace(s.basis @ m.gram))


def orthonormal_basis(m: MetricLieAlgebra, s: Subspace) -> np.ndarray:
    """Gram-orthogonal basis rows of ``s`` (orthonormal in float mode)."""
    return linalg.gram_schmidt(s.basis, m.gram)


def pair_symmetry_residual(m: MetricLieAlgebra) -> float:
    """max |<K(u,v)w, z> - <K(w,z)u, v>| over basis quadruples."""
    k = kernels.curvature(m.alg.c, m.levi_civita_all)
    form = np.einsum("uvmw,mz->uvwz", k, m.gram)
    diff = form - np.transpose(form, (2, 3, 0, 1))
    return float(np.abs(linalg.to_float(diff)).max())

"""Eigenspace structure of Codazzi operators on metric Lie algebras.

A self-adjoint T on a metric Lie algebra splits it into eigenspaces
g_1 + ... + g_r with eigenvalues l_1 < ... < l_r.  T is Codazzi exactly when
(1) every g_i is a subalgebra, (2) <[w,u],v> + <[w,v],u> = 0 for u, v in g_i
and w in g_j (i != j), and (3) two weighted cyclic identities hold on every
triple of distinct eigenspaces.  This module computes the splitting and
every residual involved, plus the auxiliary subspaces and identities used to
study Ricci-parallel versus merely harmonic metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from . import geometry as geo
from . import kernels, linalg
from .geometry import MetricLieAlgebra
from .lie_algebra import Subspace, _product_scale, derived_subalgebra, is_solvable, restrict

#: default relative gap below which float eigenvalues are merged
TOL_EIG = 1e-7
#: default absolute tolerance for structure residuals
TOL_STRUCTURE = 1e-9
#: float eigen-residuals above this mark a decomposition as stale
TOL_STALE = 1e-9
#: gaps in (tol, GREY_FACTOR * tol] are ambiguous
GREY_FACTOR = 10.0


class DecompositionError(ValueError):
    """Eigenvalue clustering is ambiguous, or the spectrum is not rational in exact mode."""


class StaleDecompositionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RicciDecomposition:
    """Ascending eigenvalues of a self-adjoint operator with Gram-orthogonal eigenspace bases.

    ``bases[i]`` has one row per basis vector of g_i; rows are orthonormal in
    float mode and orthogonal (squared lengths in ``norms_sq``) in exact mode.
    ``appearance_order[i]`` is the position of g_i when eigenspaces are
    listed by the first standard basis vector they meet, which recovers the
    unordered labels of a diagonal operator.
    """

    eigenvalues: tuple
    bases: tuple
    norms_sq: tuple
    operator: np.ndarray = field(repr=False)
    appearance_order: tuple = ()

    @property
    def r(self) -> int:
        return len(self.eigenvalues)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.bases)

    @property
    def exact(self) -> bool:
        return linalg.is_exact(self.operator)

    def subspace(self, i: int) -> Subspace:
        """g_i as a Subspace (0-based ``i``)."""
        return Subspace(self.operator.shape[0], self.bases[i])

    def projector(self, i: int, gram: np.ndarray) -> np.ndarray:
        """Orthogonal projector onto g_i as a matrix acting on coefficient vectors."""
        b = self.bases[i]
        inv = np.array([1 / x for x in self.norms_sq[i]], dtype=b.dtype)
        return np.einsum("ai,a,aj->ij", b, inv, b) @ gram

    def to_dict(self) -> dict:
        from .lie_algebra import format_scalar

        return {
            "eigenvalues": [format_scalar(v) for v in self.eigenvalues],
            "multiplicities": list(self.multiplicities),
            "eigenspaces": [[[format_scalar(x) for x in row] for row in b] for b in self.bases],
            "appearance_order": [i + 1 for i in self.appearance_order],
            "field": "rational" if self.exact else "float",
        }


def _appearance(bases) -> tuple:
    firsts = []
    for b in bases:
        nz = [j for j in range(b.shape[1]) if any(x != 0 for x in b[:, j])] if linalg.is_exact(b) else \
            [j for j in range(b.shape[1]) if np.abs(b[:, j]).max() > 1e-12]
        firsts.append(min(nz))
    order = sorted(range(len(bases)), key=lambda i: firsts[i])
    return tuple(order.index(i) for i in range(len(bases)))


def decompose(m: MetricLieAlgebra, t, tol_eig: float = TOL_EIG) -> RicciDecomposition:
    mat = geo._check_operator(m, t)
    if m.exact:
        return _decompose_exact(m, mat)
    return _decompose_float(m, mat, tol_eig)


def _decompose_exact(m: MetricLieAlgebra, mat: np.ndarray) -> RicciDecomposition:
    n = m.dim
    approx, _ = _float_spectrum(linalg.to_float(m.gram), linalg.to_float(mat))
    candidates = sorted({Fraction(float(x)).limit_denominator(10**6) for x in approx})
    eigvals, bases, norms = [], [], []
    for lam in candidates:
        null = linalg.nullspace(mat - lam * linalg.eye(n, True))
        if null.shape[0]:
            b = linalg.gram_schmidt(null, m.gram)
            eigvals.append(lam)
            bases.append(b)
            norms.append(linalg.norms_squared(b, m.gram))
    if sum(b.shape[0] for b in bases) != n:
        raise DecompositionError("spectrum is not rational; decompose in float mode instead")
    return RicciDecomposition(tuple(eigvals), tuple(bases), tuple(norms), mat, _appearance(bases))


def _float_spectrum(g: np.ndarray, mat: np.ndarray):
    from scipy.linalg import eigh

    gt = g @ mat
    return eigh((gt + gt.T) / 2, g)


def _decompose_float(m: MetricLieAlgebra, mat: np.ndarray, tol_eig: float) -> RicciDecomposition:
    w, v = _float_spectrum(m.gram, mat)
    scale = float(np.abs(w).max()) if w.size else 0.0
    thresh = tol_eig * scale
    groups = [[0]]
    for idx in range(1, len(w)):
        gap = w[idx] - w[idx - 1]
        if gap <= thresh:
            groups[-1].append(idx)
        elif gap <= GREY_FACTOR * thresh:
            raise DecompositionError(
                f"eigenvalue gap {gap:.3e} is within a factor {GREY_FACTOR} of the clustering threshold"
            )
        else:
            groups.append([idx])
    eigvals, bases, norms = [], [], []
    for grp in groups:
        if w[grp[-1]] - w[grp[0]] > thresh:
            raise DecompositionError("eigenvalue cluster is wider than the clustering tolerance")
        eigvals.append(float(np.mean(w[grp])))
        b = linalg.gram_schmidt(v[:, grp].T, m.gram)
        bases.append(b)
        norms.append(np.ones(b.shape[0]))
    return RicciDecomposition(tuple(eigvals), tuple(bases), tuple(norms), mat, _appearance(bases))


# ---------------------------------------------------------------------------


@dataclass
class StructureReport:
    """Residuals of the three eigenspace conditions characterizing Codazzi operators."""

    eigenvalues: list
    subalgebra_residuals: list
    skew_residuals: dict
    cross_residuals: dict
    tol: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = (
            all(r <= self.tol for r in self.subalgebra_residuals)
            and all(r <= self.tol for r in self.skew_residuals.values())
            and all(max(p) <= self.tol for p in self.cross_residuals.values())
        )

    @property
    def subalgebra_flags(self) -> list[bool]:
        return [r <= self.tol for r in self.subalgebra_residuals]

    def failed_conditions(self) -> list[int]:
        out = []
        if not all(self.subalgebra_flags):
            out.append(1)
        if any(r > self.tol for r in self.skew_residuals.values()):
            out.append(2)
        if any(max(p) > self.tol for p in self.cross_residuals.values()):
            out.append(3)
        return out

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "failed_conditions": self.failed_conditions(),
            "condition1_subalgebra": [
                {"eigenspace": i + 1, "residual": r, "ok": r <= self.tol}
                for i, r in enumerate(self.subalgebra_residuals)
            ],
            "condition2_skew": [
                {"i": i + 1, "j": j + 1, "residual": r} for (i, j), r in sorted(self.skew_residuals.items())
            ],
            "condition3_cross": [
                {"i": i + 1, "j": j + 1, "k": k + 1, "residuals": list(p)}
                for (i, j, k), p in sorted(self.cross_residuals.items())
            ],
        }


def _bracket_forms(m: MetricLieAlgebra, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """X[p, q, s] = <[a_p, b_q], c_s> for rows of a, b, c."""
    cl = kernels.lower(m.alg.c, m.gram)
    return np.einsum("pi,qj,sl,ijl->pqs", a, b, c, cl)


def _absmax(x) -> float:
    if x.size == 0:
        return 0.0
    return float(np.abs(linalg.to_float(np.asarray(x))).max())


def check_fresh(m: MetricLieAlgebra, dec: RicciDecomposition):
    for lam, b in zip(dec.eigenvalues, dec.bases):
        res = dec.operator @ b.T - lam * b.T
        if dec.exact:
            if any(x != 0 for x in res.flat):
                raise StaleDecompositionError("eigenspace basis no longer matches its eigenvalue")
        elif _absmax(res) > TOL_STALE * max(1.0, _absmax(dec.operator)):
            raise StaleDecompositionError("eigenspace basis no longer matches its eigenvalue")


def verify_structure(m: MetricLieAlgebra, dec: RicciDecomposition, tol: float = TOL_STRUCTURE) -> StructureReport:
    check_fresh(m, dec)
    r = dec.r
    sub_res = []
    for i in range(r):
        b = dec.bases[i]
        prods = np.einsum("pi,qj,ijk->pqk", b, b, m.alg.c).reshape(-1, m.dim)
        proj = dec.projector(i, m.gram)
        outside = prods - prods @ proj.T
        if outside.size:
            nsq = np.einsum("ai,ij,aj->a", outside, m.gram, outside)
            sub_res.append(float(np.sqrt(max(float(x) for x in nsq))) if len(nsq) else 0.0)
        else:
            sub_res.append(0.0)
    skew = {}
    for i, j in permutations(range(r), 2):
        bi, bj = dec.bases[i], dec.bases[j]
        x = _bracket_forms(m, bj, bi, bi)  # <[w, u], v>
        skew[(i, j)] = _absmax(x + np.swapaxes(x, 1, 2))
    cross = {}
    lam = dec.eigenvalues
    for i, j, k in combinations(range(r), 3):
        bu, bv, bw = dec.bases[i], dec.bases[j], dec.bases[k]
        vw_u = np.einsum("qsp->pqs", _bracket_forms(m, bv, bw, bu))
        vu_w = np.einsum("qps->pqs", _bracket_forms(m, bv, bu, bw))
        uw_v = np.einsum("psq->pqs", _bracket_forms(m, bu, bw, bv))
        uv_w = _bracket_forms(m, bu, bv, bw)
        lij, ljk, lik = (lam[i] - lam[j]) ** 2, (lam[j] - lam[k]) ** 2, (lam[i] - lam[k]) ** 2
        cross[(i, j, k)] = (_absmax(lij * vw_u + ljk * vu_w), _absmax(lij * uw_v + lik * uv_w))
    return StructureReport(list(lam), sub_res, skew, cross, tol)


@dataclass(frozen=True)
class Witness:
    """Distinct eigenspaces i < j < k (1-based) with <[u, v], w> != 0."""

    i: int
    j: int
    k: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    value: object


def nonparallel_witness(m: MetricLieAlgebra, dec: RicciDecomposition, tol: float = TOL_STRUCTURE) -> Witness | None:
    for i, j, k in combinations(range(dec.r), 3):
        bu, bv, bw = dec.bases[i], dec.bases[j], dec.bases[k]
        x = _bracket_forms(m, bu, bv, bw)
        for (p, q, s), val in np.ndenumerate(x):
            hit = val != 0 if dec.exact else abs(val) > tol
            if hit:
                return Witness(i + 1, j + 1, k + 1, bu[p], bv[q], bw[s], val)
    return None


def p_and_h_subspaces(m: MetricLieAlgebra, dec: RicciDecomposition, i: int) -> tuple[Subspace, Subspace]:
    """p_i (g_i-components of brackets of two other distinct eigenspaces) and h_i = p_i^perp in g_i.

    ``i`` is 1-based, matching eigenspace labels in reports.
    """
    i0 = i - 1
    n = m.dim
    proj = dec.projector(i0, m.gram)
    vecs, scale = [], 0.0
    for j, k in combinations([x for x in range(dec.r) if x != i0], 2):
        prods = np.einsum("pi,qj,ijk->pqk", dec.bases[j], dec.bases[k], m.alg.c).reshape(-1, n)
        vecs.append(prods @ proj.T)
        scale = max(scale, _product_scale(m.alg, dec.bases[j], dec.bases[k]))
    p = Subspace.span(np.vstack(vecs) if vecs else linalg.zeros((0, n), m.exact), n, m.exact, scale)
    gi = dec.subspace(i0)
    if p.dim == 0:
        return p, gi
    # vectors of g_i orthogonal to p: coefficients x with (p.basis G gi.basis^T) x = 0
    coef = linalg.nullspace(p.basis @ m.gram @ gi.basis.T)
    h_vecs = coef @ gi.basis if coef.shape[0] else linalg.zeros((0, n), m.exact)
    return p, Subspace.span(h_vecs, n, m.exact)


def _weighted_gram(m: MetricLieAlgebra, dec: RicciDecomposition, k: int) -> np.ndarray:
    """Matrix of <u, v>_k = sum_j (delta_jk + (l_j - l_k)^2) <u_j, v_j>."""
    lam = dec.eigenvalues
    out = linalg.zeros((m.dim, m.dim), m.exact)
    for j in range(dec.r):
        wgt = (1 if j == k else 0) + (lam[j] - lam[k]) ** 2
        p = dec.projector(j, m.gram)
        out = out + wgt * (p.T @ m.gram @ p)
    return out


def deformed_product_residuals(m: MetricLieAlgebra, dec: RicciDecomposition, k: int) -> tuple:
    """(skewness residual, homomorphism residual) for rho_k on the complement of g_k (1-based k)."""
    k0 = k - 1
    if dec.r == 1:
        return 0.0, 0.0
    gk = _weighted_gram(m, dec, k0)
    n = m.dim
    pk = dec.projector(k0, m.gram)
    q = linalg.eye(n, m.exact) - pk
    others = np.vstack([dec.bases[j] for j in range(dec.r) if j != k0])
    ads = m.alg.ad()
    skew = 0.0
    for u in dec.bases[k0]:
        rho = q @ np.einsum("i,ikj->kj", u, ads) @ q
        form = others @ rho.T @ gk @ others.T  # <rho(u) v, w>_k for v, w in the complement
        skew = max(skew, _absmax(form + form.T))
    hom = 0.0
    bk = dec.bases[k0]
    for x in bk:
        for y in bk:
            xy = np.einsum("i,j,ijk->k", x, y, m.alg.c)
            rx = q @ np.einsum("i,ikj->kj", x, ads) @ q
            ry = q @ np.einsum("i,ikj->kj", y, ads) @ q
            rxy = q @ np.einsum("i,ikj->kj", xy, ads) @ q
            hom = max(hom, _absmax(rxy - (rx @ ry - ry @ rx)))
    return skew, hom


def deformed_product_check(m: MetricLieAlgebra, dec: RicciDecomposition, k: int, tol: float = TOL_STRUCTURE) -> bool:
    skew, hom = deformed_product_residuals(m, dec, k)
    return skew <= tol and hom <= tol


def _sub_metric(m: MetricLieAlgebra, basis: np.ndarray) -> MetricLieAlgebra:
    sub = restrict(m.alg, Subspace(m.dim, basis))
    return MetricLieAlgebra(sub, basis @ m.gram @ basis.T)


def restriction_identity_residuals(m: MetricLieAlgebra, dec: RicciDecomposition) -> tuple[float, float]:
    """Residuals of the Ricci restriction identity and of the scalar-curvature splitting.

    ``dec`` must decompose the Ricci operator of ``m`` and satisfy the
    eigenspace conditions (each g_i a subalgebra).
    """
    lam = dec.eigenvalues
    ric = geo.ricci_form(m)
    cl = kernels.lower(m.alg.c, m.gram)
    first = 0.0
    s_parts = []
    for i in range(dec.r):
        bi = dec.bases[i]
        sub = _sub_metric(m, bi)
        ric_i = geo.ricci_form(sub)
        s_parts.append(geo.scalar_curvature(sub))
        lhs = bi @ ric @ bi.T
        corr = linalg.zeros(lhs.shape, m.exact)
        for j, k in permutations(range(dec.r), 2):
            if i in (j, k):
                continue
            coef = (lam[k] - lam[i]) * (lam[j] - lam[i]) / (lam[k] - lam[j]) ** 2
            x = np.einsum("pi,qj,ijl,sl->pqs", dec.bases[j], dec.bases[k], cl, bi)
            wj, wk = dec.norms_sq[j], dec.norms_sq[k]
            wts = np.einsum("p,q->pq", wj, wk)
            if m.exact:
                wts = np.vectorize(lambda v: 1 / v, otypes=[object])(wts)
            else:
                wts = 1 / wts
            corr = corr + coef * np.einsum("pqs,pqt,pq->st", x, x, wts)
        # ric(u, v) = ric_i(u, v) - sum_{j != k} coef * <[V_j, V_k], u><[V_j, V_k], v>
        first = max(first, _absmax(lhs - ric_i + corr))
    s = geo.scalar_curvature(m)
    second = abs(float(s - sum(s_parts)))
    return first, second


@dataclass
class StandardnessReport:
    """Diagnostics for: solvable, Ric scalar on [g,g]  =>  [g,g]^perp abelian."""

    derived_dim: int
    hypothesis_holds: bool
    vacuous: bool
    c: float | None
    scalar_residual: float
    complement_abelian: bool
    abelian_residual: float
    unimodular: bool
    eq_c_value: float | None
    eq_c_residual: float | None
    sign_regime: bool
    violation: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def standardness_check(m: MetricLieAlgebra, tol: float = 1e-9, tol_abelian: float = 1e-10) -> StandardnessReport:
    """Check the standardness conclusion for a solvable metric Lie algebra.

    The hypothesis is labelled vacuous when dim [g, g] <= 1.  A violation is
    reported only for a non-vacuous hypothesis with c <= 0 (the regime in which
    Ricci is negative semi-definite on the whole algebra) and a non-abelian
    complement.
    """
    if not is_solvable(m.alg):
        raise ValueError("standardness_check needs a solvable Lie algebra")
    mf = m.to_float()
    n_sub = derived_subalgebra(mf.alg)
    n_on = linalg.gram_schmidt(n_sub.basis, mf.gram) if n_sub.dim else np.zeros((0, mf.dim))
    ric = mf.ricci_matrix
    if n_on.shape[0]:
        diag = np.einsum("ai,ij,jk,ak->a", n_on, mf.gram, ric, n_on)
        c = float(diag.mean())
        resid = (ric @ n_on.T - c * n_on.T).T
        scalar_res = float(np.sqrt(np.einsum("ai,ij,aj->a", resid, mf.gram, resid).max()))
    else:
        c, scalar_res = None, 0.0
    hyp = scalar_res <= tol
    vacuous = n_on.shape[0] <= 1
    a_on = geo.orthonormal_basis(mf, geo.orthogonal_complement(mf, n_sub))
    if a_on.shape[0] >= 2:
        prods = np.einsum("pi,qj,ijk->pqk", a_on, a_on, mf.alg.c).reshape(-1, mf.dim)
        ab_res = float(np.sqrt(np.einsum("ai,ij,aj->a", prods, mf.gram, prods).max()))
    else:
        ab_res = 0.0
    abelian = ab_res <= tol_abelian
    h = geo.mean_curvature_vector(mf)
    unimodular = float(np.sqrt(h @ mf.gram @ h)) <= tol
    eq_c = eq_res = None
    if hyp and not unimodular and c is not None:
        ad_h = mf.alg.ad(h)
        s = (ad_h + mf.adjoint(ad_h)) / 2
        eq_c = -float(np.trace(s @ s)) / float(np.trace(s))
        eq_res = abs(c - eq_c)
    sign_ok = c is None or c <= tol
    violation = hyp and not vacuous and sign_ok and not abelian
    return StandardnessReport(
        derived_dim=n_on.shape[0],
        hypothesis_holds=hyp,
        vacuous=vacuous,
        c=c,
        scalar_residual=scalar_res,
        complement_abelian=abelian,
        abelian_residual=ab_res,
        unimodular=unimodular,
        eq_c_value=eq_c,
        eq_c_residual=eq_res,
        sign_regime=sign_ok,
        violation=violation,
    )

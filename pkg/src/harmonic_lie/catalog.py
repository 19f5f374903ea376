"""Named metric Lie algebras, the six-dimensional bracket family, and random generators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .geometry import MetricLieAlgebra, SymmetricOperator
from .lie_algebra import LieAlgebra, LieAlgebraError, Subspace, change_basis, direct_sum

NAMES = (
    "abelian",
    "heisenberg3",
    "su2_biinvariant",
    "sl2r",
    "hyperbolic_solvable",
    "su2_plus_abelian3",
    "su2_plus_su2",
)

_DESCRIPTIONS = {
    "abelian": "R^n with all brackets zero (--n, default 3)",
    "heisenberg3": "[e1,e2]=e3",
    "su2_biinvariant": "[e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2 with the bi-invariant metric",
    "sl2r": "[e2,e3]=e1, [e3,e1]=e2, [e1,e2]=-e3 (Milnor frame)",
    "hyperbolic_solvable": "[e1,ei]=ei for i>1: real hyperbolic space (--n, default 3)",
    "su2_plus_abelian3": "su(2) + R^3",
    "su2_plus_su2": "su(2) + su(2)",
}


def describe(name: str) -> str:
    return _DESCRIPTIONS[name]


def abelian(n: int) -> LieAlgebra:
    if n < 1:
        raise LieAlgebraError("dimension must be positive")
    return LieAlgebra.from_brackets(n, {})


def heisenberg3() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(1, 2): {3: 1}})


def su2() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {2: -1}})


def sl2r() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(2, 3): {1: 1}, (1, 3): {2: -1}, (1, 2): {3: -1}})


def hyperbolic_solvable(n: int) -> LieAlgebra:
    """R acting on R^{n-1} by the identity; e_1 plays the role of H."""
    if n < 2:
        raise LieAlgebraError("hyperbolic_solvable needs n >= 2")
    return LieAlgebra.from_brackets(n, {(1, j): {j: 1} for j in range(2, n + 1)})


def named_algebra(name: str, n: int | None = None) -> LieAlgebra:
    if name == "abelian":
        return abelian(3 if n is None else n)
    if name == "hyperbolic_solvable":
        return hyperbolic_solvable(3 if n is None else n)
    if n is not None:
        raise LieAlgebraError(f"{name} has a fixed dimension")
    if name == "heisenberg3":
        return heisenberg3()
    if name == "su2_biinvariant":
        return su2()
    if name == "sl2r":
        return sl2r()
    if name == "su2_plus_abelian3":
        return direct_sum(su2(), abelian(3))
    if name == "su2_plus_su2":
        return direct_sum(su2(), su2())
    raise LieAlgebraError(f"unknown algebra {name!r}; choose from {', '.join(NAMES)}")


def named(name: str, n: int | None = None) -> MetricLieAlgebra:
    """Catalog fixture with the identity Gram matrix."""
    return MetricLieAlgebra.identity(named_algebra(name, n))


def fixtures() -> dict[str, MetricLieAlgebra]:
    """Every catalog entry used by the test suite, keyed by a display name."""
    out = {}
    for name in NAMES:
        if name in ("abelian", "hyperbolic_solvable"):
            for n in (3, 4, 5):
                out[f"{name}({n})"] = named(name, n)
        else:
            out[name] = named(name)
    return out


# ---------------------------------------------------------------------------
# Six-dimensional family with three 1-dimensional eigenspaces and one 3-dimensional
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyParameters:
    """Eigenvalues lam1..lam4 and bracket coefficients of the six-dimensional family."""

    lam1: object
    lam2: object
    lam3: object
    lam4: object
    mu1: object = 0
    mu2: object = 0
    mu3: object = 0
    alpha1: object = 0
    alpha2: object = 0
    alpha3: object = 0
    r: object = 0
    a: object = 0
    b: object = 0
    c: object = 0

    @property
    def lambdas(self) -> tuple:
        return (self.lam1, self.lam2, self.lam3, self.lam4)

    def check(self, ordered: bool = True):
        lams = self.lambdas
        if len(set(lams)) != 4:
            raise LieAlgebraError("eigenvalues lam1..lam4 must be pairwise distinct")
        if ordered and not (lams[0] < lams[1] < lams[2]):
            raise LieAlgebraError("the family requires lam1 < lam2 < lam3")

    @classmethod
    def jacobi_forced(cls, lam1, lam2, lam3, lam4, mu1) -> "FamilyParameters":
        """alpha = r = 0 with mu2, mu3, a, b, c fixed by the Jacobi identity."""
        l12, l13, l14 = lam1 - lam2, lam1 - lam3, lam1 - lam4
        l23, l24, l34 = lam2 - lam3, lam2 - lam4, lam3 - lam4
        return cls(
            lam1, lam2, lam3, lam4,
            mu1=mu1,
            mu2=l13 * mu1 / l12,
            mu3=l23 * mu1 / l12,
            a=l14**2 * l23 * mu1 / (l12**2 * l13),
            b=-(l24**2) * l13 * mu1 / (l12**2 * l23),
            c=l34**2 * mu1 / (l23 * l13),
        )


def _exact_mode(values) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def _coerce(values, exact):
    return [Fraction(v) if exact else float(v) for v in values]


def general_family(p: FamilyParameters, ordered: bool = True) -> LieAlgebra:
    """The bracket family on e1..e6; the Jacobi identity is not enforced."""
    p.check(ordered)
    vals = [getattr(p, f) for f in FamilyParameters.__dataclass_fields__]
    exact = _exact_mode(vals)
    (l1, l2, l3, l4, mu1, mu2, mu3, al1, al2, al3, r, a, b, c) = _coerce(vals, exact)
    l12, l13, l14 = l1 - l2, l1 - l3, l1 - l4
    l23, l24, l34 = l2 - l3, l2 - l4, l3 - l4
    br = {
        (4, 5): {6: a},
        (4, 6): {5: b},
        (5, 6): {4: c},
        (1, 2): {4: mu1, 3: l12**2 / l23**2 * r},
        (1, 3): {5: mu2, 2: -(l13**2) / l23**2 * r},
        (2, 3): {6: mu3, 1: r},
        (1, 4): {5: al1, 2: -(l14**2) / l12**2 * mu1},
        (1, 5): {4: -al1, 3: -(l14**2) / l13**2 * mu2},
        (2, 4): {6: al2, 1: l24**2 / l12**2 * mu1},
        (2, 6): {4: -al2, 3: -(l24**2) / l23**2 * mu3},
        (3, 5): {6: al3, 1: l34**2 / l13**2 * mu2},
        (3, 6): {5: -al3, 2: l34**2 / l23**2 * mu3},
    }
    return LieAlgebra.from_brackets(6, br, exact=exact)


def codazzi_example_algebra(lam1, lam2, lam3, lam4, mu1) -> LieAlgebra:
    """Closed-form brackets of the six-dimensional essential-Codazzi example."""
    lams = (lam1, lam2, lam3, lam4)
    if len(set(lams)) != 4:
        raise LieAlgebraError("lam1..lam4 must be pairwise distinct")
    if mu1 == 0:
        raise LieAlgebraError("mu1 must be nonzero")
    exact = _exact_mode(lams + (mu1,))
    l1, l2, l3, l4, mu = _coerce(lams + (mu1,), exact)
    l12, l13, l14 = l1 - l2, l1 - l3, l1 - l4
    l23, l24, l34 = l2 - l3, l2 - l4, l3 - l4
    br = {
        (1, 2): {4: mu},
        (1, 3): {5: l13 * mu / l12},
        (1, 4): {2: -(l14**2) * mu / l12**2},
        (1, 5): {3: -(l14**2) * mu / (l13 * l12)},
        (2, 3): {6: l23 * mu / l12},
        (2, 4): {1: l24**2 * mu / l12**2},
        (2, 6): {3: -(l24**2) * mu / (l23 * l12)},
        (3, 5): {1: l34**2 * mu / (l13 * l12)},
        (3, 6): {2: l34**2 * mu / (l23 * l12)},
        (4, 5): {6: l14**2 * mu * l23 / (l13 * l12**2)},
        (4, 6): {5: -(l24**2) * l13 * mu / (l12**2 * l23)},
        (5, 6): {4: l34**2 * mu / (l13 * l23)},
    }
    return LieAlgebra.from_brackets(6, br, exact=exact)


def paper_codazzi_example(lam1, lam2, lam3, lam4, mu1) -> tuple[MetricLieAlgebra, SymmetricOperator]:
    """Six-dimensional algebra with orthonormal e1..e6 and A = Diag(l1, l2, l3, l4, l4, l4).

    Rational input (ints/Fractions) gives an exact construction; any float
    argument switches everything to float64.
    """
    alg = codazzi_example_algebra(lam1, lam2, lam3, lam4, mu1)
    m = MetricLieAlgebra.identity(alg)
    diag = _coerce((lam1, lam2, lam3, lam4, lam4, lam4), alg.exact)
    a = linalg.zeros((6, 6), alg.exact)
    for i, v in enumerate(diag):
        a[i, i] = v
    return m, SymmetricOperator(a, m)


def random_admissible_tuple(rng: np.random.Generator, bound: int = 9) -> tuple:
    """Distinct rational lam1..lam4 and a nonzero rational mu1."""
    while True:
        lams = tuple(Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4))) for _ in range(4))
        if len(set(lams)) == 4:
            break
    mu = Fraction(int(rng.integers(1, bound + 1)), int(rng.integers(1, 4)))
    if rng.random() < 0.5:
        mu = -mu
    return lams + (mu,)


# ---------------------------------------------------------------------------
# Random Lie algebras (float) for property tests and probe sweeps
# ---------------------------------------------------------------------------


def algebra_from_matrices(mats: np.ndarray) -> LieAlgebra:
    """Structure constants of the span of linearly independent matrices closed under commutators."""
    k = mats.shape[0]
    flat = mats.reshape(k, -1)
    comm = np.einsum("aij,bjk->abik", mats, mats)
    comm = (comm - np.swapaxes(comm, 0, 1)).reshape(k * k, -1)
    coef, res, *_ = np.linalg.lstsq(flat.T, comm.T, rcond=None)
    if np.abs(flat.T @ coef - comm.T).max() > 1e-9 * max(1.0, np.abs(comm).max()):
        raise LieAlgebraError("matrices do not span a Lie algebra")
    c = coef.T.reshape(k, k, k)
    return LieAlgebra(0.5 * (c - np.swapaxes(c, 0, 1)))


def generated_matrix_algebra(generators: np.ndarray, max_dim: int = 6) -> np.ndarray | None:
    """Orthonormalized basis of the matrix Lie algebra generated by ``generators``.

    Returns None if the closure exceeds ``max_dim``.
    """
    shape = generators.shape[1:]
    basis = linalg.row_basis(generators.reshape(len(generators), -1))
    while True:
        if basis.shape[0] > max_dim:
            return None
        mats = basis.reshape(-1, *shape)
        comm = np.einsum("aij,bjk->abik", mats, mats)
        comm = (comm - np.swapaxes(comm, 0, 1)).reshape(-1, basis.shape[1])
        new = linalg.row_basis(np.vstack([basis, comm]))
        if new.shape[0] == basis.shape[0]:
            return mats
        basis = new


def random_solvable(rng: np.random.Generator, max_dim: int = 6) -> LieAlgebra:
    """A random solvable Lie algebra of dimension <= max_dim (float), max_dim >= 3."""
    if max_dim < 3:
        raise ValueError("random_solvable needs max_dim >= 3")
    kind = rng.integers(0, 5)
    if kind == 1 or (kind == 2 and max_dim < 4):
        # H acting on R^m by identity plus a skew part: isometric to real hyperbolic space
        m = int(rng.integers(2, max_dim))
        s = rng.normal(size=(m, m))
        return semidirect_abelian([np.eye(m) + (s - s.T) / 2])
    if kind == 2:
        # product of two real hyperbolic factors
        p = int(rng.integers(2, max_dim - 1))
        q = int(rng.integers(2, max_dim - p + 1))
        return direct_sum(hyperbolic_solvable(p).to_float(), hyperbolic_solvable(q).to_float())
    if kind >= 3:
        for _ in range(100):
            if kind == 3:
                gens = np.triu(rng.normal(size=(2, 3, 3)))
            else:
                gens = np.triu(rng.normal(size=(2, 4, 4)), k=1)
            mats = generated_matrix_algebra(gens, max_dim)
            if mats is not None and len(mats) >= 2:
                return algebra_from_matrices(mats)
        # closures too large for max_dim: fall back to the semidirect construction
    # R^a acting on R^m by commuting matrices (polynomials in one matrix)
    m = int(rng.integers(2, max_dim))
    a = int(rng.integers(1, min(3, max_dim - m) + 1))
    base = rng.normal(size=(m, m))
    base /= np.linalg.norm(base, 2)
    ds = [sum(rng.normal() * np.linalg.matrix_power(base, p) for p in range(3)) for _ in range(a)]
    return semidirect_abelian(ds)


def semidirect_abelian(ds) -> LieAlgebra:
    """R^a acting on R^m through commuting m x m matrices ``ds`` (H_i first in the basis)."""
    a = len(ds)
    m = ds[0].shape[0]
    n = a + m
    c = np.zeros((n, n, n))
    for i, d in enumerate(ds):
        c[i, a:, a:] = d.T
        c[a:, i, a:] = -d.T
    return LieAlgebra(c)


def random_lie_algebra(rng: np.random.Generator, max_dim: int = 6) -> LieAlgebra:
    """Random float Lie algebra, solvable or not, in a random basis."""
    kind = rng.integers(0, 4)
    if kind == 0:
        alg = random_solvable(rng, max_dim)
    elif kind == 1:
        alg = direct_sum(su2().to_float(), abelian(int(rng.integers(0, max_dim - 3)) or 1).to_float())
        if alg.dim > max_dim:
            alg = su2().to_float()
    elif kind == 2:
        alg = sl2r().to_float()
        if max_dim >= 6 and rng.random() < 0.5:
            alg = direct_sum(alg, su2().to_float())
    else:
        # gl(2) as 2x2 matrices, or the euclidean algebra e(3)
        if rng.random() < 0.5:
            mats = np.zeros((4, 2, 2))
            for idx, (i, j) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
                mats[idx, i, j] = 1.0
            alg = algebra_from_matrices(mats)
        else:
            alg = euclidean3()
    return change_basis(alg, random_basis_change(rng, alg.dim))


def random_basis_change(rng: np.random.Generator, n: int, spread: float = 0.5) -> np.ndarray:
    """Q D with Q Haar-orthogonal and D = diag(exp(U(-spread, spread))): condition number <= e^(2 spread)."""
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    q = q * np.sign(np.diag(r))
    return q @ np.diag(np.exp(rng.uniform(-spread, spread, n)))


def euclidean3() -> LieAlgebra:
    """so(3) acting on R^3: [r_i, r_j] = eps r_k, [r_i, t_j] = eps t_k."""
    br = {}
    for (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        lo, hi = min(i, j), max(i, j)
        sign = 1 if i < j else -1
        br[(lo, hi)] = {k: sign}
        br[(i, j + 3)] = {k + 3: 1}
        br[(j, i + 3)] = {k + 3: -1}
    return LieAlgebra.from_brackets(6, br, exact=False)


def random_metric(rng: np.random.Generator, alg: LieAlgebra, spread: float = 0.5) -> MetricLieAlgebra:
    """Random Gram matrix F F^T with F lower-triangular near the identity."""
    n = alg.dim
    f = np.tril(rng.normal(scale=spread, size=(n, n)), k=-1) + np.diag(np.exp(rng.uniform(-spread, spread, n)))
    return MetricLieAlgebra(alg.to_float(), f @ f.T)


def eigenspace_subspaces(a: SymmetricOperator) -> list[Subspace]:
    """Standard-basis spans for a diagonal operator, grouped by equal diagonal entries."""
    diag = [a.matrix[i, i] for i in range(a.matrix.shape[0])]
    out = []
    for val in sorted(set(diag)):
        idx = [i for i, d in enumerate(diag) if d == val]
        basis = linalg.zeros((len(idx), len(diag)), a.m.exact)
        for r, i in enumerate(idx):
            basis[r, i] = Fraction(1) if a.m.exact else 1.0
        out.append(Subspace(len(diag), basis))
    return out

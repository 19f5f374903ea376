"""Lie algebras given by structure constants, and their basic invariants."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg

#: absolute tolerance for float-mode antisymmetry/containment checks
FLOAT_ATOL = 1e-12


class LieAlgebraError(ValueError):
    """Malformed structure constants or incompatible operands."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Finite-dimensional algebra with ``c[i, j, k]`` = coefficient of e_k in [e_i, e_j].

    Indices are 0-based in memory; all JSON I/O is 1-based.  ``exact`` selects
    rational arithmetic (object arrays of Fraction) versus float64.
    """

    c: np.ndarray
    labels: tuple[str, ...] | None = None
    exact: bool = field(init=False)

    def __post_init__(self):
        c = self.c
        exact = linalg.is_exact(c)
        if not exact:
            c = np.array(c, dtype=float)
        else:
            c = np.array(c, dtype=object, copy=True)
        if c.ndim != 3 or len(set(c.shape)) != 1 or c.shape[0] < 1:
            raise LieAlgebraError(f"structure constants must be n x n x n, got {c.shape}")
        asym = c + np.swapaxes(c, 0, 1)
        if exact:
            if any(v != 0 for v in asym.flat):
                raise LieAlgebraError("structure constants are not antisymmetric")
        elif np.abs(asym).max() > FLOAT_ATOL * max(1.0, np.abs(c).max()):
            raise LieAlgebraError("structure constants are not antisymmetric")
        if self.labels is not None and len(self.labels) != c.shape[0]:
            raise LieAlgebraError("one label per basis vector required")
        object.__setattr__(self, "c", _freeze(c))
        object.__setattr__(self, "exact", exact)

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, exact: bool = True, labels=None) -> "LieAlgebra":
        """Build from ``{(i, j): {k: value}}`` with 1-based i < j."""
        c = linalg.zeros((dim, dim, dim), exact)
        for (i, j), terms in brackets.items():
            if not (1 <= i < j <= dim):
                raise LieAlgebraError(f"bracket entries need 1 <= i < j <= dim, got ({i}, {j})")
            for k, v in terms.items():
                if not 1 <= k <= dim:
                    raise LieAlgebraError(f"index {k} out of range")
                v = Fraction(v) if exact else float(v)
                c[i - 1, j - 1, k - 1] += v
                c[j - 1, i - 1, k - 1] -= v
        return cls(c, labels=tuple(labels) if labels else None)

    def to_float(self) -> "LieAlgebra":
        if not self.exact:
            return self
        return LieAlgebra(linalg.to_float(self.c), labels=self.labels)

    def ad(self, x=None) -> np.ndarray:
        """Matrix of ad_x (columns are images of basis vectors); all ad_{e_i} if x is None."""
        ads = np.swapaxes(self.c, 1, 2)
        if x is None:
            return ads
        return np.einsum("i,ikj->kj", self._vec(x), ads)

    def _vec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=object if self.exact else float)
        if x.shape != (self.dim,):
            raise LieAlgebraError(f"expected a vector of length {self.dim}, got shape {x.shape}")
        if self.exact and x.size and not isinstance(x.flat[0], Fraction):
            x = linalg.as_fraction_array(x)
        return x

    def basis_vector(self, i: int) -> np.ndarray:
        """e_i with 1-based ``i``."""
        v = linalg.zeros((self.dim,), self.exact)
        v[i - 1] = Fraction(1) if self.exact else 1.0
        return v

    def __repr__(self):
        field_ = "rational" if self.exact else "float"
        return f"LieAlgebra(dim={self.dim}, field={field_})"


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of linearly independent rows of ``basis`` inside a ``ambient_dim``-space."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.atleast_2d(self.basis)
        if b.shape[0] == 0:
            b = linalg.zeros((0, self.ambient_dim), linalg.is_exact(self.basis))
        if b.shape[1] != self.ambient_dim:
            raise LieAlgebraError("basis vectors must have length ambient_dim")
        if linalg.rank(b) != b.shape[0]:
            raise LieAlgebraError("subspace basis is linearly dependent")
        object.__setattr__(self, "basis", _freeze(np.array(b, copy=True)))

    @classmethod
    def span(cls, vectors, ambient_dim: int, exact: bool, scale: float = 0.0) -> "Subspace":
        vectors = np.asarray(vectors, dtype=object if exact else float)
        vectors = vectors.reshape(-1, ambient_dim)
        return cls(ambient_dim, linalg.row_basis(vectors, scale))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def exact(self) -> bool:
        return linalg.is_exact(self.basis)

    def contains(self, v, atol: float = 1e-10) -> bool:
        v = np.asarray(v)
        if self.exact:
            if all(x == 0 for x in v):
                return True
            return linalg.rank(np.vstack([self.basis, v[None, :]])) == self.dim
        return self.distance(v) <= atol * max(1.0, float(np.linalg.norm(v)))

    def distance(self, v) -> float:
        """Euclidean (coefficient) distance from ``v`` to the subspace; float mode only."""
        v = linalg.to_float(np.asarray(v))
        if self.dim == 0:
            return float(np.linalg.norm(v))
        b = linalg.to_float(self.basis)
        coef, *_ = np.linalg.lstsq(b.T, v, rcond=None)
        return float(np.linalg.norm(b.T @ coef - v))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def bracket(alg: LieAlgebra, x, y) -> np.ndarray:
    """[x, y] for coefficient vectors x, y."""
    return np.einsum("i,j,ijk->k", alg._vec(x), alg._vec(y), alg.c)


def _jacobiator(c: np.ndarray) -> np.ndarray:
    """J[i, j, k, :] = [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]."""
    # [e_a, [e_b, e_c]] = sum_m c[b,c,m] c[a,m,:]
    t = np.einsum("bcm,amd->abcd", c, c)
    return t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))


def jacobi_defect(alg: LieAlgebra):
    """Largest Euclidean norm of the Jacobiator over basis triples.

    Exact mode returns a Fraction that is zero iff Jacobi holds; nonzero exact
    defects are reported through the max absolute coefficient to stay rational.
    """
    j = _jacobiator(alg.c)
    if alg.exact:
        return max((abs(v) for v in j.flat), default=Fraction(0))
    return float(np.sqrt((j**2).sum(axis=-1)).max())


def killing_form(alg: LieAlgebra) -> np.ndarray:
    """B[u, v] = tr(ad_u ad_v) on basis vectors."""
    return np.einsum("ujk,vkj->uv", alg.c, alg.c)


def derived_subalgebra(alg: LieAlgebra) -> Subspace:
    n = alg.dim
    return Subspace.span(alg.c.reshape(n * n, n), n, alg.exact)


def bracket_of_subspaces(alg: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    n = alg.dim
    if a.dim == 0 or b.dim == 0:
        return Subspace(n, linalg.zeros((0, n), alg.exact))
    prods = np.einsum("ai,bj,ijk->abk", a.basis, b.basis, alg.c).reshape(-1, n)
    return Subspace.span(prods, n, alg.exact, _product_scale(alg, a.basis, b.basis))


def _product_scale(alg: LieAlgebra, *factors) -> float:
    """Size of a bracket of the given rows, used as the rank reference in float mode."""
    if alg.exact:
        return 0.0
    out = float(np.abs(alg.c).max()) if alg.c.size else 0.0
    for f in factors:
        out *= float(np.linalg.norm(f, axis=-1).max()) if f.size else 0.0
    return out


def derived_series(alg: LieAlgebra) -> list[Subspace]:
    n = alg.dim
    current = Subspace(n, linalg.eye(n, alg.exact))
    series = [current]
    for _ in range(n + 1):
        nxt = bracket_of_subspaces(alg, current, current)
        series.append(nxt)
        if nxt.dim == 0 or nxt.dim == current.dim:
            break
        current = nxt
    return series


def is_solvable(alg: LieAlgebra) -> bool:
    return derived_series(alg)[-1].dim == 0


def is_nilpotent(alg: LieAlgebra) -> bool:
    n = alg.dim
    full = Subspace(n, linalg.eye(n, alg.exact))
    current = full
    for _ in range(n + 1):
        nxt = bracket_of_subspaces(alg, full, current)
        if nxt.dim == 0:
            return True
        if nxt.dim == current.dim:
            return False
        current = nxt
    return False


def _check_dim(alg: LieAlgebra, s: Subspace):
    if s.ambient_dim != alg.dim:
        raise LieAlgebraError(f"subspace lives in dimension {s.ambient_dim}, algebra has {alg.dim}")


def _all_contained(target: Subspace, vectors: Iterable[np.ndarray], atol: float) -> bool:
    return all(target.contains(v, atol) for v in vectors)


def is_subalgebra(alg: LieAlgebra, s: Subspace, atol: float = 1e-10) -> bool:
    _check_dim(alg, s)
    prods = np.einsum("ai,bj,ijk->abk", s.basis, s.basis, alg.c).reshape(-1, alg.dim)
    return _all_contained(s, prods, atol)


def is_ideal(alg: LieAlgebra, s: Subspace, atol: float = 1e-10) -> bool:
    _check_dim(alg, s)
    prods = np.einsum("ai,ijk->aik", s.basis, alg.c).reshape(-1, alg.dim)
    return _all_contained(s, prods, atol)


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    exact = a.exact and b.exact
    ca = a.c if exact else linalg.to_float(a.c)
    cb = b.c if exact else linalg.to_float(b.c)
    n, m = a.dim, b.dim
    c = linalg.zeros((n + m, n + m, n + m), exact)
    c[:n, :n, :n] = ca
    c[n:, n:, n:] = cb
    labels = None
    if a.labels and b.labels:
        labels = a.labels + b.labels
    return LieAlgebra(c, labels=labels)


def change_basis(alg: LieAlgebra, p: np.ndarray) -> LieAlgebra:
    """Structure constants in the basis f_a = sum_i p[i, a] e_i (columns of ``p``)."""
    pinv = linalg.inverse(p)
    c = np.einsum("ia,jb,ijk,ck->abc", p, p, alg.c, pinv)
    return LieAlgebra(c)


def restrict(alg: LieAlgebra, s: Subspace) -> LieAlgebra:
    """The subalgebra ``s`` as an algebra in the basis ``s.basis``.

    Raises LieAlgebraError if ``s`` is not closed under the bracket.
    """
    if not is_subalgebra(alg, s):
        raise LieAlgebraError("subspace is not a subalgebra")
    k = s.dim
    if k == 0:
        raise LieAlgebraError("cannot restrict to the zero subspace")
    prods = np.einsum("ai,bj,ijk->abk", s.basis, s.basis, alg.c).reshape(-1, alg.dim)
    bt = s.basis.T
    if alg.exact:
        # least-squares is exact here: the normal equations have a unique solution
        coef = linalg.solve(s.basis @ bt, s.basis @ prods.T).T
    else:
        coef = np.linalg.lstsq(bt, prods.T, rcond=None)[0].T
    c = coef.reshape(k, k, k)
    if not alg.exact:
        c = 0.5 * (c - np.swapaxes(c, 0, 1))
    return LieAlgebra(c)


# ---------------------------------------------------------------------------
# JSON I/O (1-based indices)
# ---------------------------------------------------------------------------


def parse_scalar(value, exact: bool):
    if exact:
        if isinstance(value, bool) or isinstance(value, float):
            raise LieAlgebraError(f"rational values must be strings or integers, got {value!r}")
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise LieAlgebraError(f"bad rational value {value!r}") from exc
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise LieAlgebraError(f"float values must be JSON numbers, got {value!r}")
    return float(value)


def format_scalar(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}" if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    return float(value)


def _field(data: dict) -> bool:
    fld = data.get("field", "rational")
    if fld not in ("rational", "float"):
        raise LieAlgebraError(f"unknown field {fld!r}")
    return fld == "rational"


def algebra_from_dict(data: dict) -> LieAlgebra:
    try:
        dim = data["dim"]
    except (KeyError, TypeError) as exc:
        raise LieAlgebraError("algebra JSON needs 'dim'") from exc
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise LieAlgebraError("'dim' must be a positive integer")
    exact = _field(data)
    brackets: dict = {}
    for entry in data.get("brackets", []):
        try:
            i, j, terms = entry["i"], entry["j"], entry["terms"]
        except (KeyError, TypeError) as exc:
            raise LieAlgebraError(f"malformed bracket entry {entry!r}") from exc
        if not (isinstance(i, int) and isinstance(j, int)) or i >= j:
            raise LieAlgebraError(f"bracket entries need integer i < j, got i={i!r}, j={j!r}")
        if (i, j) in brackets:
            raise LieAlgebraError(f"duplicate bracket entry ({i}, {j})")
        out = {}
        for t in terms:
            try:
                k = t["k"]
                v = parse_scalar(t["value"], exact)
            except (KeyError, TypeError) as exc:
                raise LieAlgebraError(f"malformed term {t!r}") from exc
            if not isinstance(k, int):
                raise LieAlgebraError(f"term index must be an integer, got {k!r}")
            out[k] = out.get(k, 0) + v
        brackets[(i, j)] = out
    return LieAlgebra.from_brackets(dim, brackets, exact=exact, labels=data.get("labels"))


def algebra_to_dict(alg: LieAlgebra) -> dict:
    entries = []
    n = alg.dim
    for i in range(n):
        for j in range(i + 1, n):
            terms = [
                {"k": k + 1, "value": format_scalar(alg.c[i, j, k])}
                for k in range(n)
                if alg.c[i, j, k] != 0
            ]
            if terms:
                entries.append({"i": i + 1, "j": j + 1, "terms": terms})
    out = {"dim": n, "field": "rational" if alg.exact else "float", "brackets": entries}
    if alg.labels:
        out["labels"] = list(alg.labels)
    return out


def load_algebra(path) -> LieAlgebra:
    with open(path) as fh:
        return algebra_from_dict(json.load(fh))


def matrix_from_json(rows: Sequence[Sequence], exact: bool) -> np.ndarray:
    try:
        vals = [[parse_scalar(v, exact) for v in row] for row in rows]
    except TypeError as exc:
        raise LieAlgebraError("matrix must be a list of rows") from exc
    if not vals or any(len(r) != len(vals) for r in vals):
        raise LieAlgebraError("matrix must be square and non-empty")
    return np.array(vals, dtype=object if exact else float)


def matrix_to_json(m: np.ndarray) -> list:
    return [[format_scalar(v) for v in row] for row in m]

"""Small dense linear algebra over the rationals and over float64.

Exact arrays are numpy arrays of ``dtype=object`` holding
:class:`fractions.Fraction`; float arrays are ordinary ``float64``.  Every
function dispatches on the dtype so callers never branch on the field.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

#: relative singular-value cutoff used for float rank decisions
RANK_RTOL = 1e-10


def is_exact(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def as_fraction_array(a) -> np.ndarray:
    """Convert ints/strings/Fractions (nested lists allowed) to an object array."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, float):
            raise TypeError("floats cannot be converted to exact rationals")
        out[idx] = Fraction(v)
    return out


def to_float(a) -> np.ndarray:
    if is_exact(a):
        return np.vectorize(float, otypes=[float])(a) if a.size else np.zeros(a.shape)
    return np.asarray(a, dtype=float)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def eye(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an exact matrix; returns (R, pivot columns)."""
    r = np.array(m, dtype=object, copy=True)
    n_rows, n_cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        piv = next((i for i in range(row, n_rows) if r[i, col] != 0), None)
        if piv is None:
            continue
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = r[row] / r[row, col]
        for i in range(n_rows):
            if i != row and r[i, col] != 0:
                r[i] = r[i] - r[i, col] * r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(m: np.ndarray) -> int:
    m = np.atleast_2d(m)
    if m.size == 0:
        return 0
    if is_exact(m):
        return len(rref(m)[1])
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > RANK_RTOL * s[0]))


def row_basis(vectors: np.ndarray, scale: float = 0.0) -> np.ndarray:
    """Linearly independent rows spanning the same space (exact: rref rows).

    In float mode singular values below RANK_RTOL * max(s_max, scale) are
    dropped; pass ``scale`` when the rows are products whose exact value may
    be zero, so that pure rounding noise is not mistaken for a direction.
    """
    vectors = np.atleast_2d(vectors)
    n = vectors.shape[1]
    if vectors.shape[0] == 0:
        return zeros((0, n), is_exact(vectors))
    if is_exact(vectors):
        r, pivots = rref(vectors)
        return r[: len(pivots)]
    _, s, vt = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, n))
    k = int(np.sum(s > RANK_RTOL * max(s[0], scale)))
    return vt[:k]


def nullspace(m: np.ndarray) -> np.ndarray:
    """Rows spanning {x : m @ x = 0}."""
    m = np.atleast_2d(m)
    n = m.shape[1]
    if is_exact(m):
        r, pivots = rref(m)
        free = [c for c in range(n) if c not in pivots]
        basis = zeros((len(free), n), True)
        for k, f in enumerate(free):
            basis[k, f] = Fraction(1)
            for i, p in enumerate(pivots):
                basis[k, p] = -r[i, f]
        return basis
    _, s, vt = np.linalg.svd(m)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n)
    k = int(np.sum(s > RANK_RTOL * s[0]))
    return vt[k:]


def inverse(m: np.ndarray) -> np.ndarray:
    if not is_exact(m):
        return np.linalg.inv(m)
    n = m.shape[0]
    aug = np.concatenate([m, eye(n, True)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return r[:, n:]


def solve(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    if not is_exact(m):
        return np.linalg.solve(m, b)
    return inverse(m) @ b


def det(m: np.ndarray):
    if not is_exact(m):
        return float(np.linalg.det(m))
    a = np.array(m, dtype=object, copy=True)
    n = a.shape[0]
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i, c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            out = -out
        out *= a[c, c]
        for i in range(c + 1, n):
            if a[i, c] != 0:
                a[i] = a[i] - (a[i, c] / a[c, c]) * a[c]
    return out


def is_positive_definite(g: np.ndarray) -> bool:
    if g.shape[0] == 0:
        return True
    if is_exact(g):
        return all(det(g[:k, :k]) > 0 for k in range(1, g.shape[0] + 1))
    return bool(np.linalg.eigvalsh(g).min() > 1e-12)


def gram_schmidt(vectors: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Orthogonalize the rows of ``vectors`` against ``gram``.

    Exact input yields an orthogonal (not normalized) basis, since unit vectors
    need square roots.  Float input uses modified Gram-Schmidt with a second
    re-orthogonalization pass and returns orthonormal rows.  Dependent rows
    are dropped in both modes.
    """
    exact = is_exact(vectors)
    out: list[np.ndarray] = []
    for v in np.atleast_2d(vectors):
        w = np.array(v, copy=True)
        for _ in range(1 if exact else 2):
            for q in out:
                qq = q @ gram @ q
                w = w - ((q @ gram @ w) / qq) * q
        norm2 = w @ gram @ w
        if exact:
            if norm2 != 0:
                out.append(w)
        else:
            ref = v @ gram @ v
            if norm2 > (RANK_RTOL**2) * max(ref, 1e-300) and norm2 > 0:
                out.append(w / np.sqrt(norm2))
    n = np.atleast_2d(vectors).shape[1]
    if not out:
        return zeros((0, n), exact)
    return np.array(out, dtype=object if exact else float)


def norms_squared(rows: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Squared lengths of the rows of ``rows`` w.r.t. ``gram``."""
    if rows.shape[0] == 0:
        return zeros((0,), is_exact(rows))
    return np.einsum("ai,ij,aj->a", rows, gram, rows)

"""Independent brute-force reference computations.

Everything here works in a Gram-orthonormal frame with plain Python loops
over lists (Fractions or floats), using the classical formula

    <nabla_X Y, Z> = 1/2 (<[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>)

and the textbook curvature R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y].
No code from the package is used, so agreement is a genuine cross-check.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np


def orthonormal_frame(gram):
    """Rows f_a (in e-coordinates) with f_a . gram . f_b = delta_ab, via Cholesky."""
    g = np.asarray(gram, dtype=float)
    low = np.linalg.cholesky(g)
    return np.linalg.inv(low)  # rows: L^-1 G L^-T = I


def frame_constants(c, frame):
    """C[a][b][d] = <[f_a, f_b], f_d> for an orthonormal frame (float)."""
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    inv = np.linalg.inv(frame)  # e-coordinates -> frame coordinates is v @ inv
    out = [[[0.0] * n for _ in range(n)] for _ in range(n)]
    for a, b in product(range(n), repeat=2):
        br = [sum(frame[a][i] * frame[b][j] * c[i][j][k] for i in range(n) for j in range(n)) for k in range(n)]
        coords = [sum(br[k] * inv[k][d] for k in range(n)) for d in range(n)]
        for d in range(n):
            out[a][b][d] = coords[d]
    return out


def connection(C):
    """G[a][b][d] = <nabla_{f_a} f_b, f_d>."""
    n = len(C)
    half = Fraction(1, 2) if isinstance(C[0][0][0], Fraction) else 0.5
    return [[[half * (C[a][b][d] - C[b][d][a] + C[d][a][b]) for d in range(n)] for b in range(n)] for a in range(n)]


def _nabla_vec(G, a, v):
    n = len(G)
    return [sum(v[b] * G[a][b][d] for b in range(n)) for d in range(n)]


def curvature(C):
    """R[a][b][x][d] = <R(f_a, f_b) f_x, f_d>."""
    n = len(C)
    G = connection(C)
    zero = C[0][0][0] * 0
    out = [[[[zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for a, b, x in product(range(n), repeat=3):
        fx = [1 if i == x else 0 for i in range(n)]
        t1 = _nabla_vec(G, a, _nabla_vec(G, b, fx))
        t2 = _nabla_vec(G, b, _nabla_vec(G, a, fx))
        ab = C[a][b]
        t3 = [sum(ab[k] * G[k][x][d] for k in range(n)) for d in range(n)]
        for d in range(n):
            out[a][b][x][d] = t1[d] - t2[d] - t3[d]
    return out


def ricci(C):
    """ric[x][y] = sum_a <R(f_a, f_x) f_y, f_a> in the frame."""
    n = len(C)
    R = curvature(C)
    return [[sum(R[a][x][y][a] for a in range(n)) for y in range(n)] for x in range(n)]


def codazzi_norm_sq(C, T):
    """sum over the frame of <(nabla_a T) f_b - (nabla_b T) f_a, f_c>^2 for T[c][b] = <T f_b, f_c>."""
    n = len(C)
    G = connection(C)

    def nabla_T(a, b):
        # (nabla_a T) f_b = nabla_a (T f_b) - T (nabla_a f_b)
        tb = [T[d][b] for d in range(n)]
        first = _nabla_vec(G, a, tb)
        nab = G[a][b]
        second = [sum(T[d][k] * nab[k] for k in range(n)) for d in range(n)]
        return [first[d] - second[d] for d in range(n)]

    total = C[0][0][0] * 0
    for a, b in product(range(n), repeat=2):
        x, y = nabla_T(a, b), nabla_T(b, a)
        total += sum((x[d] - y[d]) ** 2 for d in range(n))
    return total


def divergence_norm_sq(C):
    """|sum_i (nabla_{f_i} R)(f_i, X) Y|^2 summed over the frame."""
    n = len(C)
    G = connection(C)
    R = curvature(C)

    def nabla_R(e, a, b, x, d):
        # (nabla_e R)(a, b) x = nabla_e(R(a,b)x) - R(nabla_e a, b)x - R(a, nabla_e b)x - R(a,b)(nabla_e x)
        val = sum(R[a][b][x][k] * G[e][k][d] for k in range(n))
        val -= sum(R[k][b][x][d] * G[e][a][k] for k in range(n))
        val -= sum(R[a][k][x][d] * G[e][b][k] for k in range(n))
        val -= sum(R[a][b][k][d] * G[e][x][k] for k in range(n))
        return val

    total = 0.0
    for x, y, d in product(range(n), repeat=3):
        s = sum(nabla_R(i, i, x, y, d) for i in range(n))
        total += float(s) ** 2
    return total


def ricci_operator_e(c, gram):
    """Ricci operator in e-coordinates (float), from the frame computation."""
    frame = orthonormal_frame(gram)
    C = frame_constants(c, frame)
    r = np.array(ricci(C), dtype=float)
    # frame rows f_a; Ric f_b = sum_a r[a][b] f_a  =>  Ric_e = F^T r F^-T
    return frame.T @ r @ np.linalg.inv(frame.T)


def exact_identity_frame(c):
    """Structure constants as nested Fraction lists (identity metric: e is orthonormal)."""
    c = np.asarray(c, dtype=object)
    n = c.shape[0]
    return [[[Fraction(c[a, b, d]) for d in range(n)] for b in range(n)] for a in range(n)]

"""Tensor kernels for left-invariant geometry.

All functions work on object arrays of Fractions (no batch axes) and on float
arrays with any number of leading batch axes ``...``.  Conventions:

* ``c[..., i, j, k]``: coefficient of e_k in [e_i, e_j]
* ``g``/``ginv``: Gram matrix and its inverse
* endomorphisms are matrices ``M[m, j]`` = coefficient of e_m in M e_j
* ``L[..., u]`` is the matrix of the Levi-Civita product L_{e_u}
"""

from __future__ import annotations

import numpy as np


def _es(subscripts, *operands):
    # contraction-path optimization only pays off (and only works) for float arrays
    if operands[0].dtype == object:
        return np.einsum(subscripts, *operands)
    return np.einsum(subscripts, *operands, optimize=True)


def _mat(a, rows):
    """Reshape the trailing three axes (n, n, n) into a matrix (rows, n^3 / rows)."""
    n = a.shape[-1]
    return a.reshape(a.shape[:-3] + (rows, n**3 // rows))


def _ten(a, n):
    return a.reshape(a.shape[:-2] + (n, n, n))


def lower(c, g):
    """c_low[i, j, l] = <[e_i, e_j], e_l>."""
    n = c.shape[-1]
    return _ten(_mat(c, n * n) @ g, n)


def levi_civita(c, g, ginv):
    n = c.shape[-1]
    cl = lower(c, g)
    # 2<L_i e_j, e_l> = <[e_i,e_j],e_l> + <[e_l,e_i],e_j> + <[e_l,e_j],e_i>
    two_gamma = cl + np.moveaxis(cl, -3, -1) + np.swapaxes(np.moveaxis(cl, -3, -1), -2, -3)
    lo = _ten(_mat(two_gamma, n * n) @ ginv, n)  # [i, j, m]
    return np.swapaxes(lo, -1, -2) / 2

def curvature(c, lc):
    """K[i, j] = L_{[e_i,e_j]} - [L_i, L_j] as a (..., n, n, n, n) array."""
    k = np.einsum("...ijp,...pmn->...ijmn", c, lc)
    ll = np.einsum("...imq,...jqn->...ijmn", lc, lc)
    return k - ll + np.swapaxes(ll, -3, -4)


def ricci_form(c, lc):
    """ric[i, j] = tr(w -> K(e_i, w) e_j), without materializing K."""
    n = c.shape[-1]
    # t1 = sum c[i,k,p] L[p,k,j];  t2 = sum L[i,k,q] L[k,q,j];  t3 = sum L[k,k,q] L[i,q,j]
    t1 = _mat(c, n) @ np.swapaxes(lc, -3, -2).reshape(lc.shape[:-3] + (n * n, n))
    t2 = _mat(lc, n) @ _mat(lc, n * n)
    v = np.trace(lc, axis1=-3, axis2=-2)
    t3 = (v[..., None, None, :] @ lc)[..., 0, :]
    return t1 - t2 + t3


def ricci_operator(c, g, ginv, lc=None):
    if lc is None:
        lc = levi_civita(c, g, ginv)
    return ginv @ ricci_form(c, lc)


def covariant_derivatives(lc, t):
    """N[u] = L_u T - T L_u for every basis vector u."""
    tt = t[..., None, :, :]
    return lc @ tt - tt @ lc


def nabla_trilinear(lc, t, g):
    """P[u, v, w] = <(nabla_u T) v, w>."""
    return np.swapaxes(covariant_derivatives(lc, t), -1, -2) @ g[..., None, :, :]


def codazzi_trilinear(lc, t, g):
    """d[u, v, w] = <(nabla_u T) v - (nabla_v T) u, w>."""
    p = nabla_trilinear(lc, t, g)
    return p - np.swapaxes(p, -2, -3)


def frame_norm_sq3(d, ginv):
    """Squared Frobenius norm of a trilinear form over a g-orthonormal frame."""
    # one index at a time keeps exact (object) arithmetic at O(n^4)
    n = d.shape[-1]
    gt = np.swapaxes(ginv, -1, -2)
    x = d @ ginv[..., None, :, :]
    x = gt[..., None, :, :] @ x
    x = _ten(gt @ _mat(x, n), n)
    return np.sum(x * d, axis=(-1, -2, -3))


def frame_norm_sq2(b, ginv):
    x = np.einsum("...ab,...ac,...bd->...cd", b, ginv, ginv) if b.dtype != object else (ginv.T @ b @ ginv)
    return np.sum(x * b, axis=(-1, -2))


def bracket_norm_sq(c, g, ginv):
    """sum over an orthonormal frame of <[f_a, f_b], f_c>^2."""
    return frame_norm_sq3(lower(c, g), ginv)


def killing(c):
    return np.einsum("...ujk,...vkj->...uv", c, c)


def trace_ad(c):
    return np.einsum("...ijj->...i", c)


def ricci_structure(c, g, ginv):
    """Ric = R - B/2 - S(ad_H) assembled from brackets only (no Koszul step)."""
    cl = lower(c, g)
    first = _es("...uab,...vcd,...ac,...bd->...uv", cl, cl, ginv, ginv)
    second = _es("...abu,...cdv,...ac,...bd->...uv", cl, cl, ginv, ginv)
    r_form = -first / 2 + second / 4
    b_form = killing(c)
    h = np.einsum("...ij,...j->...i", ginv, trace_ad(c))
    ad_h = np.einsum("...i,...ijk->...kj", h, c)
    ad_h_adj = _es("...ml,...kl,...kj->...mj", ginv, ad_h, g)
    s_ad_h = (ad_h + ad_h_adj) / 2
    return np.einsum("...ml,...lj->...mj", ginv, r_form - b_form / 2) - s_ad_h


def curvature_divergence(c, lc, ginv):
    """div[x] = sum_i (nabla_{E_i} K)(E_i, e_x) as endomorphisms (E orthonormal)."""
    k = curvature(c, lc)
    # (nabla_e K)(a, b) = [L_e, K(a,b)] - K(L_e a, b) - K(a, L_e b)
    t1 = np.einsum("...emp,...abpn->...eabmn", lc, k)
    t2 = np.einsum("...abmp,...epn->...eabmn", k, lc)
    t3 = np.einsum("...epa,...pbmn->...eabmn", lc, k)
    t4 = np.einsum("...epb,...apmn->...eabmn", lc, k)
    nk = t1 - t2 - t3 - t4
    return np.einsum("...ea,...eaxmn->...xmn", ginv, nk)

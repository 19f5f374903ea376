"""Numerical search for harmonic-curvature metrics on a fixed Lie algebra.

Metrics are parametrized by a lower-triangular factor F (log-diagonal plus
strictly lower entries), gram = F F^T.  The search minimizes the squared
Codazzi defect of the Ricci operator on the unit-volume slice det(gram) = 1,
weighted by the curvature scale s = |Ric|^2 + eps |mu|^4 (|mu|^2 is the sum of
<[f_a, f_b], f_c>^2 over an orthonormal frame); parameters are projected back
onto the slice after each step.

Convergence and classification use |defect| / s^(3/4) and |nabla Ric| / s^(3/4)
instead, which do not change under rescaling or automorphisms.  Volume alone
is not enough: automorphisms with determinant != 1 (for instance on the
Heisenberg algebra) move along the slice while scaling the metric, and the raw
defect then decays to 0 without the metric approaching a harmonic one.

Left-invariant metrics can also degenerate towards harmonic limits (collapsing
Berger spheres), so the box on log-diagonal entries and a conditioning cap keep
the search in a compact region.  All restarts and all finite-difference points
of one iteration are evaluated as a single batched tensor computation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .geometry import MetricLieAlgebra
from .lie_algebra import LieAlgebra, LieAlgebraError, jacobi_defect

HARMONIC_PARALLEL = "harmonic_parallel"
CANDIDATE = "harmonic_nonparallel_CANDIDATE"
NONCONVERGED = "nonconverged"

JACOBI_TOL = 1e-9
ARMIJO = 1e-4
MAX_HALVINGS = 64
HALVING_BATCH = 8
#: weight of |mu|^4 in the curvature scale used to normalize defects
SCALE_EPS = 1e-4
#: Gram matrices with a larger condition number are treated as infeasible
MAX_COND = 1e8


@dataclass(frozen=True)
class ProbeConfig:
    seed: int = 0
    restarts: int = 16
    max_iters: int = 400
    tol_defect: float = 1e-9
    tol_parallel: float = 1e-6
    step_init: float = 0.1
    param_bounds: float = 8.0
    init_box: float = 1.0
    fd_step: float = 1e-6
    polish_iters: int = 100
    stall_window: int = 50
    stall_rel: float = 1e-14
    plateau_window: int = 100
    plateau_rel: float = 1e-8

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        for name in ("tol_defect", "tol_parallel", "step_init", "param_bounds", "init_box", "fd_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class RestartTrace:
    restart: int
    iterations: int
    defect: float
    parallel_norm: float
    status: str


@dataclass
class ProbeResult:
    """Outcome of a multi-start search.

    ``defect`` and ``parallel_norm`` are the Frobenius norms of the Codazzi
    defect of Ric and of nabla Ric divided by s^(3/4), s = |Ric|^2 + eps |mu|^4.
    Both ratios are unchanged by rescaling the metric and by automorphisms,
    so they measure the shape of the metric, not its size.
    """

    best_params: np.ndarray
    defect: float
    parallel_norm: float
    classification: str
    iterations: int
    best_restart: int
    traces: list = field(default_factory=list)

    def summary(self) -> dict:
        counts: dict[str, int] = {}
        for t in self.traces:
            counts[t.status] = counts.get(t.status, 0) + 1
        return counts

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "defect": self.defect,
            "parallel_norm": self.parallel_norm,
            "iterations": self.iterations,
            "best_restart": self.best_restart,
            "best_params": [float(x) for x in self.best_params],
            "restart_summary": self.summary(),
            "restarts": [asdict(t) for t in self.traces],
        }


# ---------------------------------------------------------------------------
# parametrization


def n_params(n: int) -> int:
    return n * (n + 1) // 2


def _factor(params: np.ndarray, n: int) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    f = np.zeros(params.shape[:-1] + (n, n))
    idx = np.arange(n)
    f[..., idx, idx] = np.exp(params[..., :n])
    lo = np.tril_indices(n, -1)
    f[..., lo[0], lo[1]] = params[..., n:]
    return f


def grams_from_parameters(params: np.ndarray, n: int) -> np.ndarray:
    f = _factor(params, n)
    return f @ np.swapaxes(f, -1, -2)


def metric_from_parameters(alg: LieAlgebra, params) -> MetricLieAlgebra:
    params = np.asarray(params, dtype=float)
    n = alg.dim
    if params.shape != (n_params(n),):
        raise ValueError(f"expected {n_params(n)} parameters for dimension {n}, got shape {params.shape}")
    if not np.all(np.isfinite(params)):
        raise ValueError("metric parameters must be finite")
    return MetricLieAlgebra(alg.to_float(), grams_from_parameters(params, n))


def parameters_from_gram(gram) -> np.ndarray:
    f = np.linalg.cholesky(np.asarray(gram, dtype=float))
    n = f.shape[0]
    lo = np.tril_indices(n, -1)
    return np.concatenate([np.log(np.diag(f)), f[lo]])


def unit_volume(params: np.ndarray, n: int) -> np.ndarray:
    """Rescale the metric to det(gram) = 1 (mean log-diagonal zero)."""
    p = np.array(params, dtype=float)
    s = p[..., :n].mean(axis=-1, keepdims=True)
    p[..., :n] -= s
    p[..., n:] *= np.exp(-s)
    return p


def recentre(params: np.ndarray, n: int, bound: float) -> np.ndarray:
    """Unit volume, then clip to the box.

    Off-diagonal entries are clipped to |x| <= exp(bound) so the factor stays
    well away from overflow.
    """
    with np.errstate(over="ignore"):
        p = unit_volume(params, n)
    lim = math.exp(bound)
    p[..., :n] = np.clip(p[..., :n], -bound, bound)
    p[..., n:] = np.clip(np.nan_to_num(p[..., n:]), -lim, lim)
    return p


# ---------------------------------------------------------------------------
# objective


def _geometry(c: np.ndarray, params: np.ndarray):
    n = c.shape[0]
    f = _factor(params, n)
    g = f @ np.swapaxes(f, -1, -2)
    # F is triangular with positive diagonal, so it is always invertible
    finv = np.linalg.inv(f)
    ginv = np.swapaxes(finv, -1, -2) @ finv
    lc = kernels.levi_civita(c, g, ginv)
    ric = kernels.ricci_operator(c, g, ginv, lc)
    return g, ginv, lc, ric, finv


def _cond_bound(g, ginv):
    """Upper bound ||g||_F ||g^-1||_F on the condition number of g."""
    return np.sqrt(np.sum(g * g, axis=(-1, -2)) * np.sum(ginv * ginv, axis=(-1, -2)))


def _evaluate(c: np.ndarray, params: np.ndarray, with_parallel: bool = False):
    """Batched squared defect, curvature scale (and squared |nabla Ric|) at unit volume.

    The scale is |Ric|^2 + SCALE_EPS |mu|^4; the |mu| term keeps the search
    objective finite at flat metrics.
    """
    n = c.shape[0]
    g, ginv, lc, ric, _ = _geometry(c, unit_volume(params, n))
    raw = kernels.frame_norm_sq3(kernels.codazzi_trilinear(lc, ric, g), ginv)
    mu2 = kernels.bracket_norm_sq(c, g, ginv)
    scale = np.einsum("...ij,...ji->...", ric, ric) + SCALE_EPS * mu2**2
    # reject metrics too ill-conditioned to evaluate reliably
    feasible = _cond_bound(g, ginv) <= MAX_COND
    raw = np.where(feasible, np.maximum(raw, 0.0), np.inf)
    if not with_parallel:
        return raw, scale
    par = kernels.frame_norm_sq3(kernels.nabla_trilinear(lc, ric, g), ginv)
    return raw, scale, np.where(feasible, np.maximum(par, 0.0), np.inf)


def _normalize(raw, scale, power: float = 1.0):
    """raw / scale**power, with 0/0 read as 0."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        safe = np.where(scale > 0, scale, 1.0) ** power
        out = np.where(scale > 0, raw / safe, np.where(raw > 0, np.inf, 0.0))
    return np.where(np.isnan(out), np.inf, out)


def invariant_defects(raw, scale, par=None):
    """Norms divided by scale^(3/4): unchanged by rescaling and by automorphisms."""
    out = np.sqrt(_normalize(raw, scale, 1.5))
    if par is None:
        return out
    return out, np.sqrt(_normalize(par, scale, 1.5))


def _checked(alg: LieAlgebra, params) -> tuple[np.ndarray, np.ndarray]:
    c = alg.to_float().c
    params = np.asarray(params, dtype=float)
    if params.shape[-1] != n_params(alg.dim):
        raise ValueError(f"expected {n_params(alg.dim)} parameters")
    return c, params


def defect_objective(alg: LieAlgebra, params) -> float:
    """Squared norm of the Codazzi defect of Ric at the metric given by ``params``."""
    c, params = _checked(alg, params)
    g, ginv, lc, ric, _ = _geometry(c, params)
    raw = kernels.frame_norm_sq3(kernels.codazzi_trilinear(lc, ric, g), ginv)
    return float(np.maximum(raw, 0.0))


def normalized_objective(alg: LieAlgebra, params) -> float:
    """Scale-free search objective: squared defect over curvature scale at unit volume."""
    c, params = _checked(alg, params)
    return float(_normalize(*_evaluate(c, params)))


def _fd_points(params: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    p = params.shape[-1]
    steps = h * np.maximum(1.0, np.abs(params))
    eye = np.eye(p) * steps[..., None, :]
    pts = np.concatenate([params[..., None, :] + eye, params[..., None, :] - eye], axis=-2)
    return pts, steps


def gradient(alg: LieAlgebra, params, h: float = 1e-6, normalized: bool = False) -> np.ndarray:
    """Central finite-difference gradient, step h*max(1, |p_i|) per component."""
    if not h > 0:
        raise ValueError("h must be positive")
    c, params = _checked(alg, params)
    pts, steps = _fd_points(params, h)
    if normalized:
        f = _normalize(*_evaluate(c, pts))
    else:
        g, ginv, lc, ric, _ = _geometry(c, pts)
        f = kernels.frame_norm_sq3(kernels.codazzi_trilinear(lc, ric, g), ginv)
    p = params.shape[-1]
    return (f[..., :p] - f[..., p:]) / (2 * steps)


# ---------------------------------------------------------------------------
# search


def _init_params(config: ProbeConfig, n: int) -> np.ndarray:
    rows = []
    for r in range(config.restarts):
        rng = np.random.default_rng([config.seed, r])
        rows.append(rng.uniform(-config.init_box, config.init_box, n_params(n)))
    return recentre(np.array(rows), n, config.param_bounds)


class _Restarts:
    """Lock-step descent state for all restarts; only active rows are evaluated."""

    def __init__(self, c, config: ProbeConfig, x0: np.ndarray):
        self.c, self.config = c, config
        self.n = c.shape[0]
        self.x = x0
        nr = x0.shape[0]
        self.f, self.inv = self.objective(x0)
        self.iters = np.zeros(nr, dtype=int)
        self.polish = np.zeros(nr, dtype=int)
        self.alpha = np.full(nr, np.nan)
        self.x_prev = np.full_like(x0, np.nan)
        self.g_prev = np.full_like(x0, np.nan)
        self.history = [self.f.copy()]
        self.inv_history = [self.inv.copy()]
        self.active = self.inv >= config.tol_defect

    def objective(self, pts):
        raw, scale = _evaluate(self.c, pts)
        return _normalize(raw, scale), invariant_defects(raw, scale)

    def grad(self, pts):
        p = pts.shape[-1]
        fd, steps = _fd_points(pts, self.config.fd_step)
        f = self.objective(fd)[0]
        return (f[..., :p] - f[..., p:]) / (2 * steps)

    def step(self):
        cfg = self.config
        idx = np.flatnonzero(self.active)
        x, f = self.x[idx], self.f[idx]
        g = self.grad(x)
        gg = np.einsum("ri,ri->r", g, g)
        # Barzilai-Borwein step length; first iteration uses step_init / |g|
        s, y = x - self.x_prev[idx], g - self.g_prev[idx]
        sy = np.einsum("ri,ri->r", s, y)
        with np.errstate(invalid="ignore", divide="ignore"):
            bb = np.einsum("ri,ri->r", s, s) / sy
        alpha = np.where(np.isfinite(bb) & (sy > 0), bb, 2 * self.alpha[idx])
        bad = ~np.isfinite(alpha) | (alpha <= 0)
        alpha = np.where(bad, cfg.step_init / np.sqrt(np.maximum(gg, 1e-300)), alpha)
        accepted = (gg == 0) | ~np.isfinite(gg)
        x_new, f_new, inv_new = x.copy(), f.copy(), self.inv[idx].copy()
        # backtracking: the first of alpha, alpha/2, alpha/4, ... meeting the Armijo
        # condition wins; HALVING_BATCH halvings are evaluated per call
        halvings = 2.0 ** -np.arange(HALVING_BATCH)
        for _ in range(0, MAX_HALVINGS, HALVING_BATCH):
            todo = np.flatnonzero(~accepted)
            if todo.size == 0:
                break
            steps = alpha[todo, None] * halvings  # (t, h)
            trial = x[todo, None, :] - steps[..., None] * g[todo, None, :]
            trial = recentre(trial, self.n, cfg.param_bounds)
            ft, rt = self.objective(trial)
            ok = np.isfinite(ft) & (ft <= f[todo, None] - ARMIJO * steps * gg[todo, None])
            hit = ok.any(axis=1)
            first = np.argmax(ok, axis=1)
            rows = np.flatnonzero(hit)
            sel = todo[rows]
            x_new[sel] = trial[rows, first[rows]]
            f_new[sel], inv_new[sel] = ft[rows, first[rows]], rt[rows, first[rows]]
            alpha[sel] = steps[rows, first[rows]]
            alpha[todo[~hit]] *= 2.0**-HALVING_BATCH
            accepted[sel] = True
        moved = accepted & np.isfinite(gg) & (gg > 0)
        self.x_prev[idx], self.g_prev[idx] = x, g
        self.x[idx] = np.where(moved[:, None], x_new, x)
        self.f[idx] = np.where(moved, f_new, f)
        self.inv[idx] = np.where(moved, inv_new, self.inv[idx])
        self.alpha[idx] = alpha
        self.iters[idx] += 1
        self.history.append(self.f.copy())
        self.inv_history.append(self.inv.copy())
        self._update_active(idx, moved)

    def _update_active(self, idx, moved):
        cfg = self.config
        f = self.f[idx]
        reached = self.inv[idx] < cfg.tol_defect
        self.polish[idx[reached]] += 1
        stop = ~moved
        stop |= reached & (self.polish[idx] >= cfg.polish_iters)
        stop |= ~reached & (self.iters[idx] >= cfg.max_iters)
        if len(self.history) > cfg.stall_window:
            old = self.history[-cfg.stall_window - 1][idx]
            stop |= (old - f) <= cfg.stall_rel * np.maximum(old, 1e-300)
        if len(self.inv_history) > cfg.plateau_window:
            # the scale-free defect no longer improves: the objective is only
            # sliding along an automorphism orbit
            old = self.inv_history[-cfg.plateau_window - 1][idx]
            stop |= ~reached & ((old - self.inv[idx]) <= cfg.plateau_rel * old)
        self.active[idx[stop]] = False


def minimize(alg: LieAlgebra, config: ProbeConfig | None = None) -> ProbeResult:
    """Multi-start gradient descent with Barzilai-Borwein steps and Armijo backtracking.

    A restart stops when its defect is below tol_defect for polish_iters
    further iterations, when the line search cannot decrease the objective,
    when the objective decreased by less than stall_rel (relative) over
    stall_window iterations, when the scale-free defect decreased by less than
    plateau_rel over plateau_window iterations, or after max_iters iterations
    above tolerance.
    """
    config = config or ProbeConfig()
    if jacobi_defect(alg.to_float()) > JACOBI_TOL:
        raise LieAlgebraError("input does not satisfy the Jacobi identity")
    c = alg.to_float().c
    n = alg.dim
    state = _Restarts(c, config, _init_params(config, n))
    while state.active.any():
        state.step()

    raw, scale, par = _evaluate(c, state.x, with_parallel=True)
    defect, par_norm = invariant_defects(raw, scale, par)
    traces = []
    for r in range(state.x.shape[0]):
        if defect[r] < config.tol_defect:
            status = HARMONIC_PARALLEL if par_norm[r] < config.tol_parallel else CANDIDATE
        else:
            status = NONCONVERGED
        traces.append(RestartTrace(r, int(state.iters[r]), float(defect[r]), float(par_norm[r]), status))
    # a non-parallel harmonic restart is the interesting outcome, so it wins over the lowest defect
    cands = [t.restart for t in traces if t.status == CANDIDATE]
    best = cands[0] if cands else int(np.argmin(np.where(np.isfinite(defect), defect, np.inf)))
    t = traces[best]
    return ProbeResult(state.x[best].copy(), t.defect, t.parallel_norm, t.status, t.iterations, best, traces)


def sweep(algebras, config: ProbeConfig | None = None) -> tuple[list[ProbeResult], dict[str, int]]:
    """Run ``minimize`` on each algebra in order; returns results and counts per classification."""
    results = [minimize(a, config) for a in algebras]
    counts = {HARMONIC_PARALLEL: 0, CANDIDATE: 0, NONCONVERGED: 0}
    for r in results:
        counts[r.classification] += 1
    return results, counts


def unit_defect(m: MetricLieAlgebra) -> tuple[float, float]:
    """Scale-free (Codazzi defect, |nabla Ric|) of an explicit metric, as reported by the probe."""
    mf = m.to_float()
    params = parameters_from_gram(mf.gram)
    d, p = invariant_defects(*_evaluate(mf.alg.c, params, with_parallel=True))
    return float(d), float(p)

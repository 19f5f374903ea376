from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as hs

from harmonic_lie import catalog, probe
from harmonic_lie import geometry as geo
from harmonic_lie.lie_algebra import LieAlgebra, LieAlgebraError

seeds = hs.integers(0, 2**32 - 1)
FAST = probe.ProbeConfig(seed=3, restarts=4, max_iters=300)


@given(seeds, hs.integers(1, 6))
def test_parameter_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    p = rng.uniform(-1, 1, probe.n_params(n))
    back = probe.parameters_from_gram(probe.grams_from_parameters(p, n))
    np.testing.assert_allclose(back, p, atol=1e-12)


@given(seeds)
def test_unit_volume(seed):
    rng = np.random.default_rng(seed)
    p = rng.uniform(-2, 2, probe.n_params(4))
    g = probe.grams_from_parameters(p, 4)
    u = probe.grams_from_parameters(probe.unit_volume(p, 4), 4)
    assert np.linalg.det(u) == pytest.approx(1.0, rel=1e-10)
    ratio = u / g
    np.testing.assert_allclose(ratio, ratio.flat[0], rtol=1e-10)


def test_metric_from_parameters_validates():
    alg = catalog.su2()
    with pytest.raises(ValueError):
        probe.metric_from_parameters(alg, np.zeros(5))
    with pytest.raises(ValueError):
        probe.metric_from_parameters(alg, [0, 0, np.nan, 0, 0, 0])
    m = probe.metric_from_parameters(alg, np.zeros(6))
    assert np.allclose(m.gram, np.eye(3))


@given(seeds, hs.floats(-2, 2))
def test_normalized_objective_is_scale_free(seed, t):
    rng = np.random.default_rng(seed)
    alg = catalog.random_lie_algebra(rng, 5)
    p = rng.uniform(-0.5, 0.5, probe.n_params(alg.dim))
    q = p.copy()
    q[: alg.dim] += t  # gram -> e^{2t} gram
    q[alg.dim:] *= np.exp(t)
    a, b = probe.normalized_objective(alg, p), probe.normalized_objective(alg, q)
    assert b == pytest.approx(a, rel=1e-8, abs=1e-14)


def test_raw_objective_matches_geometry():
    rng = np.random.default_rng(4)
    alg = catalog.random_lie_algebra(rng, 5)
    p = rng.uniform(-0.5, 0.5, probe.n_params(alg.dim))
    m = probe.metric_from_parameters(alg, p)
    want = geo.codazzi_defect(m, geo.ricci(m)).norm_sq
    assert probe.defect_objective(alg, p) == pytest.approx(want, rel=1e-10)


def test_invariant_defect_under_automorphism():
    h = catalog.heisenberg3().to_float()
    m = geo.MetricLieAlgebra.identity(h)
    a, b = 1.7, 0.4
    p = np.diag([a, b, a * b])  # automorphism of the Heisenberg algebra
    pulled = geo.MetricLieAlgebra(h, p.T @ p)
    d0, n0 = probe.unit_defect(m)
    d1, n1 = probe.unit_defect(pulled)
    assert d0 > 0.1
    assert d1 == pytest.approx(d0, rel=1e-10)
    assert n1 == pytest.approx(n0, rel=1e-10)


@pytest.mark.parametrize("normalized", [False, True])
@given(seed=seeds)
def test_gradient_matches_directional_secant(normalized, seed):
    rng = np.random.default_rng(seed)
    alg = catalog.random_lie_algebra(rng, 5)
    x = rng.uniform(-0.5, 0.5, probe.n_params(alg.dim))
    d = rng.normal(size=x.size)
    d /= np.linalg.norm(d)
    f = probe.normalized_objective if normalized else probe.defect_objective
    t = 1e-5
    secant = (f(alg, x + t * d) - f(alg, x - t * d)) / (2 * t)
    g = probe.gradient(alg, x, normalized=normalized)
    assert g @ d == pytest.approx(secant, rel=1e-4, abs=1e-7 * max(1.0, f(alg, x)))


def test_gradient_rejects_bad_step():
    with pytest.raises(ValueError):
        probe.gradient(catalog.su2(), np.zeros(6), h=0)


def test_su2_converges_to_round_metric():
    res = probe.minimize(catalog.su2(), FAST)
    assert res.classification == probe.HARMONIC_PARALLEL
    assert res.defect < 1e-9 and res.parallel_norm < 1e-6
    g = probe.grams_from_parameters(res.best_params, 3)
    # the only harmonic left-invariant metrics on SU(2) are the round ones, multiples of I here
    ev = np.linalg.eigvalsh(g)
    assert ev.max() / ev.min() == pytest.approx(1.0, rel=1e-3)


def test_hyperbolic_converges():
    res = probe.minimize(catalog.hyperbolic_solvable(4), FAST)
    assert res.classification == probe.HARMONIC_PARALLEL


def test_heisenberg_does_not_converge():
    res = probe.minimize(catalog.heisenberg3(), FAST)
    assert res.classification == probe.NONCONVERGED
    assert res.defect > 1e-3


def test_deterministic_and_serializable():
    alg = catalog.random_solvable(np.random.default_rng(9), 5)
    a = probe.minimize(alg, FAST)
    b = probe.minimize(alg, FAST)
    assert np.array_equal(a.best_params, b.best_params)
    assert a.to_dict() == b.to_dict()
    doc = json.loads(json.dumps(a.to_dict()))
    assert len(doc["restarts"]) == FAST.restarts
    assert sum(doc["restart_summary"].values()) == FAST.restarts


def test_sweep_counts():
    results, counts = probe.sweep([catalog.su2(), catalog.heisenberg3()], FAST)
    assert len(results) == 2
    assert counts == {probe.HARMONIC_PARALLEL: 1, probe.CANDIDATE: 0, probe.NONCONVERGED: 1}


def test_rejects_non_lie_input():
    bad = LieAlgebra.from_brackets(3, {(1, 2): {3: 1}, (1, 3): {1: 1}, (2, 3): {2: 1}})
    with pytest.raises(LieAlgebraError):
        probe.minimize(bad, FAST)


def test_config_validation():
    with pytest.raises(ValueError):
        probe.ProbeConfig(restarts=0)
    with pytest.raises(ValueError):
        probe.ProbeConfig(tol_defect=0)


def test_unit_defect_agrees_with_search_report():
    alg = catalog.heisenberg3()
    res = probe.minimize(alg, FAST)
    m = probe.metric_from_parameters(alg, res.best_params)
    d, p = probe.unit_defect(m)
    assert d == pytest.approx(res.defect, rel=1e-9)
    assert p == pytest.approx(res.parallel_norm, rel=1e-9)


@pytest.mark.parametrize("alg", [catalog.su2(), catalog.hyperbolic_solvable(4), catalog.abelian(3)])
def test_objective_vanishes_at_einstein_metrics(alg):
    n = alg.dim
    for t in (-1.0, 0.0, 2.0):
        p = np.zeros(probe.n_params(n))
        p[:n] = t
        assert probe.defect_objective(alg, p) <= 1e-20
        assert probe.normalized_objective(alg, p) <= 1e-20


@given(seeds, hs.floats(-3, 3))
def test_objective_nonnegative_and_classification_scale_free(seed, t):
    rng = np.random.default_rng(seed)
    alg = catalog.random_solvable(rng, 5)
    n = alg.dim
    p = rng.uniform(-1, 1, probe.n_params(n))
    assert probe.defect_objective(alg, p) >= 0
    q = p.copy()
    q[:n] += t
    q[n:] *= np.exp(t)
    a = probe.unit_defect(probe.metric_from_parameters(alg, p))
    b = probe.unit_defect(probe.metric_from_parameters(alg, q))
    np.testing.assert_allclose(b, a, rtol=1e-8, atol=1e-14)

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as hs

from harmonic_lie import catalog
from harmonic_lie.lie_algebra import (
    LieAlgebra,
    LieAlgebraError,
    Subspace,
    algebra_from_dict,
    algebra_to_dict,
    bracket,
    change_basis,
    derived_series,
    derived_subalgebra,
    direct_sum,
    is_ideal,
    is_nilpotent,
    is_solvable,
    is_subalgebra,
    jacobi_defect,
    killing_form,
    restrict,
)

seeds = hs.integers(0, 2**32 - 1)


def test_heisenberg_bracket_one_based():
    h = catalog.heisenberg3()
    assert list(bracket(h, h.basis_vector(1), h.basis_vector(2))) == [0, 0, 1]
    assert jacobi_defect(h) == 0


def test_antisymmetry_enforced():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0] = 1.0
    with pytest.raises(LieAlgebraError):
        LieAlgebra(c)


def test_jacobi_violation_detected():
    bad = LieAlgebra.from_brackets(3, {(1, 2): {3: 1}, (1, 3): {1: 1}, (2, 3): {2: 1}})
    assert jacobi_defect(bad) != 0


@pytest.mark.parametrize(
    "name, solvable, nilpotent",
    [
        ("abelian", True, True),
        ("heisenberg3", True, True),
        ("hyperbolic_solvable", True, False),
        ("su2_biinvariant", False, False),
        ("sl2r", False, False),
        ("su2_plus_abelian3", False, False),
    ],
)
def test_predicates(name, solvable, nilpotent):
    alg = catalog.named_algebra(name, 4 if name in ("abelian", "hyperbolic_solvable") else None)
    for a in (alg, alg.to_float()):
        assert is_solvable(a) is solvable
        assert is_nilpotent(a) is nilpotent


def test_killing_forms():
    kf = killing_form(catalog.su2())
    assert np.all(kf == -2 * np.eye(3, dtype=int))
    assert not np.any(killing_form(catalog.heisenberg3()))


def test_derived_series_heisenberg():
    dims = [s.dim for s in derived_series(catalog.heisenberg3())]
    assert dims == [3, 1, 0]


def test_subalgebra_ideal_and_restrict():
    h = catalog.hyperbolic_solvable(4)
    d = derived_subalgebra(h)
    assert d.dim == 3 and is_ideal(h, d)
    e1 = Subspace.span([h.basis_vector(1)], 4, True)
    assert is_subalgebra(h, e1) and not is_ideal(h, e1)
    su = catalog.su2()
    plane = Subspace.span([su.basis_vector(1), su.basis_vector(2)], 3, True)
    assert not is_subalgebra(su, plane)
    with pytest.raises(LieAlgebraError):
        restrict(su, plane)
    assert jacobi_defect(restrict(h, d)) == 0


@given(seeds)
def test_random_algebras_satisfy_jacobi(seed):
    rng = np.random.default_rng(seed)
    alg = catalog.random_lie_algebra(rng, 6)
    assert jacobi_defect(alg) < 1e-9
    assert is_solvable(catalog.random_solvable(rng, 6))


@given(seeds)
def test_killing_signature_invariant_under_basis_change(seed):
    rng = np.random.default_rng(seed)
    alg = catalog.random_lie_algebra(rng, 5)
    p = catalog.random_basis_change(rng, alg.dim)
    new = change_basis(alg, p)
    kf_old, kf_new = killing_form(alg), killing_form(new)
    np.testing.assert_allclose(kf_new, p.T @ kf_old @ p, atol=1e-8 * max(1.0, np.abs(kf_old).max()))
    assert jacobi_defect(new) < 1e-8


@given(seeds)
def test_json_round_trip(seed):
    rng = np.random.default_rng(seed)
    alg = catalog.codazzi_example_algebra(*catalog.random_admissible_tuple(rng))
    doc = json.loads(json.dumps(algebra_to_dict(alg)))
    back = algebra_from_dict(doc)
    assert back.exact and np.all(back.c == alg.c)


def test_json_errors():
    for doc in (
        {},
        {"dim": 0},
        {"dim": 2, "brackets": [{"i": 2, "j": 1, "terms": []}]},
        {"dim": 2, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "value": 0.5}]}]},
        {"dim": 2, "field": "complex"},
        {"dim": 2, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "value": 1}]}]},
    ):
        with pytest.raises(LieAlgebraError):
            algebra_from_dict(doc)
    f = algebra_from_dict({"dim": 2, "field": "float", "brackets": [{"i": 1, "j": 2, "terms": [{"k": 2, "value": 0.5}]}]})
    assert not f.exact and f.c[0, 1, 1] == 0.5


def test_direct_sum_blocks():
    s = direct_sum(catalog.su2(), catalog.abelian(2))
    assert s.dim == 5 and s.c[0, 1, 2] == Fraction(1) and not np.any(s.c[3:])


@given(seeds)
def test_bracket_antisymmetry(seed):
    rng = np.random.default_rng(seed)
    alg = catalog.random_lie_algebra(rng, 6)
    x, y = rng.normal(size=(2, alg.dim))
    assert np.abs(bracket(alg, x, y) + bracket(alg, y, x)).max() <= 1e-12 * max(1.0, np.abs(alg.c).max())
    ex = catalog.codazzi_example_algebra(*catalog.random_admissible_tuple(rng))
    u = [Fraction(int(v)) for v in rng.integers(-5, 6, 6)]
    w = [Fraction(int(v), 3) for v in rng.integers(-5, 6, 6)]
    assert np.all(bracket(ex, u, w) == -bracket(ex, w, u))


def test_jacobi_defect_of_direct_sum():
    bad = LieAlgebra.from_brackets(3, {(1, 2): {3: 1}, (1, 3): {1: 1}, (2, 3): {2: 1}})
    good = catalog.su2()
    assert jacobi_defect(direct_sum(bad, good)) == max(jacobi_defect(bad), jacobi_defect(good))
    assert jacobi_defect(direct_sum(good, good)) == 0


@given(seeds)
def test_killing_form_is_ad_invariant(seed):
    rng = np.random.default_rng(seed)
    alg = catalog.codazzi_example_algebra(*catalog.random_admissible_tuple(rng))
    b = killing_form(alg)
    ads = alg.ad()
    for x in range(alg.dim):
        # B([x,y],z) + B(y,[x,z]) = 0  <=>  ad_x^T B + B ad_x = 0
        assert not np.any(ads[x].T @ b + b @ ads[x])


@given(seeds)
def test_derived_subalgebra_is_ideal(seed):
    rng = np.random.default_rng(seed)
    for alg in (catalog.random_lie_algebra(rng, 6), catalog.random_solvable(rng, 6)):
        assert is_ideal(alg, derived_subalgebra(alg), atol=1e-9)

import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from curvcert.errors import DegreeError, NotAnIsometry, WrongSignature
from curvcert.exterior import (
    FLOAT64,
    ExtOperator,
    Isometry,
    KForm,
    KVector,
    ScalarSpace,
    decomposable_inner,
    ext_power_map,
    hodge_star,
    hodge_star_operator,
    induced_inner,
    pullback_form,
    top_power_action,
    vector_as_kvector,
    wedge,
)
from curvcert import linalg
from conftest import signatures
from oracles import gram_inner, wedge_dict


def rand_kvector(space, k, rng):
    return KVector(space, k, [Fraction(rng.randint(-5, 5), rng.choice((1, 2, 3))) for _ in range(comb(space.n, k))])


def as_dict(x):
    return {I: v for I, v in x.terms()}


def test_basis_antisymmetry():
    sp = ScalarSpace.euclidean(4)
    e1, e2 = KVector.basis(sp, [0]), KVector.basis(sp, [1])
    assert wedge(e1, e2) == -wedge(e2, e1)
    assert KVector.basis(sp, [1, 0]) == -KVector.basis(sp, [0, 1])
    assert KVector.basis(sp, [1, 1]).is_zero()


def test_wedge_sign_example():
    sp = ScalarSpace.euclidean(4)
    x = wedge(KVector.basis(sp, [0, 2]), KVector.basis(sp, [1, 3]))
    assert x == -KVector.basis(sp, [0, 1, 2, 3])


def test_inner_examples():
    assert induced_inner(KVector.basis(ScalarSpace.euclidean(3), [0, 1]), KVector.basis(ScalarSpace.euclidean(3), [0, 1])) == 1
    lo = ScalarSpace.lorentzian(4)
    assert induced_inner(KVector.basis(lo, [0, 1]), KVector.basis(lo, [0, 1])) == -1
    assert induced_inner(KVector.basis(lo, [1, 2]), KVector.basis(lo, [1, 2])) == 1


@given(signatures(2, 6), st.integers(0, 10**6))
def test_wedge_matches_dictionary_oracle(signs, seed):
    sp = ScalarSpace(signs)
    rng = random.Random(seed)
    k = rng.randint(0, sp.n)
    l = rng.randint(0, sp.n - k)
    a, b = rand_kvector(sp, k, rng), rand_kvector(sp, l, rng)
    assert as_dict(wedge(a, b)) == wedge_dict(as_dict(a), as_dict(b))


@given(signatures(3, 6), st.integers(0, 10**6))
def test_wedge_associative_and_graded_commutative(signs, seed):
    sp = ScalarSpace(signs)
    rng = random.Random(seed)
    k = rng.randint(0, 2)
    l = rng.randint(0, min(2, sp.n - k))
    m = rng.randint(0, sp.n - k - l)
    a, b, c = (rand_kvector(sp, d, rng) for d in (k, l, m))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
    assert wedge(a, b) == wedge(b, a) * ((-1) ** (k * l))


@given(signatures(2, 5), st.integers(0, 10**6))
def test_induced_inner_is_gram_determinant(signs, seed):
    sp = ScalarSpace(signs)
    rng = random.Random(seed)
    k = rng.randint(1, sp.n)
    vs = [[rng.randint(-3, 3) for _ in range(sp.n)] for _ in range(k)]
    ws = [[rng.randint(-3, 3) for _ in range(sp.n)] for _ in range(k)]
    expected = gram_inner(signs, vs, ws)
    assert decomposable_inner(sp, vs, ws) == expected
    x = vector_as_kvector(sp, vs[0])
    y = vector_as_kvector(sp, ws[0])
    for v in vs[1:]:
        x = wedge(x, vector_as_kvector(sp, v))
    for w in ws[1:]:
        y = wedge(y, vector_as_kvector(sp, w))
    assert induced_inner(x, y) == expected


def test_flat_sharp_round_trip():
    sp = ScalarSpace((-1, 1, -1, 1))
    x = rand_kvector(sp, 2, random.Random(3))
    assert x.flat().sharp() == x
    assert isinstance(x.flat(), KForm)


def test_degree_errors():
    sp = ScalarSpace.euclidean(3)
    with pytest.raises(DegreeError):
        KVector.zero(sp, 4)
    with pytest.raises(DegreeError):
        wedge(KVector.basis(sp, [0, 1]), KVector.basis(sp, [0, 2]))


def random_lorentz_isometry(sp, rng):
    """Product of a few reflections through random non-null integer axes."""
    m = sp.eye(sp.n)
    G = sp.metric()
    for _ in range(rng.randint(1, 3)):
        while True:
            u = sp.asarray([rng.randint(-2, 2) for _ in range(sp.n)])
            guu = sp.inner(u, u)
            if guu != 0:
                break
        r = sp.eye(sp.n) - np.outer(u, G.dot(u)) * (Fraction(2) / guu)
        m = m.dot(r)
    return Isometry(sp, m)


@given(signatures(2, 5), st.integers(0, 10**6))
def test_ext_power_map_is_multiplicative(signs, seed):
    sp = ScalarSpace(signs)
    rng = random.Random(seed)
    th = random_lorentz_isometry(sp, rng)
    k = rng.randint(1, sp.n - 1)
    a = rand_kvector(sp, k, rng)
    b = rand_kvector(sp, 1, rng)
    L = lambda d: ext_power_map(th, d)
    assert L(k + 1) @ wedge(a, b) == wedge(L(k) @ a, L(1) @ b)
    # isometries preserve the induced inner product
    assert induced_inner(L(k) @ a, L(k) @ a) == induced_inner(a, a)


@given(signatures(1, 6), st.integers(0, 10**6))
def test_top_degree_action_is_determinant(signs, seed):
    sp = ScalarSpace(signs)
    th = random_lorentz_isometry(sp, random.Random(seed))
    assert top_power_action(th) == th.det == linalg.det(th.matrix)
    assert ext_power_map(th, sp.n).matrix[0, 0] == th.det


def test_isometry_validation():
    sp = ScalarSpace.lorentzian(2)
    with pytest.raises(NotAnIsometry):
        Isometry(sp, [[0, 1], [1, 0]])  # swaps timelike and spacelike
    with pytest.raises(NotAnIsometry):
        Isometry(sp, [[2, 0], [0, 1]])
    th = Isometry(sp, [[-1, 0], [0, 1]])
    assert th.det == -1


def test_pullback_form_by_reflection():
    sp = ScalarSpace.lorentzian(4)
    th = Isometry.signed_permutation(sp, [0, 1, 2, 3], [-1, 1, 1, 1])
    a = KForm.basis(sp, [0, 1]) + KForm.basis(sp, [2, 3])
    assert pullback_form(th, a) == -KForm.basis(sp, [0, 1]) + KForm.basis(sp, [2, 3])


@pytest.mark.parametrize("t", range(4))
@pytest.mark.parametrize("orientation", (1, -1))
def test_star_squares_to_minus_one_and_is_self_adjoint(t, orientation):
    sp = ScalarSpace(tuple(-1 if i == t else 1 for i in range(4)), orientation)
    star = hodge_star_operator(sp)
    assert star @ star == -ExtOperator.identity(sp, 2)
    assert star.adjoint() == star


@pytest.mark.parametrize("t", range(4))
def test_star_defining_identity(t):
    """xi ^ *eta = -<xi, eta> e_0123 on all basis pairs."""
    sp = ScalarSpace(tuple(-1 if i == t else 1 for i in range(4)))
    vol = KVector.basis(sp, [0, 1, 2, 3])
    for I in range(6):
        for J in range(6):
            xi = KVector(sp, 2, [int(r == I) for r in range(6)])
            eta = KVector(sp, 2, [int(r == J) for r in range(6)])
            assert wedge(xi, hodge_star(eta)) == vol * (-induced_inner(xi, eta))


def test_star_example_and_signature_errors():
    sp = ScalarSpace.lorentzian(4)
    assert hodge_star(KVector.basis(sp, [0, 1])) == KVector.basis(sp, [2, 3])
    with pytest.raises(WrongSignature):
        hodge_star_operator(ScalarSpace.euclidean(4))
    with pytest.raises(WrongSignature):
        hodge_star_operator(ScalarSpace.lorentzian(5))


def test_float_mode_agrees_with_rational():
    rng = random.Random(11)
    sp = ScalarSpace((-1, 1, 1, 1, 1))
    spf = sp.with_mode(FLOAT64)
    a, b = rand_kvector(sp, 2, rng), rand_kvector(sp, 2, rng)
    af, bf = KVector(spf, 2, a.coeffs.astype(float)), KVector(spf, 2, b.coeffs.astype(float))
    exact = wedge(a, b).coeffs.astype(float)
    assert np.allclose(wedge(af, bf).coeffs, exact, rtol=1e-12, atol=1e-12)


def test_decimal_reading_of_floats_in_rational_mode():
    sp = ScalarSpace.euclidean(2)
    assert sp.scalar(0.1) == Fraction(1, 10)

import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from hsf.scale import (
    ChainOperator,
    ScaleSpec,
    berezanskii_map,
    berezanskii_operator,
    dual_index,
    hilbert_adjoint,
    inclusion_adjoint,
    inclusion_adjoint_inverse,
    inclusion_adjoint_operator,
    inner_product,
    is_berezanskii,
    make_scale,
    norm,
    operator_norm,
    pivot_adjoint,
    shifted_generator,
    weight_power,
)
from strategies import complex_arrays, indices, scales


def rand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# ---------------------------------------------------------------- construction


def test_formulas():
    assert make_scale("linear", 3).weights == (1.0, 2.0, 3.0)
    assert make_scale("shifted_quadratic", 3).weights == (2.0, 5.0, 10.0)
    assert make_scale("exponential", 3).weights == (2.0, 4.0, 8.0)
    assert make_scale("constant", 2).weights == (1.0, 1.0)
    assert make_scale("explicit", weights=[1, 4, 9]).weights == (1.0, 4.0, 9.0)


def test_weight_below_one_rejected():
    with pytest.raises(ValueError, match="weight below 1"):
        make_scale("explicit", weights=[0.5, 2])


@pytest.mark.parametrize("bad", [[], [1.0, math.inf], [1.0, math.nan]])
def test_bad_weight_lists(bad):
    with pytest.raises(ValueError):
        make_scale("explicit", weights=bad)


def test_unknown_formula():
    with pytest.raises(ValueError):
        make_scale("cubic", 4)


def test_weights_are_read_only():
    sc = make_scale("linear", 4)
    with pytest.raises(ValueError):
        sc.array[0] = 7.0


@given(scales())
def test_scale_json_round_trip(sc):
    back = ScaleSpec.from_json(sc.to_json())
    assert back == sc
    np.testing.assert_array_equal(back.array, sc.array)


def test_power_overflow_is_reported():
    sc = make_scale("exponential", 64)
    weight_power(sc, 4)  # 2**256 is fine
    with pytest.raises(OverflowError):
        weight_power(sc, 16)


# ---------------------------------------------------------------- inner products


def test_inner_product_examples():
    assert inner_product(make_scale("linear", 3), 0, [1, 0, 0], [1, 0, 0]) == 1
    assert inner_product(make_scale("linear", 4), -1, np.ones(4), np.ones(4)) == pytest.approx(25 / 12, rel=1e-15)
    assert inner_product(make_scale("explicit", weights=[1, 4, 9]), 2, np.ones(3), np.ones(3)) == 98


def test_norm_examples():
    assert norm(make_scale("linear", 5), 3, np.zeros(5)) == 0
    assert norm(make_scale("explicit", weights=[1, 4, 9]), 2, np.ones(3)) == pytest.approx(math.sqrt(98), rel=1e-15)
    assert norm(make_scale("linear", 2), 1, [0, 1]) == pytest.approx(math.sqrt(2), rel=1e-15)


@given(scales(), indices, st.data())
def test_inner_product_sesquilinear(sc, p, data):
    x, y = data.draw(complex_arrays((sc.n,))), data.draw(complex_arrays((sc.n,)))
    c = 1.5 - 2j
    lhs = inner_product(sc, p, c * x, y)
    assert lhs == pytest.approx(c * inner_product(sc, p, x, y), rel=1e-12, abs=1e-9)
    assert inner_product(sc, p, x, c * y) == pytest.approx(np.conj(c) * inner_product(sc, p, x, y), rel=1e-12, abs=1e-9)
    assert inner_product(sc, p, y, x) == pytest.approx(np.conj(inner_product(sc, p, x, y)), rel=1e-12, abs=1e-9)


@given(scales(), st.integers(-4, 3), st.data())
def test_norms_increase_with_index(sc, p, data):
    x = data.draw(complex_arrays((sc.n,)))
    assert norm(sc, p, x) <= norm(sc, p + 1, x) * (1 + 1e-12)


# ---------------------------------------------------------------- inclusion adjoints


def test_inclusion_adjoint_example():
    sc = make_scale("linear", 3)
    np.testing.assert_allclose(inclusion_adjoint(sc, 0, 1, np.ones(3)), [1, 1 / 2, 1 / 3], rtol=1e-15)
    f = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(inclusion_adjoint(sc, 2, 2, f), f)


def test_inclusion_adjoint_direction_checked():
    with pytest.raises(ValueError, match="inclusion direction"):
        inclusion_adjoint(make_scale("linear", 3), 1, 0, np.ones(3))


@given(scales(), st.data())
def test_inclusion_adjoint_characterisation(sc, data):
    r = data.draw(st.integers(-4, 4))
    p = data.draw(st.integers(r, 4))
    f, x = data.draw(complex_arrays((sc.n,))), data.draw(complex_arrays((sc.n,)))
    lhs = inner_product(sc, r, f, x)
    rhs = inner_product(sc, p, inclusion_adjoint(sc, r, p, f), x)
    assert abs(lhs - rhs) <= 1e-12 * (1 + norm(sc, r, f) * norm(sc, r, x))


def test_inclusion_adjoint_composition():
    sc = make_scale("shifted_quadratic", 16)
    f = rand(np.random.default_rng(1), 16)
    direct = inclusion_adjoint(sc, -2, 3, f)
    chained = inclusion_adjoint(sc, 1, 3, inclusion_adjoint(sc, -2, 1, f))
    np.testing.assert_allclose(chained, direct, rtol=1e-12)
    np.testing.assert_allclose(inclusion_adjoint_inverse(sc, -2, 3, direct), f, rtol=1e-14)


def test_inclusion_inverse_norm():
    sc = make_scale("linear", 10)
    op = ChainOperator(np.diag(inclusion_adjoint_inverse(sc, -1, 0, np.ones(10))), 0, -1)
    assert operator_norm(sc, op) == pytest.approx(math.sqrt(10), rel=1e-14)


# ---------------------------------------------------------------- berezanskii maps


def test_berezanskii_examples():
    sc = make_scale("explicit", weights=[1, 4, 9])
    y = berezanskii_map(sc, 2, 0, np.ones(3))
    np.testing.assert_allclose(y, [1, 4, 9], rtol=1e-15)
    assert norm(sc, 0, y) ** 2 == pytest.approx(98, rel=1e-14)
    np.testing.assert_allclose(berezanskii_map(make_scale("explicit", weights=[1, 4]), 0, -2, [1, 1]), [1, 4])
    x = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(berezanskii_map(sc, 1, 1, x), x)


@given(scales(), indices, indices, st.data())
def test_berezanskii_is_unitary(sc, p, r, data):
    x = data.draw(complex_arrays((sc.n,)))
    y = berezanskii_map(sc, p, r, x)
    assert norm(sc, r, y) == pytest.approx(norm(sc, p, x), rel=1e-12, abs=1e-300)
    np.testing.assert_allclose(berezanskii_map(sc, r, p, y), x, rtol=1e-13, atol=0)


@given(scales(), indices, indices, indices, st.data())
def test_berezanskii_composition(sc, p, q, r, data):
    x = data.draw(complex_arrays((sc.n,)))
    via = berezanskii_map(sc, q, r, berezanskii_map(sc, p, q, x))
    np.testing.assert_allclose(via, berezanskii_map(sc, p, r, x), rtol=1e-12, atol=0)


def test_berezanskii_parity():
    assert is_berezanskii(2, 0) and is_berezanskii(-1, 1) and not is_berezanskii(1, 0)


def test_dual_index():
    assert dual_index(1, 0) == -1
    assert dual_index(2, 2) == 2
    assert dual_index(3, 1) == -1
    with pytest.raises(ValueError):
        dual_index(0, 1)


# ---------------------------------------------------------------- operators


def test_chain_operator_composition_checks_indices():
    a = ChainOperator(np.eye(2), 0, 1)
    b = ChainOperator(np.eye(2), 1, 3)
    assert (b @ a).source == 0 and (b @ a).target == 3
    with pytest.raises(ValueError):
        a @ a
    with pytest.raises(ValueError):
        ChainOperator(np.ones((2, 3)), 0, 0)


@given(scales(min_n=2, max_n=8), indices, indices, st.data())
def test_operator_norm_matches_generalized_eigenproblem(sc, p, q, data):
    m = data.draw(complex_arrays((sc.n, sc.n)))
    wp, wq = np.diag(sc.array**p), np.diag(sc.array**q)
    # oracle: max_x |Mx|_q^2 / |x|_p^2 as the top generalized eigenvalue
    top = scipy.linalg.eigh(m.conj().T @ wq @ m, wp, eigvals_only=True)[-1]
    got = operator_norm(sc, ChainOperator(m, p, q))
    assert got**2 == pytest.approx(max(top, 0.0), rel=1e-8, abs=1e-10 * np.linalg.norm(m) ** 2)


@given(scales(min_n=1, max_n=8), indices, indices, st.data())
def test_hilbert_adjoint_pairing(sc, p, q, data):
    m = data.draw(complex_arrays((sc.n, sc.n)))
    x, y = data.draw(complex_arrays((sc.n,))), data.draw(complex_arrays((sc.n,)))
    T = ChainOperator(m, p, q)
    Ts = hilbert_adjoint(sc, T)
    assert (Ts.source, Ts.target) == (q, p)
    lhs = inner_product(sc, q, T(x), y)
    rhs = inner_product(sc, p, x, Ts(y))
    scale_ = operator_norm(sc, T) * norm(sc, p, x) * norm(sc, q, y)
    assert abs(lhs - rhs) <= 1e-10 * (1 + scale_)


@given(scales(min_n=1, max_n=8), indices, indices, st.data())
def test_pivot_adjoint_is_conjugate_transpose(sc, p, q, data):
    # the H_0 pairing is the plain dot product, so T* in that pairing is M^H
    m = data.draw(complex_arrays((sc.n, sc.n)))
    Ts = pivot_adjoint(sc, ChainOperator(m, p, q))
    assert (Ts.source, Ts.target) == (-q, -p)
    np.testing.assert_allclose(Ts.matrix, m.conj().T, rtol=1e-12, atol=1e-12 * (1 + np.abs(m).max()))


def test_pivot_adjoint_at_pivot():
    m = rand(np.random.default_rng(2), 5, 5)
    np.testing.assert_allclose(pivot_adjoint(make_scale("linear", 5), ChainOperator(m, 0, 0)).matrix, m.conj().T)


def test_pivot_adjoint_twice_on_berezanskii():
    sc = make_scale("shifted_quadratic", 12)
    T = berezanskii_operator(sc, 3, -1)
    twice = pivot_adjoint(sc, pivot_adjoint(sc, T))
    assert (twice.source, twice.target) == (3, -1)
    np.testing.assert_allclose(twice.matrix, T.matrix, rtol=4 * np.finfo(float).eps, atol=0)


def test_pivot_adjoint_product_rule():
    sc = make_scale("linear", 10)
    rng = np.random.default_rng(3)
    T = ChainOperator(rand(rng, 10, 10), 1, 0)
    U = ChainOperator(rand(rng, 10, 10), 0, 2)
    lhs = pivot_adjoint(sc, U @ T)
    rhs = pivot_adjoint(sc, T) @ pivot_adjoint(sc, U)
    assert (lhs.source, lhs.target) == (rhs.source, rhs.target) == (-2, -1)
    np.testing.assert_allclose(lhs.matrix, rhs.matrix, rtol=1e-10)


def test_inclusion_adjoint_operator_matches_vector_form():
    sc = make_scale("linear", 6)
    f = rand(np.random.default_rng(4), 6)
    op = inclusion_adjoint_operator(sc, -1, 2)
    assert (op.source, op.target) == (-1, 2)
    np.testing.assert_allclose(op(f), inclusion_adjoint(sc, -1, 2, f), rtol=1e-15)


def test_shifted_generator_examples():
    sc = make_scale("linear", 4)
    g = shifted_generator(sc, 0)
    assert (g.source, g.target) == (2, 0)
    np.testing.assert_allclose(g.matrix, np.diag(sc.array))
    g = shifted_generator(make_scale("linear", 2), -2)
    assert (g.source, g.target) == (0, -2)
    np.testing.assert_allclose(g.matrix, np.diag([1.0, 2.0]))


@given(scales(), indices, st.data())
def test_shifted_generator_is_isometric(sc, p, data):
    x = data.draw(complex_arrays((sc.n,)))
    assert norm(sc, p, shifted_generator(sc, p)(x)) == pytest.approx(norm(sc, 2 + p, x), rel=1e-12, abs=1e-300)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gprdensity import arith
from gprdensity.constants import (
    DensitySpec,
    LocalIndex,
    delta_const,
    density_constant,
    euler_product,
    f_local,
    g_local,
    h1_const,
    h2_const,
    index_set,
    r_local,
    v_const,
    v_ell1_closed_form,
    w_from_f,
    w_heuristic_series,
    w_local,
    w_local_collapsed,
    w_upper_bound,
)
from gprdensity.errors import HypothesisError

from oracles import model_one_plus_v

F = Fraction


@pytest.mark.parametrize("p, m, ell, value", [(3, 1, 1, F(1, 2)), (3, 1, 2, F(7, 8)), (2, 1, 1, F(1))])
def test_r_local(p, m, ell, value):
    assert r_local(p, m, ell) == value


def test_r_local_rejects_m_above_ell():
    with pytest.raises(ValueError):
        r_local(3, 3, 2)


@pytest.mark.parametrize("p, ell, h, value", [(3, 1, 1, F(1, 6)), (3, 2, 1, F(2, 9)), (2, 1, 7, F(1, 2)), (3, 1, 3, F(1, 2))])
def test_w_local(p, ell, h, value):
    assert w_local(p, ell, h) == value


def test_w_depends_only_on_gcd():
    assert w_local(5, 3, 3) == w_local(5, 3, 1)
    assert w_local(5, 3, 15) == w_local(5, 3, 5) != w_local(5, 3, 1)


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from(arith.primes_up_to(2000).tolist()),
    st.integers(min_value=1, max_value=25),
    st.sampled_from([1, 3, 5, 7, 15, 21]),
)
def test_collapsed_form_equals_double_sum(p, ell, h):
    assert w_local_collapsed(p, ell, h) == w_local(p, ell, h)


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from(arith.primes_up_to(5000).tolist()),
    st.integers(min_value=1, max_value=50),
    st.sampled_from([1, 3, 5, 15]),
)
def test_w_tail_bound(p, ell, h):
    w = w_local_collapsed(p, ell, h)
    assert 0 <= w <= w_upper_bound(p, ell, h)
    assert w < 1


@pytest.mark.parametrize(
    "q, ell, h, depth, value",
    [(3, 1, 1, 1, F(1, 9))],
)
def test_heuristic_series_first_term(q, ell, h, depth, value):
    assert w_heuristic_series(q, ell, h, depth) == value


def test_heuristic_series_examples():
    assert abs(w_heuristic_series(3, 1, 1, 40) - F(1, 6)) < 1e-15
    assert abs(w_heuristic_series(2, 2, 1, 60) - w_local(2, 2)) < 1e-15


@pytest.mark.parametrize("p, i, ell, value", [(3, 1, 1, F(1, 3)), (3, 1, 2, F(5, 12)), (3, 2, 2, F(1, 18))])
def test_f_local(p, i, ell, value):
    assert f_local(p, i, ell) == value


def test_f_local_rejects_two():
    with pytest.raises(ValueError):
        f_local(2, 1, 1)


def test_w_identity_small_grid():
    for p in arith.primes_up_to(200).tolist()[1:]:
        for ell in range(1, 8):
            for h in (1, 3, 5, 15):
                assert w_from_f(p, ell, h) == w_local(p, ell, h)


def test_h1_examples():
    assert h1_const(1) == F(1, 2) == w_local(2, 1)
    assert h1_const(2) == w_local(2, 2)


@pytest.mark.parametrize("a1, value", [(5, 2), (2, 0), (3, 0), (-3, 2), (-1, 0), (-2, 0)])
def test_delta_ell1(a1, value):
    assert delta_const(1, 1, a1) == value


def test_g_local_examples():
    assert g_local(5, LocalIndex(1, 1, 0, 1)) == F(-1, 5)
    assert g_local(3, LocalIndex(1, 1, 0, 1), h=3) == -1
    with pytest.raises(ValueError):
        LocalIndex(1, 0, 0, 2)
    with pytest.raises(ValueError):
        g_local(2, LocalIndex(1, 1, 0, 1))


def test_index_set_size():
    for ell in range(1, 7):
        for k in range(1, ell + 1):
            assert len(index_set(k, ell)) == (k + 1) * (ell - k + 1) - 1


@pytest.mark.parametrize("a, value", [(2, F(0)), (5, F(1, 40)), (3, F(0))])
def test_h2_ell1(a, value):
    assert h2_const(DensitySpec.from_a(a, 1)) == value


@pytest.mark.parametrize("a, value", [(5, F(1, 19)), (2, F(0)), (3, F(0)), (-3, F(1, 5)), (-7, F(1, 41)), (-27, F(1))])
def test_v_ell1(a, value):
    spec = DensitySpec.from_a(a, 1)
    assert v_const(spec) == value == v_ell1_closed_form(spec)


def test_closed_form_matches_general_formula():
    for a in range(-300, 300):
        if a in (0, -1) or arith.is_perfect_square(a):
            continue
        spec = DensitySpec.from_a(a, 1)
        assert v_const(spec) == v_ell1_closed_form(spec), a
    for a in (-27, 125, -3**5, 5**3 * 7**3, -(15**3)):
        spec = DensitySpec.from_a(a, 1)
        assert v_const(spec) == v_ell1_closed_form(spec), a


@pytest.mark.parametrize(
    "a, ell",
    [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (5, 3), (-3, 2), (-5, 3), (6, 2), (7, 3), (-7, 2), (15, 2), (-27, 2), (10, 2)],
)
def test_v_matches_independent_model(a, ell):
    spec = DensitySpec.from_a(a, ell)
    assert float(1 + v_const(spec)) == pytest.approx(model_one_plus_v(ell, spec.a1, spec.h), abs=1e-12)


def test_hypothesis_rejections():
    for a in (-1, 4, 9, 1, 0):
        with pytest.raises(HypothesisError):
            DensitySpec.from_a(a, 2)


def test_euler_product_preconditions():
    with pytest.raises(ValueError):
        euler_product((1, 1), P=50)
    with pytest.raises(ValueError):
        euler_product((1, 1), P=1000, precision_bits=64)


def test_euler_product_exact_prefix_matches_rational():
    value, tail = euler_product((3, 1), P=1000, exact_below=10**4)
    exact = F(1)
    for p in arith.primes_up_to(1000).tolist():
        exact *= 1 - w_local(p, 3)
    assert abs(F(str(value)) - exact) < F(1, 10**35)
    assert abs(F(str(tail)) - F(3, 1000)) < F(1, 10**38)


def test_euler_product_float_path_matches_exact_path():
    for ell in (1, 5, 50):
        exact, _ = euler_product((ell, 1), P=20000, exact_below=20000)
        fast, _ = euler_product((ell, 1), P=20000, exact_below=100)
        assert abs(exact - fast) < 1e-35


def test_tail_bound_sound_on_doubling():
    for ell in (1, 10, 50):
        small, tail = euler_product((ell, 1), P=10**5)
        large, _ = euler_product((ell, 1), P=2 * 10**5)
        assert large <= small
        assert small - large <= small * tail


def test_breakdown_consistency():
    b = density_constant(DensitySpec.from_a(5, 2), P=10**4)
    assert abs(F(str(b.C)) - F(str(b.euler_product)) * (1 + b.V)) < F(1, 10**36)
    assert b.H2 == h2_const(DensitySpec.from_a(5, 2))
    assert b.tail_bound >= 0

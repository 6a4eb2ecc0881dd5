from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from knapconv.bounded_conv import (
    BACKENDS,
    ScaledVec,
    approx_conv,
    bounded_range_conv,
    packed_product,
)
from knapconv.maxplus_core import NEG_INF, POS_INF, DomainError, MaxPlusOverflowError, naive_conv


def entries(e):
    return st.one_of(st.integers(0, e), st.just(NEG_INF), st.just(POS_INF))


@st.composite
def bounded_pair(draw, max_len=40):
    e = draw(st.integers(0, 9))
    a = draw(st.lists(entries(e), min_size=1, max_size=max_len))
    b = draw(st.lists(entries(e), min_size=1, max_size=max_len))
    return a, b, e


@pytest.mark.parametrize("backend", BACKENDS)
def test_examples(backend):
    assert bounded_range_conv([1, 2], [3, 4], 4, backend) == [4, 5, 6]
    assert bounded_range_conv([0], [0], 0, backend) == [0]
    assert bounded_range_conv([2, NEG_INF], [0, 1], 2, backend) == [2, 3, NEG_INF]


@pytest.mark.parametrize("backend", BACKENDS)
@given(bounded_pair())
def test_matches_naive(backend, case):
    a, b, e = case
    assert bounded_range_conv(a, b, e, backend) == naive_conv(a, b)


def test_long_vectors_take_the_numpy_path(rng):
    for n in (300, 1000, 5000):
        a = [rng.randint(0, 6) for _ in range(n)]
        b = [rng.randint(0, 6) if rng.random() > 0.1 else NEG_INF for _ in range(n // 3)]
        want = naive_conv(a, b)
        for backend in ("gmpy2", "python"):
            assert bounded_range_conv(a, b, 6, backend) == want


def test_out_of_range_rejected():
    with pytest.raises(DomainError):
        bounded_range_conv([5], [0], 4)
    with pytest.raises(DomainError):
        bounded_range_conv([-1], [0], 4)
    with pytest.raises(DomainError):
        bounded_range_conv([0], [0], -1)
    with pytest.raises(DomainError):
        bounded_range_conv([0], [0], 1, backend="fft")


def test_packed_coefficients_decode_to_the_maximum():
    coeffs, base = packed_product([1, 2], [3, 4], 4)
    assert base == 8
    # coefficient 1 collects B^(1+4) and B^(2+3)
    assert coeffs == [base ** 4, 2 * base ** 5, base ** 6]


def test_approx_examples():
    a = ScaledVec.from_fractions([Fraction(1, 2), Fraction(3, 2)])
    b = ScaledVec.from_fractions([Fraction(1, 2)])
    assert approx_conv(a, b, 2).values() == [1, 2]
    c = approx_conv(ScaledVec((3,), 4), ScaledVec((3,), 4), 1)
    assert c.values() == [1]
    ints = approx_conv(ScaledVec((1, 4, 2)), ScaledVec((0, 3)), 4)
    assert ints.values() == naive_conv([1, 4, 2], [0, 3])


def test_approx_errors():
    with pytest.raises(DomainError):
        approx_conv(ScaledVec((9,), 2), ScaledVec((0,), 1), 4)
    with pytest.raises(MaxPlusOverflowError):
        approx_conv(ScaledVec((2 ** 62,), 1), ScaledVec((0,), 1), 2 ** 62)
    with pytest.raises(DomainError):
        ScaledVec((1,), 0)


def rational_conv(a, b):
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if out[i + j] is None or x + y > out[i + j]:
                out[i + j] = x + y
    return out


@given(st.integers(1, 16), st.lists(st.integers(0, 64), min_size=1, max_size=12),
       st.lists(st.integers(0, 64), min_size=1, max_size=12))
def test_approx_band(den, na, nb):
    na = [min(x, 4 * den) for x in na]
    nb = [min(x, 4 * den) for x in nb]
    exact = rational_conv([Fraction(x, den) for x in na], [Fraction(x, den) for x in nb])
    got = approx_conv(ScaledVec(na, den), ScaledVec(nb, den), 4).values()
    assert all(x - 1 < y <= x for x, y in zip(exact, got))

import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from p3p.errors import InvalidPolynomial
from p3p.polyroots import QuarticPoly, horner, polish_roots, solve_cubic_real, solve_quartic

root = st.floats(-1, 1, allow_nan=False)
coef = st.floats(-1, 1, allow_nan=False)


def guarded_quartic(rng):
    while True:
        a = rng.uniform(-1, 1, 5)
        if np.all(np.abs(a) <= 1e3 * abs(a[4])):
            return QuarticPoly(tuple(a))


def test_quartic_examples():
    assert solve_quartic((-1, 0, 0, 0, 1)) == pytest.approx([-1.0, 1.0], abs=1e-15)
    assert solve_quartic((1, 0, -2, 0, 1)) == pytest.approx([-1.0, 1.0], abs=1e-12)
    assert solve_quartic((1, 0, 0, 0, 1)) == []


def test_cubic_examples():
    assert solve_cubic_real(1, 0, 0, 0) == [0.0]
    assert solve_cubic_real(1, 0, 0, -1) == pytest.approx([1.0])


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_cubic_from_roots(r):
    r = sorted(r)
    assume(min(np.diff(r)) > 1e-3)
    c = np.poly(r)  # highest first
    assert solve_cubic_real(*c) == pytest.approx(r, abs=1e-10)


@given(st.lists(root, min_size=4, max_size=4))
def test_quartic_from_roots(r):
    r = sorted(r)
    assume(min(np.diff(r)) > 1e-3)
    got = solve_quartic(QuarticPoly.from_roots(r))
    assert got == pytest.approx(r, abs=1e-10)


def test_demotion_and_errors():
    # leading coefficient below the relative threshold: solved as a quadratic
    assert solve_quartic((-1, 0, 1, 0, 1e-15)) == pytest.approx([-1, 1])
    assert solve_quartic((-2, 1, 0, 0, 0)) == pytest.approx([2.0])
    with pytest.raises(InvalidPolynomial):
        solve_quartic((0, 0, 0, 0, 0))
    with pytest.raises(InvalidPolynomial):
        solve_quartic((1, math.nan, 0, 0, 1))
    with pytest.raises(InvalidPolynomial):
        QuarticPoly((1, 2, 3))


def _residual_scale(p, r):
    # max|alpha| inside the unit interval; beyond it rounding in p(r) alone is
    # of order eps * sum|alpha_j| |r|^j, so that is the honest yardstick
    if abs(r) <= 1.0:
        return p.scale
    return sum(abs(a) * abs(r) ** j for j, a in enumerate(p.alpha))


def test_residual_and_parity_on_guarded_set(rng):
    for _ in range(5000):
        p = guarded_quartic(rng)
        roots = solve_quartic(p)
        assert roots == sorted(roots)
        assert (4 - len(roots)) % 2 == 0
        for r in roots:
            assert abs(p(r)) <= 1e-8 * _residual_scale(p, r)
        for r in polish_roots(p, roots, 2):
            assert abs(p(r)) <= 1e-11 * _residual_scale(p, r)


def test_polish_contract():
    p = QuarticPoly((-1, 0, 0, 0, 1))
    assert polish_roots(p, [0.3, 1.7], 0) == [0.3, 1.7]
    assert polish_roots(p, [1 + 1e-4], 2)[0] == pytest.approx(1.0, abs=1e-12)
    assert polish_roots(p, [1.0, -1.0], 2) == [-1.0, 1.0]
    with pytest.raises(ValueError):
        polish_roots(p, [1.0], -1)


@given(st.lists(coef, min_size=5, max_size=5), st.lists(st.floats(-3, 3), min_size=1, max_size=4))
def test_polish_never_increases_residual(a, xs):
    assume(abs(a[4]) > 1e-3)
    p = QuarticPoly(tuple(a))
    for x in xs:
        y = polish_roots(p, [x], 3)[0]
        assert abs(p(y)) <= abs(p(x))
    assert len(polish_roots(p, xs, 3)) == len(xs)


@given(st.lists(coef, min_size=5, max_size=5), st.floats(-2, 2))
def test_horner_matches_power_sum(a, x):
    naive = sum(c * x**j for j, c in enumerate(a))
    scale = sum(abs(c) * abs(x) ** j for j, c in enumerate(a))
    assert abs(horner(a, x) - naive) <= 1e-12 * max(scale, 1e-300)


def test_near_double_root_collapses():
    # (x - 0.5)^2 (x^2 + 1): double root split only by rounding
    p = QuarticPoly.from_roots([0.5, 0.5, 0.0, 0.0]).alpha
    q = np.polymul([1, -1, 0.25], [1, 0, 1])[::-1]
    assert solve_quartic(q) == pytest.approx([0.5], abs=1e-7)
    assert len(solve_quartic(p)) == 2

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peanoquad.errors import DomainError
from peanoquad.kernel import Interval, RuleParams, kernel_eval, kernel_norms, params_symmetric
from peanoquad.oracle import integrate_reference


def test_interval_validation():
    with pytest.raises(DomainError):
        Interval(1.0, 1.0)
    with pytest.raises(DomainError):
        Interval(0.0, math.inf)


@pytest.mark.parametrize("t, expected", [(0.1, 0.01), (0.5, 0.0), (0.9, 0.01)])
def test_kernel_eval_branches(unit, t, expected):
    assert kernel_eval(unit, RuleParams(0.25, 0.0, 1.0), t) == pytest.approx(expected, abs=1e-15)


def test_branch_boundaries_use_middle_branch(unit):
    p = RuleParams(0.25, 0.0, 1.0)
    # middle branch at both breakpoints, (t - 1/2)^2 = 1/16
    assert kernel_eval(unit, p, 0.25) == 0.0625
    assert kernel_eval(unit, p, 0.75) == 0.0625
    # first branch just below x
    assert kernel_eval(unit, p, math.nextafter(0.25, 0)) == pytest.approx(0.0625)


@pytest.mark.parametrize(
    "params",
    [RuleParams(0.6, 0.0, 1.0), RuleParams(0.25, 0.8, 0.2), RuleParams(0.25, -0.1, 1.0)],
)
def test_invalid_params_rejected(unit, params):
    with pytest.raises(DomainError):
        kernel_eval(unit, params, 0.5)


def test_t_out_of_range(unit):
    with pytest.raises(DomainError):
        kernel_eval(unit, RuleParams(0.25, 0.0, 1.0), 1.5)


def test_norms_example(unit):
    n = kernel_norms(unit, RuleParams(0.25, 0.0, 1.0))
    assert n.l1 == pytest.approx(1 / 48, rel=1e-14)
    assert n.sup == pytest.approx(0.0625, rel=1e-14)
    assert n.half_range == pytest.approx(1 / 96, rel=1e-14)


@pytest.mark.parametrize("x", [0.0, 0.2, 0.5])
def test_norms_corollary2(unit, x):
    n = kernel_norms(unit, RuleParams(x, 0.5, 0.5))
    assert n.sup == pytest.approx(0.25, rel=1e-15)
    assert n.half_range == pytest.approx(1 / 24, rel=1e-14)


@pytest.mark.parametrize(
    "alpha, beta, expected", [(0.0, 1.0, True), (0.5, 0.5, True), (0.1, 0.8, False)]
)
def test_params_symmetric(unit, alpha, beta, expected):
    assert params_symmetric(unit, RuleParams(0.25, alpha, beta)) is expected


@st.composite
def valid_setup(draw, symmetric=False):
    a = draw(st.floats(-5, 5))
    w = draw(st.floats(0.05, 5))
    iv = Interval(a, a + w)
    x = draw(st.floats(0, 1)) * (iv.mid - iv.a) + iv.a
    x = min(max(x, iv.a), iv.mid)
    u = draw(st.floats(0, 1))
    v = draw(st.floats(0, 1))
    if symmetric:
        alpha = iv.a + min(u, v) * (iv.mid - iv.a)
        beta = iv.a + iv.b - alpha
        beta = min(beta, iv.b)
    else:
        alpha, beta = sorted((iv.a + u * w, iv.a + v * w))
        beta = min(beta, iv.b)
    return iv, RuleParams(x, alpha, beta)


@settings(max_examples=200, deadline=None)
@given(valid_setup(), st.floats(0, 1))
def test_kernel_nonnegative(setup, s):
    iv, p = setup
    t = iv.a + s * iv.width
    t = min(t, iv.b)
    assert kernel_eval(iv, p, t) >= 0.0


@settings(max_examples=200, deadline=None)
@given(valid_setup(symmetric=True), st.floats(0, 1))
def test_kernel_even_when_symmetric(setup, s):
    iv, p = setup
    assert params_symmetric(iv, p)
    t = min(iv.a + s * iv.width, iv.b)
    tr = min(max(iv.reflect(t), iv.a), iv.b)
    k1, k2 = kernel_eval(iv, p, t), kernel_eval(iv, p, tr)
    if abs(t - p.x) < 1e-9 or abs(t - iv.reflect(p.x)) < 1e-9:
        return  # reflection may round across a breakpoint
    assert abs(k1 - k2) <= 1e-12 * (1 + iv.width**2 + abs(iv.a) + abs(iv.b)) ** 2


@settings(max_examples=100, deadline=None)
@given(valid_setup())
def test_norm_relations(setup):
    iv, p = setup
    n = kernel_norms(iv, p)
    assert n.l1 <= n.sup * iv.width * (1 + 1e-12)
    assert n.half_range <= n.l1 * (1 + 1e-12)
    if n.sup > 0:
        assert n.l1 > 0 and n.half_range > 0


@settings(max_examples=100, deadline=None)
@given(valid_setup(symmetric=True))
def test_half_range_is_half_when_symmetric(setup):
    iv, p = setup
    n = kernel_norms(iv, p)
    assert n.half_range == pytest.approx(n.l1 / 2, rel=1e-9, abs=1e-15)


def test_norms_against_oracle():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.uniform(-2, 2)
        iv = Interval(a, a + rng.uniform(0.2, 3))
        x = rng.uniform(iv.a, iv.mid)
        al, be = sorted(rng.uniform(iv.a, iv.b, 2))
        p = RuleParams(x, al, be)
        n = kernel_norms(iv, p)
        k = lambda t: kernel_eval(iv, p, t)
        ref = integrate_reference(k, iv, 1e-12, breakpoints=[x, iv.reflect(x)]).value
        assert n.l1 == pytest.approx(ref, rel=1e-9)
        ref_half = integrate_reference(k, Interval(iv.mid, iv.b), 1e-12, breakpoints=[iv.reflect(x)]).value
        assert n.half_range == pytest.approx(ref_half, rel=1e-9)


def test_prop1_closed_form():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = rng.uniform(-3, 3)
        iv = Interval(a, a + rng.uniform(0.1, 4))
        x = rng.uniform(iv.a, iv.mid)
        n = kernel_norms(iv, RuleParams.corollary1(iv, x))
        expected = 2 / 3 * ((x - iv.a) ** 3 + (iv.mid - x) ** 3)
        assert n.l1 == pytest.approx(expected, rel=1e-12)
        n2 = kernel_norms(iv, RuleParams.corollary2(iv, x))
        assert n2.half_range == pytest.approx(iv.width**3 / 24, rel=1e-12)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from workloop.duffing import (
    beta_star_crit,
    critical_quartic_roots,
    design_from_stiffness,
    forward_verify,
    inelastic_loop,
    is_valid,
    numeric_beta_star_crit,
    optimal_family,
    required_forcing,
)
from workloop.errors import ZeroBetaStar
from workloop.resonance import check_bounds, check_time_domain

TWO_PI = 2 * math.pi


def test_family_zero_beta_star_is_linear():
    d = optimal_family(1.0, 2.0, 1.0, 0.0)
    assert (d.alpha, d.beta) == (4.0, 0.0)


def test_family_inversion_from_stiffness():
    d = design_from_stiffness(1.0, 3.0, 2.0, 1.0)
    assert d.omega == 2.0
    assert d.beta_star == 0.75
    assert d.alpha == pytest.approx(1.0, abs=1e-15)


def test_family_unit_beta_star_has_no_linear_term():
    d = optimal_family(4.0, TWO_PI, 1.0, 1.0)
    assert d.alpha == 0.0
    assert d.beta == TWO_PI ** 2


def test_family_preconditions():
    with pytest.raises(ValueError):
        optimal_family(1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        optimal_family(1.0, 1.0, -1.0, 0.0)


@pytest.mark.parametrize(
    "args, expected",
    [((4.0, TWO_PI, 1.0), 8 / TWO_PI), ((0.0, 3.0, 1.0), 0.0), ((2.0, 2.0, 1.0), 2.0)],
)
def test_beta_star_crit(args, expected):
    assert beta_star_crit(*args) == pytest.approx(expected, rel=1e-15)


def test_beta_star_crit_reference_value():
    assert beta_star_crit(4.0, TWO_PI, 1.0) == pytest.approx(1.27324, abs=5e-6)


def test_quartic_double_root_at_critical():
    crit = beta_star_crit(4.0, TWO_PI, 1.0)
    roots = critical_quartic_roots(optimal_family(4.0, TWO_PI, 1.0, crit))
    assert roots == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)], abs=1e-7)


def test_quartic_four_roots_beyond_critical():
    delta, w, amp = 4.0, TWO_PI, 1.0
    bs = 2 * beta_star_crit(delta, w, amp)
    roots = critical_quartic_roots(optimal_family(delta, w, amp, bs))
    oracle = np.roots([1.0, 0.0, -amp ** 2, 0.0, delta ** 2 / (bs ** 2 * w ** 2)])
    oracle = np.sort(oracle.real[np.abs(oracle.imag) < 1e-12])
    assert len(roots) == 4
    np.testing.assert_allclose(roots, oracle, atol=1e-12)
    assert roots[3] == pytest.approx(math.sqrt((2 + math.sqrt(3)) / 4), rel=1e-12)
    assert roots[2] == pytest.approx(math.sqrt((2 - math.sqrt(3)) / 4), rel=1e-12)


def test_quartic_empty_below_critical():
    crit = beta_star_crit(4.0, TWO_PI, 1.0)
    assert critical_quartic_roots(optimal_family(4.0, TWO_PI, 1.0, -0.5 * crit)) == []


def test_quartic_zero_beta_star():
    with pytest.raises(ZeroBetaStar):
        critical_quartic_roots(optimal_family(4.0, TWO_PI, 1.0, 0.0))


@pytest.mark.parametrize("bs, ok", [(0.0, True), (1.2, True), (-1.2, True), (1.3, False), (-1.3, False)])
def test_is_valid(bs, ok):
    valid, margin = is_valid(optimal_family(4.0, TWO_PI, 1.0, bs))
    assert valid is ok
    assert margin == pytest.approx(8 / TWO_PI - abs(bs), rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(0.5, 10.0), st.floats(0.2, 3.0), st.floats(-3.0, 3.0))
def test_quartic_roots_exist_iff_not_strictly_valid(delta, w, amp, ratio):
    crit = beta_star_crit(delta, w, amp)
    bs = ratio * crit
    if bs == 0:
        return
    valid, margin = is_valid(optimal_family(delta, w, amp, bs))
    roots = critical_quartic_roots(optimal_family(delta, w, amp, bs))
    if abs(abs(ratio) - 1.0) > 1e-9:
        assert bool(roots) == (not valid)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10.0), st.floats(0.5, 10.0), st.floats(0.2, 3.0), st.floats(-5.0, 5.0))
def test_peak_load_equality(delta, w, amp, bs):
    fs = optimal_family(delta, w, amp, bs).elasticity()
    ref = w * w * amp
    assert abs(fs(amp) - ref) < 1e-12 * ref * max(1.0, abs(bs) * amp ** 2)
    assert abs(fs(-amp) + ref) < 1e-12 * ref * max(1.0, abs(bs) * amp ** 2)


def test_required_forcing_pure_damping_at_zero_beta_star():
    d = optimal_family(3.0, 2.5, 1.2, 0.0)
    sig = d.signal()
    t = np.linspace(0.0, sig.period, 97)
    np.testing.assert_allclose(required_forcing(d)(t), 3.0 * sig.velocity(t), atol=1e-12 * 3.0 * 2.5 * 1.2 * 10)


@pytest.mark.parametrize("bs", [-1.0, 0.0, 0.5, 1.27])
def test_required_forcing_vanishes_at_peak(bs):
    d = optimal_family(4.0, TWO_PI, 1.0, bs)
    assert abs(required_forcing(d)(0.0)) < 1e-12 * TWO_PI ** 2


def test_invalid_design_absorbs_power():
    d = optimal_family(4.0, TWO_PI, 1.0, 1.5 * beta_star_crit(4.0, TWO_PI, 1.0))
    sig = d.signal()
    t = np.linspace(0.0, sig.period, 100001)
    assert np.min(required_forcing(d)(t) * sig.velocity(t)) < 0
    assert not check_time_domain(sig, required_forcing(d))


def test_family_correctness_across_range():
    delta, w, amp = 4.0, TWO_PI, 1.0
    crit = beta_star_crit(delta, w, amp)
    for r in np.linspace(-1.0, 1.0, 9):
        d = optimal_family(delta, w, amp, r * crit)
        assert check_time_domain(d.signal(), required_forcing(d))
    for r in (1 + 2e-6, 1.1, 2.0):
        for sgn in (1, -1):
            d = optimal_family(delta, w, amp, sgn * r * crit)
            assert not check_time_domain(d.signal(), required_forcing(d))


def test_forward_verify_linear_case():
    d = optimal_family(4.0, TWO_PI, 1.0, 0.0)
    rep = forward_verify(d)
    assert rep.max_deviation < 1e-6 * d.amplitude


def test_forward_verify_fourth_order():
    d = optimal_family(1.0, 2.0, 1.0, 0.3)
    coarse = forward_verify(d, steps_per_period=2000).max_deviation
    fine = forward_verify(d, steps_per_period=4000).max_deviation
    assert 12.0 < coarse / fine < 20.0


def test_forward_verify_preconditions():
    d = optimal_family(1.0, 2.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        forward_verify(d, periods=0)
    with pytest.raises(ValueError):
        forward_verify(d, steps_per_period=1000)


def test_forward_verify_reports_near_critical():
    d = optimal_family(4.0, TWO_PI, 1.0, 0.999 * beta_star_crit(4.0, TWO_PI, 1.0))
    rep = forward_verify(d, periods=1)
    assert math.isfinite(rep.max_deviation)


def test_bounds_and_is_valid_agree():
    delta, w, amp = 4.0, TWO_PI, 1.0
    loop = inelastic_loop(optimal_family(delta, w, amp, 0.0))
    for bs in (-1.3, -1.2, 0.0, 0.9, 1.2, 1.3, 2.0):
        d = optimal_family(delta, w, amp, bs)
        assert check_bounds(loop, d.elasticity()).is_resonant == is_valid(d)[0]


@pytest.mark.parametrize("params", [(4.0, TWO_PI, 1.0), (2.0, 2.0, 1.0), (0.7, 5.0, 1.8)])
def test_numeric_crit_matches_closed_form(params):
    assert numeric_beta_star_crit(*params) == pytest.approx(beta_star_crit(*params), rel=1e-6)

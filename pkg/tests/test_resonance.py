import math

import numpy as np
import pytest
from hypothesis import example, given, settings, strategies as st

from workloop.duffing import beta_star_crit, inelastic_loop, optimal_family, required_forcing
from workloop.errors import GridMismatch
from workloop.fileio import format_record
from workloop.loops import INELASTIC, build_loop, loop_area, power_metrics
from workloop.plants import (
    DuffingPlant,
    LinearPlant,
    PolynomialElasticity,
    TabulatedElasticity,
    load_function,
)
from workloop.resonance import check_bounds, check_time_domain, one_way_drive
from workloop.signals import PeriodicSignal, simple_harmonic


def linear_load(zeta, w0, w, amp=1.0):
    plant, sig = LinearPlant(zeta, w0), simple_harmonic(amp, w)
    return sig, load_function(plant, sig, plant.natural_elasticity())


def test_time_domain_linear_at_resonance():
    sig, load = linear_load(0.1, 1.0, 1.0)
    assert check_time_domain(sig, load).is_resonant


def test_time_domain_linear_below_resonance():
    sig, load = linear_load(0.1, 1.0, 0.5)
    # dense oracle of F x'
    t = np.linspace(0.0, sig.period, 200001)
    assert np.min(load(t) * sig.velocity(t)) < 0
    res = check_time_domain(sig, load)
    assert not res
    assert res.power_worst < 0


def test_time_domain_duffing_at_resonant_frequency():
    sig = simple_harmonic(1.0, 2.0)
    load = load_function(DuffingPlant(2.0), sig, PolynomialElasticity.duffing(1.0, 3.0))
    assert check_time_domain(sig, load).is_resonant


def test_time_domain_sample_precondition():
    with pytest.raises(ValueError):
        check_time_domain(simple_harmonic(1.0, 1.0), lambda t: t, samples=100)


@pytest.fixture(scope="module")
def fig3_loop():
    return inelastic_loop(optimal_family(4.0, 2 * math.pi, 1.0, 0.0))


def test_bounds_zero_beta_star_resonant(fig3_loop):
    rep = check_bounds(fig3_loop, optimal_family(4.0, 2 * math.pi, 1.0, 0.0).elasticity())
    assert rep.is_resonant and rep.margin > 0
    assert max(rep.equality_residuals) < rep.tol


def test_bounds_beyond_critical_violates_in_interior(fig3_loop):
    crit = beta_star_crit(4.0, 2 * math.pi, 1.0)
    rep = check_bounds(fig3_loop, optimal_family(4.0, 2 * math.pi, 1.0, 1.5 * crit).elasticity())
    assert not rep.is_resonant
    assert rep.margin < -rep.tol
    assert -1.0 < rep.violation_x < 1.0
    assert abs(abs(rep.violation_x) - 1.0) > 1e-3


def test_bounds_zero_elasticity_fails_at_endpoints(fig3_loop):
    rep = check_bounds(fig3_loop, PolynomialElasticity((0.0,)))
    assert not rep.is_resonant
    w2 = (2 * math.pi) ** 2
    assert rep.equality_residuals[0] == pytest.approx(w2, rel=1e-12)
    assert rep.equality_residuals[1] == pytest.approx(w2, rel=1e-12)


def test_bounds_requires_inelastic_loop():
    sig = simple_harmonic(1.0, 2.0)
    loop = build_loop(sig, load_function(DuffingPlant(1.0), sig, PolynomialElasticity((4.0,))))
    with pytest.raises(ValueError):
        check_bounds(loop, PolynomialElasticity((4.0,)))


def test_bounds_grid_mismatch(fig3_loop):
    short = TabulatedElasticity(np.array([-0.5, 0.5]), np.array([-1.0, 1.0]))
    with pytest.raises(GridMismatch):
        check_bounds(fig3_loop, short)


def test_bounds_tabulated_profile_matches_polynomial(fig3_loop):
    poly = optimal_family(4.0, 2 * math.pi, 1.0, 0.7).elasticity()
    x = fig3_loop.x_grid
    tab = TabulatedElasticity(x, poly(x))
    a, b = check_bounds(fig3_loop, tab), check_bounds(fig3_loop, poly)
    assert a.is_resonant == b.is_resonant
    assert a.margin == pytest.approx(b.margin, abs=1e-9 * fig3_loop.scale)


def test_report_record():
    sig = simple_harmonic(1.0, 2.0)
    loop = build_loop(sig, load_function(DuffingPlant(2.0), sig), branch_kind=INELASTIC)
    text = format_record(check_bounds(loop, PolynomialElasticity.duffing(1.0, 3.0)).as_record())
    assert text.startswith("resonant=true\nmargin=")


def test_one_way_drive_upper_on_ellipse(fig3_loop):
    ow = one_way_drive(fig3_loop, "upper")
    x = fig3_loop.x_grid
    scale = fig3_loop.scale
    delta, w = 4.0, 2 * math.pi
    assert np.max(np.abs(ow.loop.upper)) < 1e-9 * scale
    expected = -2 * delta * w * np.sqrt(np.clip(1.0 - x ** 2, 0.0, None))
    np.testing.assert_allclose(ow.loop.lower, expected, atol=1e-9 * scale)
    assert np.all(ow.loop.lower <= 0)


def test_one_way_drive_lower_side(fig3_loop):
    ow = one_way_drive(fig3_loop, "lower")
    assert np.max(np.abs(ow.loop.lower)) < 1e-9 * fig3_loop.scale
    assert np.all(ow.loop.upper >= 0)


def test_one_way_drive_duty_cycle_half(fig3_loop):
    ow = one_way_drive(fig3_loop)
    assert ow.duty_cycle == pytest.approx(0.5, abs=0.01)


def test_one_way_drive_zero_area_loop():
    plant, sig = LinearPlant(0.0, 1.0), simple_harmonic(1.0, 1.3)
    loop = build_loop(sig, load_function(plant, sig), branch_kind=INELASTIC)
    assert abs(loop_area(loop)) < 1e-9 * loop.scale
    ow = one_way_drive(loop)
    assert ow.duty_cycle == 0.0
    assert np.max(np.abs(ow.loop.upper)) < 1e-9 * loop.scale
    assert np.max(np.abs(ow.loop.lower)) < 1e-9 * loop.scale


def test_one_way_drive_profile_table(fig3_loop):
    ow = one_way_drive(fig3_loop)
    tab = ow.profile.to_table()
    np.testing.assert_allclose(tab(fig3_loop.x_grid), -fig3_loop.upper, atol=1e-12 * fig3_loop.scale)


@pytest.mark.parametrize("rho", [-0.1, 0.0, 0.15])
@pytest.mark.parametrize("side", ["upper", "lower"])
def test_one_way_drive_is_resonant_and_unidirectional(rho, side):
    sig = PeriodicSignal(1.7, (0.0, 1.0 - rho, 0.0, rho))
    loop = build_loop(sig, load_function(DuffingPlant(1.2), sig), branch_kind=INELASTIC)
    ow = one_way_drive(loop, side)
    rep = check_bounds(loop, ow.profile)
    assert rep.margin >= -rep.tol
    assert check_time_domain(sig, ow.loop.load).is_resonant
    diff = loop.upper[1:-1] - loop.lower[1:-1]
    assert np.all(diff > 0)


@settings(max_examples=30, deadline=None)
@given(
    st.floats(0.5, 5.0), st.floats(1.0, 8.0), st.floats(0.5, 2.0),
    st.floats(-2.0, 2.0).filter(lambda r: abs(abs(r) - 1.0) > 1e-6),
)
@example(0.5, 8.0, 2.0, 1.000001)
@example(5.0, 1.0, 0.5, -0.999999)
def test_time_domain_and_bounds_agree(delta, omega, amp, ratio):
    crit = beta_star_crit(delta, omega, amp)
    design = optimal_family(delta, omega, amp, ratio * crit)
    loop = inelastic_loop(design, 257)
    a = check_bounds(loop, design.elasticity()).is_resonant
    b = check_time_domain(design.signal(), required_forcing(design)).is_resonant
    assert a == b == (abs(ratio) <= 1.0)


@pytest.mark.parametrize("ratio", [-1.0, -0.4, 0.0, 0.6, 1.0])
def test_resonant_states_have_equal_power_metrics(ratio):
    crit = beta_star_crit(4.0, 2 * math.pi, 1.0)
    design = optimal_family(4.0, 2 * math.pi, 1.0, ratio * crit)
    m = power_metrics(design.signal(), required_forcing(design))
    assert m.p_abs == pytest.approx(m.p_net, rel=1e-9)
    assert m.p_pos == pytest.approx(m.p_net, rel=1e-9)

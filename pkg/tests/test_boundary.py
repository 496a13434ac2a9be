import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXCITED, MIXED, TILTED
from ptmpemba import boundary as b
from ptmpemba.model import ModelParams
from ptmpemba.mpemba import CrossingConfig, compare
from ptmpemba.dynamics import long_time_state
from ptmpemba.quantifiers import trace_distance_series
from ptmpemba.spectral import overlaps, spectrum_of

BAND = ModelParams(1.8, 0.2, 0.5)
BAND_A = np.linspace(1.35, 3.0, 34)
BAND_G1 = np.linspace(0.02, 0.48, 24)


def solve(params, rho_I=EXCITED, rho_II=MIXED):
    spec = spectrum_of(params)
    return spec, b.solve_x(b.compute_inputs(spec, overlaps(spec, rho_I), overlaps(spec, rho_II)))


def test_inputs_left_of_lep_are_conjugate_pairs():
    spec = spectrum_of(ModelParams(1.0, 0.4, 1.0))
    inp = b.compute_inputs(spec, overlaps(spec, EXCITED), overlaps(spec, MIXED))
    assert inp.regime is b.Regime.LEFT
    assert abs(inp.T4 - np.conj(inp.T3)) < 1e-9
    assert abs(inp.R4_I - np.conj(inp.R3_I)) < 1e-9
    assert abs(inp.R4_II - np.conj(inp.R3_II)) < 1e-9


def test_inputs_right_of_lep_are_real():
    spec = spectrum_of(BAND)
    inp = b.compute_inputs(spec, overlaps(spec, TILTED), overlaps(spec, MIXED))
    assert inp.regime is b.Regime.RIGHT
    for v in (inp.T3, inp.T4, inp.P, inp.R3_I, inp.R4_I, inp.R3_II, inp.R4_II):
        assert abs(v.imag) < 1e-9


def test_unit_modulus_roots_left_of_lep():
    spec, sol = solve(ModelParams(1.0, 0.4, 1.0))
    assert abs(abs(sol.x_plus) - 1) < 1e-8 and abs(abs(sol.x_minus) - 1) < 1e-8
    assert max(sol.residual(x) for x in sol.roots) < 1e-9
    assert b.period(spec) == pytest.approx(2.3, abs=0.01)


def test_product_identity_left_of_lep():
    for a in np.linspace(0.2, 1.45, 15):
        for g1 in np.linspace(0.05, 0.95, 15):
            spec, sol = solve(ModelParams(a, g1, 1.0))
            if sol.regime is b.Regime.LEFT:
                assert abs(abs(sol.x_plus * sol.x_minus) - 1) < 1e-8


def test_band_has_both_roots_in_unit_interval():
    _, sol = solve(BAND, TILTED)
    assert sol.regime is b.Regime.RIGHT
    assert sol.in_unit_interval == (True, True)


def long_time_crossings(spec, rho_I, rho_II, t_max, n=20000):
    t = np.linspace(1e-6, t_max, n)
    d = []
    for rho in (rho_I, rho_II):
        approx = long_time_state(spec, overlaps(spec, rho), t)
        d.append(trace_distance_series(approx, spec.steady_state))
    delta = d[0] - d[1]
    k = np.flatnonzero(np.sign(delta[:-1]) != np.sign(delta[1:]))
    # linear interpolation is enough at this resolution
    return t[k] - delta[k] * (t[k + 1] - t[k]) / (delta[k + 1] - delta[k])


def test_right_of_lep_taus_are_long_time_crossings():
    spec, sol = solve(BAND, TILTED)
    taus = b.predict_taus(sol, spec)
    assert len(taus) == 2 and all(t > 0 for t in taus)
    assert np.allclose(long_time_crossings(spec, TILTED, MIXED, 3.0), taus, atol=1e-6)
    rep = compare(spec, TILTED, MIXED, cfg=CrossingConfig())
    assert rep.count == 2
    # the full dynamics crosses close to, not exactly at, the long-time prediction
    assert np.allclose(rep.crossing_times, taus, rtol=0.1)


def test_left_of_lep_tau_family_has_period():
    spec, sol = solve(ModelParams(1.0, 0.4, 1.0))
    taus = b.predict_taus(sol, spec, t_max=10.0)
    T = b.period(spec)
    for root_taus in (taus[0::2], taus[1::2]):
        assert np.allclose(np.diff(root_taus), T)
    # long-time crossings line up with the exact ones after the first
    rep = compare(spec, EXCITED, MIXED, cfg=CrossingConfig(t_max=10.0, samples=8000))
    late = [t for t in rep.crossing_times if t > 4.0]
    assert np.allclose(late, [t for t in taus if t > 4.0][: len(late)], atol=1e-3)
    assert np.allclose(long_time_crossings(spec, EXCITED, MIXED, 10.0), taus, atol=1e-6)


def test_single_early_crossing_has_no_long_time_tau():
    spec, sol = solve(ModelParams(1.3, 0.4, 1.0))
    with pytest.raises(b.NoRealTau):
        b.predict_taus(sol, spec)


def test_identical_states_degenerate():
    with pytest.raises(b.DegenerateQuadratic) as info:
        solve(ModelParams(1.0, 0.4, 1.0), EXCITED, EXCITED)
    assert info.value.linear_root is None


def test_linear_remnant_reported():
    inp = b.BoundaryInputs(1.0, 1.0, 1.0, 0.5, 0.1, 0.25, 0.1, b.Regime.RIGHT)
    with pytest.raises(b.DegenerateQuadratic) as info:
        b.solve_x(inp)
    a, bb, c = inp.coefficients()
    assert info.value.linear_root == pytest.approx(-c / bb)


def test_zero_projection():
    spec = spectrum_of(ModelParams(1.0, 0.4, 1.0))
    fake = overlaps(spec, spec.right_modes[2])
    with pytest.raises(b.ZeroProjection):
        b.compute_inputs(spec, fake, overlaps(spec, MIXED))


def test_relative_entropy_variant_product():
    spec = spectrum_of(ModelParams(1.0, 0.4, 1.0))
    sol = b.solve_x_relative_entropy(spec, overlaps(spec, EXCITED), overlaps(spec, MIXED))
    assert abs(abs(sol.x_plus * sol.x_minus) - 1) < 1e-8


def test_x_plus_and_x_minus_regions_coincide_left_of_lep():
    cells = b.classify_regions(np.linspace(0.2, 1.45, 12), np.linspace(0.05, 0.95, 12), ModelParams(1, 0.1, 1), EXCITED, MIXED)
    for c in cells:
        if c.regime is b.Regime.LEFT:
            assert c.circle_plus == c.circle_minus


def band_masks(rho_I, rho_II):
    cells = b.classify_regions(BAND_A, BAND_G1, BAND, rho_I, rho_II)
    plus = np.array([c.interval_plus for c in cells])
    minus = np.array([c.interval_minus for c in cells])
    return plus, minus


@pytest.mark.xfail(strict=True, reason="with the root labels as defined, the x_plus region is the larger one")
def test_minus_region_contains_plus_region():
    plus, minus = band_masks(TILTED, MIXED)
    assert np.all(minus[plus]) and minus.sum() > plus.sum()


def test_one_region_strictly_contains_the_other():
    plus, minus = band_masks(TILTED, MIXED)
    assert np.all(plus[minus]) and plus.sum() > minus.sum()
    # exchanging the two states exchanges the labels
    plus2, minus2 = band_masks(MIXED, TILTED)
    assert np.array_equal(plus, minus2) and np.array_equal(minus, plus2)


def test_edge_cells():
    mask = np.zeros((5, 5), bool)
    mask[:, 3:] = True
    edge = b.edge_cells(mask)
    assert edge[:, 2:4].all() and not edge[:, :2].any() and not edge[:, 4].any()
    valid = np.ones_like(mask)
    valid[:, 3] = False
    assert not b.edge_cells(mask, valid).any()


def test_invalid_cells_recorded():
    cells = b.classify_regions([1.0], [0.5, 1.2], ModelParams(1, 0.1, 1), EXCITED, MIXED)
    assert cells[0].status == "ok" and "InvalidParams" in cells[1].status


coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=300, deadline=None)
@given(coef, coef, coef, coef, coef, coef, coef)
def test_root_residuals_random_inputs(t3, t4, p, r3i, r4i, r3ii, r4ii):
    inp = b.BoundaryInputs(t3, t4, p, r3i, r4i, r3ii, r4ii, b.Regime.LEFT)
    try:
        sol = b.solve_x(inp)
    except b.DegenerateQuadratic:
        return
    for x in sol.roots:
        assert sol.residual(x) < 1e-9

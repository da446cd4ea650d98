"""Exponent arithmetic and regime classification, checked against
independent root-finding oracles and hand-frozen values."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pytest import approx, raises

from blowuplab.exponents import (
    Branch,
    DerivedScales,
    LawTag,
    LifespanLaw,
    ModelParams,
    NumericalFailureError,
    ScatteringParams,
    UnsupportedRegimeError,
    ValidationError,
    classify_cor1,
    classify_cor2,
    classify_h0,
    classify_negmass,
    classify_thm1,
    critical_exponent_thm1,
    d_star,
    derive_scales,
    fujita_exponent,
    gamma_fujita,
    gamma_strauss,
    mu_star,
    neg_part,
    p_star,
    phase_diagram,
    phase_diagram_svg,
    pos_part,
    r_star,
    solve_lifespan,
    strauss_exponent,
    theta_exponent,
    transition_threshold,
)

INF = math.inf


def bisect_root(f, lo, hi, iters=200):
    # sign-change bisection, the oracle route for the Strauss exponent
    flo = f(lo)
    assert flo * f(hi) < 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- exponent functions -----------------------------------------------------

def test_strauss_exponent_matches_bisection_oracle():
    for nu in (1.1, 1.5, 2.0, 3.7, 5.0, 12.0, 20.0):
        oracle = bisect_root(lambda p: gamma_strauss(p, nu), 1.0, 1e6)
        assert strauss_exponent(nu) == approx(oracle, abs=1e-9)


def test_strauss_frozen_values():
    assert strauss_exponent(2.0) == approx((3 + math.sqrt(17)) / 2, abs=1e-15)
    assert strauss_exponent(5.0) == approx((6 + math.sqrt(68)) / 8, abs=1e-15)
    assert strauss_exponent(3.0) == approx(1 + math.sqrt(2), abs=1e-15)


def test_root_residuals_tight():
    for i in range(200):
        nu = 1.0 + 19.0 * (i + 1) / 200.0
        assert abs(gamma_strauss(strauss_exponent(nu), nu)) < 1e-9
    for i in range(200):
        nu = 20.0 * (i + 1) / 200.0
        assert abs(gamma_fujita(fujita_exponent(nu), nu)) < 1e-12


def test_gamma_strauss_at_p_equal_one_is_four():
    for nu in (0.0, 1.0, 2.5, 17.0):
        assert gamma_strauss(1.0, nu) == 4.0


def test_extended_real_conventions():
    assert fujita_exponent(0.0) == INF
    assert fujita_exponent(-2.0) == INF
    assert strauss_exponent(1.0) == INF
    assert strauss_exponent(0.5) == INF
    # comparisons against +inf stay total
    assert max(fujita_exponent(-1.0), strauss_exponent(4.0)) == INF
    assert 3.0 < INF


def test_d_star_frozen_and_range():
    assert d_star(4.0) == approx(1.0, abs=1e-15)          # sqrt(49) = 7 exactly
    assert d_star(2.0) == approx((-3 + math.sqrt(17)) / 2, abs=1e-15)
    assert d_star(3.0) == approx(-2 + math.sqrt(8), abs=1e-14)
    assert d_star(1.0) == 0.0
    assert d_star(0.3) == 0.0
    for i in range(100):
        nu = 1.0 + 0.2 * i
        assert 0.0 <= d_star(nu) < 2.0


def test_pos_neg_parts():
    assert pos_part(3.0) == 3.0 and neg_part(3.0) == 0.0
    assert pos_part(-2.0) == 0.0 and neg_part(-2.0) == 2.0
    assert pos_part(0.0) == 0.0 and neg_part(0.0) == 0.0


def test_triple_coincidence_on_the_band_edge():
    # at sqrt(delta) = n - d_star(n+mu1) the three thresholds collapse
    for n in (1, 2, 3, 4, 5):
        for k in range(11):
            mu1 = 0.5 * k
            nu = n + mu1
            if nu <= 1:
                continue
            sd = n - d_star(nu)
            kappa = (mu1 - 1.0 - sd) / 2.0
            a = strauss_exponent(nu)
            b = fujita_exponent(n + kappa)
            c = transition_threshold(n, sd)
            assert abs(a - b) < 1e-9
            assert abs(a - c) < 1e-9


def test_theta_range_and_frozen():
    assert theta_exponent(3.0) == approx(0.0, abs=1e-15)
    assert theta_exponent(0.0) == approx(-1.0, abs=1e-15)
    for k in range(40):
        th = theta_exponent(0.25 * k)
        assert -1.0 <= th < 1.0


# --- derived scales ---------------------------------------------------------

def test_derive_scales_reference_point():
    sc = derive_scales(ModelParams(1, 2.0, 0.0))
    assert sc.delta == 1.0
    assert sc.sqrt_delta == 1.0
    assert sc.kappa == 0.0
    assert sc.lam == 2.0
    assert sc.p_star == approx(2.0, abs=1e-15)
    assert sc.mu_star == approx(4.0 / 3.0, abs=1e-15)
    assert sc.r_star == approx(1.0, abs=1e-15)  # sqrt(delta)=1 above theta(2)
    # lambda + 2 kappa = mu1 identity
    assert sc.lam + 2 * sc.kappa == approx(2.0, abs=1e-14)


def test_derive_scales_negative_delta():
    sc = derive_scales(ModelParams(3, 1.0, 1.0))
    assert sc.delta == -4.0
    assert sc.sqrt_delta is None
    assert sc.kappa is None and sc.lam is None
    assert sc.p_star is None and sc.r_star is None
    assert sc.d_star == d_star(4.0)


@given(st.integers(1, 5), st.floats(0.0, 6.0), st.floats(-3.0, 3.0))
def test_scale_identities(n, mu1, mu2):
    sc = derive_scales(ModelParams(n, mu1, mu2))
    if sc.sqrt_delta is None:
        assert sc.delta < 0
        return
    assert sc.lam + 2 * sc.kappa == approx(mu1, abs=1e-12)
    assert sc.kappa + sc.lam - 1.0 == approx((mu1 - 1 + sc.sqrt_delta) / 2, abs=1e-12)


def test_r_star_never_exceeds_critical():
    # r_* <= p_crit on 0 <= delta < 1, with equality exactly on the ray
    # delta = 0, mu1 >= 3 (there the 1-D heat bound covers the whole
    # subcritical range; at mu1 = 3 the shared value is p_S(4) = 2)
    assert r_star(3.0, 0.0) == approx(2.0, abs=1e-15)
    assert critical_exponent_thm1(1, 3.0, 0.0) == approx(2.0, abs=1e-12)
    for mu1 in (0.0, 0.5, 1.0, 2.0, 2.9, 3.0, 3.1, 4.0):
        for delta in (0.0, 0.04, 0.25, 0.81):
            r = r_star(mu1, delta)
            pc = critical_exponent_thm1(1, mu1, delta)
            if delta == 0.0 and mu1 >= 3.0:
                assert r == approx(pc, abs=1e-12)
            else:
                assert r < pc - 1e-12


def test_p_star_edge_cases():
    assert p_star(1, 0.0, 1.0) == INF           # n + mu1 = 1
    assert p_star(1, 2.0, 1.0) == approx(2.0)   # 1 + (1 - 1 + 2)/2
    with raises(UnsupportedRegimeError):
        r_star(1.0, -0.5)


@given(st.integers(1, 4), st.floats(0.0, 5.0), st.floats(0.0, 9.0),
       st.floats(1.01, 8.0))
def test_q_sign_matches_p_star_side(n, mu1, delta, p):
    if n + mu1 <= 1.0:
        return
    sd = math.sqrt(delta)
    kappa = (mu1 - 1.0 - sd) / 2.0
    q = kappa - (n + mu1 - 1.0) * p / 2.0 + n + 1.0
    ps = p_star(n, mu1, sd)
    if abs(p - ps) < 1e-9:
        return
    assert (q > 0) == (p < ps)


def test_p_star_balances_wave_and_heat_rates():
    # gamma_S(p_*, n+mu1) = 2 gamma_F(p_*, n+kappa)
    for (n, mu1, delta) in ((1, 2.0, 1.0), (2, 0.0, 4.0), (3, 1.5, 0.0), (2, 3.0, 2.0)):
        sd = math.sqrt(delta)
        kappa = (mu1 - 1.0 - sd) / 2.0
        ps = p_star(n, mu1, sd)
        assert gamma_strauss(ps, n + mu1) == approx(2 * gamma_fujita(ps, n + kappa), abs=1e-9)


# --- critical exponent ------------------------------------------------------

def test_critical_exponent_piecewise_structure():
    # below the band edge: Strauss wins; inside the band: shifted Fujita wins;
    # at/past sqrt(delta) = 2n + mu1 - 1 (or n + mu1 <= 1): +inf
    n, mu1 = 2, 1.0
    nu = n + mu1
    edge = n - d_star(nu)
    for sd in (0.0, 0.5 * edge, edge):
        pc = critical_exponent_thm1(n, mu1, sd * sd)
        assert pc == approx(strauss_exponent(nu), abs=1e-9)
    for sd in (edge + 0.1, 0.5 * (edge + (2 * n + mu1 - 1))):
        kappa = (mu1 - 1.0 - sd) / 2.0
        pc = critical_exponent_thm1(n, mu1, sd * sd)
        assert pc == approx(fujita_exponent(n + kappa), abs=1e-12)
        assert math.isfinite(pc)
    sd = 2 * n + mu1 - 1.0
    assert critical_exponent_thm1(n, mu1, sd * sd) == INF
    assert critical_exponent_thm1(1, 0.0, 1.0) == INF  # n + mu1 = 1


def test_critical_exponent_rejects_negative_delta():
    with raises(UnsupportedRegimeError):
        critical_exponent_thm1(2, 1.0, -0.1)


# --- classifiers ------------------------------------------------------------

def test_thm1_wave_example():
    reg = classify_thm1(ModelParams(3, 2.0, 0.0), 1.5)
    assert reg.blows_up and reg.branch is Branch.SUB_WAVE
    assert reg.p_crit == approx(strauss_exponent(5.0), abs=1e-12)
    assert reg.law.tag is LawTag.WAVE_LIKE
    # gamma_S(1.5, 5) = 2, so T ~ eps^{-0.75}
    assert reg.law.eps_exponent() == approx(0.75, abs=1e-12)


def test_thm1_heat_example_matches_known_rate():
    reg = classify_thm1(ModelParams(1, 2.0, 0.0), 2.0)
    assert reg.branch is Branch.SUB_HEAT
    assert reg.law.eps_power == 1.0
    assert reg.law.log_power == 0.0
    assert reg.law.eps_exponent() == approx(1.0, abs=1e-12)  # T ~ 1/eps


def test_thm1_above_critical():
    reg = classify_thm1(ModelParams(1, 2.0, 0.0), 4.0)
    assert not reg.blows_up
    assert reg.law is None
    assert reg.branch is Branch.ABOVE_CRITICAL
    assert reg.p_crit == approx(3.0, abs=1e-12)


def test_thm1_log_improved_at_delta_zero():
    reg = classify_thm1(ModelParams(1, 1.0, 0.0), 1.8)
    assert reg.branch is Branch.SUB_HEAT
    assert reg.law.log_power == 1.0
    assert reg.law.tag is LawTag.LOG_IMPROVED
    # t exponent (3-p)/(p-1) = 2/(p-1) - 1
    assert reg.law.t_exponent == approx(2 / 0.8 - 1, abs=1e-12)
    on_thr = classify_thm1(ModelParams(1, 1.0, 0.0), 2.0)
    assert on_thr.branch is Branch.TRANSITION
    above = classify_thm1(ModelParams(1, 1.0, 0.0), 2.5)
    assert above.branch is Branch.SUB_WAVE


def test_thm1_rejects_bad_inputs():
    with raises(UnsupportedRegimeError):
        classify_thm1(ModelParams(2, 0.0, 1.0), 2.0)   # delta = -3
    with raises(ValidationError):
        classify_thm1(ModelParams(2, 2.0, 0.0), 1.0)   # p must exceed 1
    with raises(ValidationError):
        classify_thm1(ModelParams(2, 2.0, 0.0), 2.0, h_positive=False)
    with raises(ValidationError):
        ModelParams(0, 1.0, 0.0)


def test_cor1_flat_damping_free_rate():
    reg = classify_cor1(1, 0.0, 2.0)
    assert reg.blows_up and reg.branch is Branch.SUB_HEAT
    assert not math.isfinite(reg.p_crit)
    assert reg.law.eps_exponent() == approx(0.5, abs=1e-12)  # T ~ eps^{-1/2}


def test_cor1_large_damping_heat_everywhere():
    # mu >= mu_*(n): single heat-type law with gamma_F(p, n)
    reg = classify_cor1(2, 3.0, 1.7)
    assert reg.branch is Branch.SUB_HEAT
    assert reg.law.t_exponent == approx(gamma_fujita(1.7, 2.0) / 0.7, abs=1e-13)
    assert reg.p_crit == approx(fujita_exponent(2.0), abs=1e-12)


def test_cor1_wave_side():
    # n = 3, mu <= 2: wave-type for every subcritical p
    reg = classify_cor1(3, 1.0, 1.9)
    assert reg.branch is Branch.SUB_WAVE
    assert reg.p_crit == approx(strauss_exponent(4.0), abs=1e-12)
    assert reg.p_crit == approx(2.0, abs=1e-12)
    assert not classify_cor1(3, 1.0, 2.0).blows_up


def test_cor1_phi0_log_improvement():
    reg = classify_cor1(1, 1.0, 1.5)
    assert reg.branch is Branch.SUB_HEAT
    assert reg.law.log_power == 1.0
    at2 = classify_cor1(1, 1.0, 2.0)
    assert at2.branch is Branch.TRANSITION and at2.law.log_power == 1.0


def grid_vals(lo, hi, k):
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cor1_equals_thm1_mass_free(n):
    for mu in grid_vals(0.0, 6.0, 41):
        for p in grid_vals(1.03, 6.0, 41):
            a = classify_thm1(ModelParams(n, mu, 0.0), p)
            b = classify_cor1(n, mu, p)
            assert a.blows_up == b.blows_up
            assert a.branch is b.branch
            assert a.p_crit == b.p_crit
            assert a.law == b.law


def test_cor2_known_profile_in_1d():
    # n = 1, mu = 2: wave below 2, log-improved at 2, mixed in (2, 3)
    below = classify_cor2(1, 2.0, 1.7)
    assert below.branch is Branch.SUB_WAVE
    at = classify_cor2(1, 2.0, 2.0)
    assert at.branch is Branch.TRANSITION
    assert at.law.eps_power == 2.0 and at.law.log_power == 1.0
    assert at.law.t_exponent == approx(1.0, abs=1e-13)  # 2/(p-1) - n = 1
    above = classify_cor2(1, 2.0, 2.5)
    assert above.branch is Branch.SUB_MIXED
    assert above.law.eps_exponent() == approx(7.5, abs=1e-12)
    assert above.p_crit == approx(3.0, abs=1e-12)
    none = classify_cor2(1, 2.0, 3.0)
    assert not none.blows_up


def test_cor2_wave_inclusive_at_mu_star():
    reg = classify_cor2(2, 2.0, 1.6)
    assert reg.branch is Branch.SUB_WAVE


def test_cor2_1d_heat_override():
    reg = classify_cor2(1, 0.5, 1.2)
    assert reg.branch is Branch.IMPROVED_1D
    assert reg.law.tag is LawTag.HEAT_LIKE
    assert reg.law.t_exponent == approx(gamma_fujita(1.2, 1.0) / 0.2, abs=1e-12)
    # outside the override window the base branch resumes
    assert classify_cor2(1, 0.5, 1.5).branch is Branch.SUB_WAVE


def test_cor2_large_mu_mixed_everywhere():
    reg = classify_cor2(2, 5.5, 1.2)   # mu >= n + 3
    assert reg.branch is Branch.SUB_MIXED
    assert reg.law.tag is LawTag.MIXED_TYPE


def test_h0_known_profile_in_1d():
    params = ModelParams(1, 2.0, 0.0)
    below = classify_h0(params, 1.7)
    assert below.branch is Branch.SUB_WAVE
    at = classify_h0(params, 2.0)
    assert at.branch is Branch.TRANSITION
    assert at.law.log_power == 1.0           # 2 - sgn(delta), delta = 1
    above = classify_h0(params, 2.5)
    assert above.branch is Branch.SUB_MIXED
    assert above.law.log_power == 0.0
    assert above.law.eps_exponent() == approx(7.5, abs=1e-12)


def test_h0_wave_everywhere_in_2d():
    params = ModelParams(2, 2.0, 0.0)
    for p in (1.2, 1.5, 1.9):
        assert classify_h0(params, p).branch is Branch.SUB_WAVE
    assert classify_h0(params, 2.0).blows_up is False


def test_h0_matches_cor2_on_mass_free_grid():
    for n in (1, 2, 3):
        for mu in grid_vals(0.0, 6.0, 31):
            for p in grid_vals(1.05, 5.0, 31):
                a = classify_h0(ModelParams(n, mu, 0.0), p)
                b = classify_cor2(n, mu, p)
                assert a.blows_up == b.blows_up
                assert a.branch is b.branch
                if a.law is not None:
                    assert a.law.eps_power == b.law.eps_power
                    assert a.law.t_exponent == approx(b.law.t_exponent, rel=1e-12)
                    assert a.law.log_power == b.law.log_power


def test_h0_1d_override_region():
    params = ModelParams(1, 2.5, 0.5)  # delta = 0.25
    sc = derive_scales(params)
    assert sc.sqrt_delta == approx(0.5)
    reg = classify_h0(params, 1.2)
    assert reg.branch is Branch.IMPROVED_1D
    assert reg.law.t_exponent == approx(gamma_fujita(1.2, 2.0) / 0.2, abs=1e-12)


def test_negmass_equals_thm1_with_effective_mass():
    sp = ScatteringParams(2, 2.0, -1.0, 2.0)
    m = sp.effective_mass()
    assert m == approx(-math.exp(-2.0), abs=1e-15)
    for p in grid_vals(1.05, 4.0, 60):
        a = classify_negmass(sp, p)
        b = classify_thm1(ModelParams(2, 0.0, m), p)
        assert a.blows_up == b.blows_up
        assert a.branch is b.branch
        assert a.p_crit == b.p_crit
        assert a.law == b.law


def test_negmass_validation():
    with raises(ValidationError):
        ScatteringParams(2, 2.0, -1.0, 1.0)    # beta must exceed 1
    with raises(ValidationError):
        ScatteringParams(2, -0.5, -1.0, 2.0)   # nu1 >= 0
    with raises(ValidationError):
        ScatteringParams(2, 2.0, 0.5, 2.0)     # nu2 < 0


@given(st.integers(1, 4), st.floats(0.0, 6.0), st.floats(-2.0, 2.0),
       st.floats(1.01, 9.0))
@settings(max_examples=300)
def test_classifier_totality(n, mu1, mu2, p):
    params = ModelParams(n, mu1, mu2)
    delta = (mu1 - 1.0) ** 2 - 4.0 * mu2
    if delta < 0:
        with raises(UnsupportedRegimeError):
            classify_thm1(params, p)
        return
    reg = classify_thm1(params, p)
    assert reg.blows_up == (p < reg.p_crit)
    assert (reg.law is None) == (not reg.blows_up)
    if reg.law is not None:
        assert reg.law.t_exponent > 0
        assert reg.law.log_power in (0.0, 1.0, 2.0)
        if reg.branch is Branch.SUB_WAVE:
            assert reg.law.tag is LawTag.WAVE_LIKE


def test_ordering_flip_across_transition():
    # heat rate is the smaller lifespan exponent up to the threshold,
    # the wave rate beyond it
    cases = [(1, 1.5, 0.0), (2, 0.5, 0.0), (1, 1.2, 0.002), (2, 1.0, -0.2)]
    hit = 0
    for (n, mu1, mu2) in cases:
        sc = derive_scales(ModelParams(n, mu1, mu2))
        sd = sc.sqrt_delta
        assert sd is not None
        if not (n - 2 < sd < n - sc.d_star):
            continue
        hit += 1
        thr = transition_threshold(n, sd)
        pc = critical_exponent_thm1(n, mu1, sc.delta)
        for p in grid_vals(1.02, min(pc, 8.0) - 1e-6, 25):
            gf = gamma_fujita(p, n + sc.kappa)
            heat = (p - 1.0) / gf
            wave = 2 * p * (p - 1.0) / gamma_strauss(p, n + mu1)
            if p < thr - 1e-9:
                assert heat <= wave + 1e-12
            elif p > thr + 1e-9 and gf > 0:
                # the heat-form bound is only meaningful below p_F(n+kappa)
                assert wave <= heat + 1e-12
    assert hit >= 2


# --- lifespan solving -------------------------------------------------------

def test_solve_lifespan_closed_form():
    law = LifespanLaw(1.0, 2.0, 0.0, LawTag.HEAT_LIKE)
    assert solve_lifespan(law, 0.01) == approx(10.0, abs=1e-12)


def test_solve_lifespan_log_corrected():
    law = LifespanLaw(1.0, 1.0, 1.0, LawTag.LOG_IMPROVED)
    t = solve_lifespan(law, 0.01)
    assert t == approx(29.312189979504524, abs=1e-6)
    assert abs(0.01 * t * math.log1p(t) - 1.0) < 1e-12


def test_solve_lifespan_validation():
    law = LifespanLaw(1.0, 1.0, 1.0, LawTag.LOG_IMPROVED)
    with raises(ValidationError):
        solve_lifespan(law, 1.5)
    with raises(ValidationError):
        solve_lifespan(law, -0.1)
    with raises(ValidationError):
        solve_lifespan(LifespanLaw(1.0, -0.5, 0.0, LawTag.HEAT_LIKE), 0.01)


@given(st.floats(1e-8, 0.2), st.floats(1e-8, 0.2))
@settings(max_examples=100)
def test_solve_lifespan_monotone(e1, e2):
    law = LifespanLaw(2.0, 1.5, 1.0, LawTag.LOG_IMPROVED)
    t1, t2 = solve_lifespan(law, e1), solve_lifespan(law, e2)
    if e1 < e2:
        assert t1 >= t2
    elif e2 < e1:
        assert t2 >= t1


# --- phase diagram ----------------------------------------------------------

def test_phase_diagram_rows_and_boundaries():
    diag = phase_diagram(1, "cor1", (1.05, 5.0), (0.0, 3.0), 24)
    assert len(diag.rows) == 24 * 24
    names = {row[2] for row in diag.rows}
    assert "SubWave" in names and "SubHeat" in names and "AboveCritical" in names
    assert "strauss" in diag.boundaries
    assert "fujita" in diag.boundaries
    assert "transition-upper" in diag.boundaries
    assert "transition-lower" in diag.boundaries
    for pts in diag.boundaries.values():
        assert len(pts) >= 2


def test_phase_diagram_negmass_axes():
    diag = phase_diagram(3, "negmass", (1.05, 4.0), (0.0, 4.5), 16)
    names = {row[2] for row in diag.rows}
    assert "SubWave" in names and "SubHeat" in names
    assert "transition" in diag.boundaries


def test_phase_diagram_validation():
    with raises(ValidationError):
        phase_diagram(1, "nope", (1.1, 3.0), (0.0, 2.0), 8)
    with raises(ValidationError):
        phase_diagram(1, "cor1", (0.5, 3.0), (0.0, 2.0), 8)
    with raises(ValidationError):
        phase_diagram(1, "cor1", (1.1, 3.0), (2.0, 0.0), 8)


def test_phase_diagram_svg_shape():
    diag = phase_diagram(1, "cor2", (1.05, 4.0), (0.0, 4.0), 12)
    svg = phase_diagram_svg(diag)
    assert svg.startswith("<svg")
    assert 'viewBox="0 0 800 600"' in svg
    assert "polyline" in svg
    assert svg.count("<rect") == 12 * 12 + 1  # cells plus background

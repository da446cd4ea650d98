"""Acceptance gate: twelve criteria, one test (and one pass line) each.

Each criterion pins a deliverable at its stated tolerance: closed-form
exponent identities, classifier equivalences, region-map correctness
against independently coded analytic boundaries, iteration-lemma algebra,
the Volterra extremal oracle, special-function accuracy, and the
measured lifespan scalings of the finite-difference solver.
"""

import math
import time

import numpy as np
from pytest import approx

from blowuplab.exponents import (
    ModelParams,
    ScatteringParams,
    classify_cor1,
    classify_negmass,
    classify_thm1,
    d_star,
    fujita_exponent,
    gamma_fujita,
    gamma_strauss,
    phase_diagram,
    strauss_exponent,
    transition_threshold,
)
from blowuplab.kato import (
    KatoInput,
    amplification_constant,
    c_tilde,
    closed_form_abc,
    extremal_blowup_time,
    iterate,
    s_infinity,
    s_partial,
    threshold_time,
)
from blowuplab.pdesolver import (
    DataClass,
    DataProfile,
    GridSpec,
    SimConfig,
    SimStatus,
    StoppingSpec,
    ode_blowup_time,
    run,
    sweep,
    verify_identities,
)
from blowuplab.specialfn import bessel_I, bessel_K, phi1, sphere_area, yz_bound_ratio


def _report(num, detail):
    print(f"[criterion {num:2d}] PASS  {detail}")


# -----------------------------------------------------------------------------------


def test_criterion_01_exponent_identities():
    start = time.perf_counter()
    worst_s = 0.0
    for i in range(1, 201):
        nu = 1.0 + 19.0 * i / 200.0
        worst_s = max(worst_s, abs(gamma_strauss(strauss_exponent(nu), nu)))
    worst_f = 0.0
    for i in range(1, 201):
        nu = 20.0 * i / 200.0
        worst_f = max(worst_f, abs(gamma_fujita(fujita_exponent(nu), nu)))
    elapsed = time.perf_counter() - start
    assert worst_s < 1e-9
    assert worst_f < 1e-12
    assert elapsed < 1.0
    _report(1, f"gamma_S at p_S worst {worst_s:.2e}, gamma_F at p_F worst "
               f"{worst_f:.2e}, {elapsed * 1e3:.0f} ms")


def test_criterion_02_triple_coincidence():
    worst = 0.0
    count = 0
    for n in range(1, 6):
        for k in range(0, 11):
            mu1 = 0.5 * k
            if n + mu1 <= 1.0:
                continue
            sd = n - d_star(n + mu1)
            kappa = 0.5 * (mu1 - 1.0 - sd)
            values = (fujita_exponent(n + kappa),
                      strauss_exponent(n + mu1),
                      transition_threshold(n, sd))
            spread = max(values) - min(values)
            worst = max(worst, spread)
            count += 1
    assert worst < 1e-9
    _report(2, f"{count} (n, mu1) pairs, worst spread {worst:.2e}")


def _laws_equal(a, b) -> bool:
    if (a.law is None) != (b.law is None):
        return False
    if a.branch is not b.branch or a.blows_up != b.blows_up:
        return False
    if a.law is None:
        return True
    return (a.law.eps_power == b.law.eps_power
            and a.law.t_exponent == b.law.t_exponent
            and a.law.log_power == b.law.log_power
            and a.law.tag is b.law.tag)


def test_criterion_03_reduction_equivalences():
    mismatches = 0
    count = 0
    for n in (1, 2, 3, 4):
        for i in range(50):
            mu = 6.0 * i / 49.0
            for j in range(50):
                p = 1.0 + 3.0 * (j + 1) / 50.0
                count += 1
                if not _laws_equal(classify_thm1(ModelParams(n, mu, 0.0), p),
                                   classify_cor1(n, mu, p)):
                    mismatches += 1
    assert count == 10_000 and mismatches == 0

    count2 = 0
    mismatches2 = 0
    for n in (1, 2, 3, 4):
        for i in range(10):
            nu1 = 3.0 * i / 9.0
            for j in range(10):
                beta = 1.1 + 1.9 * j / 9.0
                for k in range(25):
                    nu2 = -2.0 + 1.95 * k / 24.0
                    count2 += 1
                    sp = ScatteringParams(n, nu1, nu2, beta)
                    p = 1.0 + 0.12 * (k + 1)
                    equivalent = ModelParams(n, 0.0, sp.effective_mass())
                    if not _laws_equal(classify_negmass(sp, p),
                                       classify_thm1(equivalent, p)):
                        mismatches2 += 1
    assert count2 == 10_000 and mismatches2 == 0
    _report(3, f"thm1==cor1 on {count} points, negmass==thm1 on {count2} points")


def _fig1_side(n, p, mu):
    """Independent region oracle for the mu2 = 0, h > 0 diagrams: heat at or
    below the threshold 2/(n-|mu-1|), wave above while the shifted Strauss
    gamma stays positive, nothing past the critical curves."""
    nu_eff = n - max(1.0 - mu, 0.0)
    denom = n - abs(mu - 1.0)
    heat = denom <= 0.0 or p * denom <= 2.0
    if heat:
        if nu_eff <= 0.0:
            return "heat"
        return "heat" if p < 1.0 + 2.0 / nu_eff else "none"
    return "wave" if gamma_strauss(p, n + mu) > 0.0 else "none"


def _fig3_side(n, p, sd):
    """Same oracle for the undamped family parameterized by sqrt(delta)."""
    heat = (n - sd) <= 0.0 or p * (n - sd) <= 2.0
    if heat:
        shifted = n - 0.5 * (1.0 + sd)
        if shifted <= 0.0:
            return "heat"
        return "heat" if p < 1.0 + 2.0 / shifted else "none"
    return "wave" if gamma_strauss(p, float(n)) > 0.0 else "none"


_SIDE_OF_BRANCH = {"SubWave": "wave", "SubHeat": "heat", "AboveCritical": "none"}


def test_criterion_04_phase_diagram_regions():
    checked = 0
    for n, oracle in ((1, _fig1_side), (2, _fig1_side)):
        diag = phase_diagram(n, "cor1", (1.01, 4.99), (0.0, 5.0), 200)
        for p, mu, branch, _expo, _logp in diag.rows:
            assert branch in _SIDE_OF_BRANCH, (n, p, mu, branch)
            assert _SIDE_OF_BRANCH[branch] == oracle(n, p, mu), (n, p, mu, branch)
            checked += 1
    for n in (1, 2, 3):
        diag = phase_diagram(n, "negmass", (1.01, 4.99), (0.0, 4.0), 200)
        for p, sd, branch, _expo, _logp in diag.rows:
            assert branch in _SIDE_OF_BRANCH, (n, p, sd, branch)
            assert _SIDE_OF_BRANCH[branch] == _fig3_side(n, p, sd), (n, p, sd, branch)
            checked += 1
    assert checked == 5 * 200 * 200
    _report(4, f"{checked} grid points on the analytic side, 0 misclassified")


def test_criterion_05_closed_form_vs_recurrence():
    rng = np.random.default_rng(20260816)
    worst = 0.0
    for _ in range(100):
        inp = KatoInput(p=float(rng.uniform(1.2, 4.0)),
                        a=float(rng.uniform(-2.0, 3.0)),
                        b=float(rng.uniform(-2.0, 3.0)),
                        c=float(rng.uniform(0.0, 2.0)),
                        E=float(rng.uniform(0.01, 0.9)),
                        A=float(rng.uniform(0.5, 2.0)),
                        B=float(rng.uniform(0.5, 2.0)))
        trace = iterate(inp, j_max=25)
        ct = c_tilde(inp)
        log_ea = math.log(inp.E * inp.A)
        for j in range(1, len(trace.a_seq) + 1):
            aj, bj, cj = closed_form_abc(inp, j)
            for got, want in ((trace.a_seq[j - 1], aj), (trace.b_seq[j - 1], bj),
                              (trace.c_seq[j - 1], cj)):
                err = abs(got - want) / max(1.0, abs(want))
                worst = max(worst, err)
            # log D_j >= p^{j-1} (log(EA) - S_j), the divergence engine
            lower = inp.p ** (j - 1) * (log_ea - s_partial(inp.p, ct, j))
            assert trace.logD_seq[j - 1] >= lower - 1e-9 * max(1.0, abs(lower))
        assert not trace.truncated or len(trace.a_seq) >= 10
    assert worst < 1e-10
    _report(5, f"100 random inputs, j <= 25, worst relative gap {worst:.2e}, "
               f"termwise log D_j bound held")


def test_criterion_06_series_limit_and_discrepancy():
    worst = 0.0
    for p in (2.0, 2.5, 3.0, 4.0, 6.0, 10.0):
        for ct in (1e-2, 1.0 / 9.0, 0.5, 1.0, 4.0, 81.0):
            s60 = s_partial(p, ct, 60)
            limit = s_infinity(p, ct)
            worst = max(worst, abs(s60 - limit))
            # the compact printed constant replaces C~^{1/(1-p)} by
            # C~^{p/(1-p)}; the gap is exactly -ln(C~) for every p
            compact = 2.0 * p * math.log(p) / (1.0 - p) ** 2 \
                + p * math.log(ct) / (1.0 - p)
            assert compact - limit == approx(-math.log(ct), abs=1e-10)
    assert worst < 1e-12
    _report(6, f"36 (p, C~) pairs, worst |S_60 - S_inf| {worst:.2e}, "
               f"printed-form gap == -ln C~")


def test_criterion_07_extremal_volterra_scaling():
    start = time.perf_counter()
    inp0 = KatoInput(p=2.0, a=1.0, b=1.0, c=0.0, E=1.0)
    c_amp = amplification_constant(inp0)
    es, times = [], []
    for e in (1e-2, 1e-3, 1e-4, 1e-5):
        inp = KatoInput(p=2.0, a=1.0, b=1.0, c=0.0, E=e)
        blowup, _ = extremal_blowup_time(inp)
        t_tilde = threshold_time(inp)
        assert t_tilde < blowup <= c_amp * t_tilde
        es.append(e)
        times.append(blowup)
    slope = np.polyfit(np.log(es), np.log(times), 1)[0]
    elapsed = time.perf_counter() - start
    assert slope == approx(-0.5, abs=0.05)
    assert elapsed < 60.0
    _report(7, f"slope {slope:.4f}, all blow-ups within C*T~, {elapsed:.1f} s")


def test_criterion_08_special_functions():
    # half-integer orders against the elementary closed forms
    worst_half = 0.0
    for z in (0.1, 0.7, 1.0, 3.0, 10.0, 25.0):
        base_k = math.sqrt(math.pi / (2.0 * z)) * math.exp(-z)
        close_k = {0.5: base_k,
                   1.5: base_k * (1.0 + 1.0 / z),
                   2.5: base_k * (1.0 + 3.0 / z + 3.0 / z ** 2)}
        close_i = {0.5: math.sqrt(2.0 / (math.pi * z)) * math.sinh(z),
                   1.5: math.sqrt(2.0 / (math.pi * z)) * (math.cosh(z) - math.sinh(z) / z)}
        for nu, want in close_k.items():
            worst_half = max(worst_half, abs(bessel_K(nu, z) - want) / want)
        for nu, want in close_i.items():
            worst_half = max(worst_half, abs(bessel_I(nu, z) - want) / abs(want))
    assert worst_half < 1e-10

    # Wronskian I_nu(z) K_{nu+1}(z) + I_{nu+1}(z) K_nu(z) = 1/z
    worst_w = 0.0
    for nu in (0.0, 0.3, 1.0, 2.5, 4.0):
        for z in np.linspace(0.1, 30.0, 40):
            w = bessel_I(nu, z) * bessel_K(nu + 1.0, z) \
                + bessel_I(nu + 1.0, z) * bessel_K(nu, z)
            worst_w = max(worst_w, abs(z * w - 1.0))
    assert worst_w < 1e-8

    # closed phi1 against direct sphere quadrature
    from scipy.integrate import quad

    worst_phi = 0.0
    for n in (2, 3):
        for r in (0.3, 1.0, 2.0, 5.0):
            direct = sphere_area(n - 1) * quad(
                lambda th: math.exp(r * math.cos(th)) * math.sin(th) ** (n - 2),
                0.0, math.pi)[0] if n > 1 else 0.0
            worst_phi = max(worst_phi, abs(phi1(r, n) - direct) / direct)
    assert worst_phi < 1e-8

    # eigenfunction residual shrinks at second order
    def residual(n, h):
        worst = 0.0
        for r in np.linspace(0.5, 3.0, 11):
            lap = (phi1(r + h, n) - 2.0 * phi1(r, n) + phi1(r - h, n)) / h ** 2 \
                + (n - 1) / r * (phi1(r + h, n) - phi1(r - h, n)) / (2.0 * h)
            worst = max(worst, abs(lap - phi1(r, n)) / phi1(r, n))
        return worst

    orders = []
    for n in (2, 3):
        r1, r2 = residual(n, 2e-3), residual(n, 1e-3)
        orders.append(math.log2(r1 / r2))
    assert min(orders) > 1.8
    _report(8, f"half-integer worst {worst_half:.2e}, Wronskian worst {worst_w:.2e}, "
               f"phi1 quadrature worst {worst_phi:.2e}, eigen orders "
               f"{', '.join(f'{o:.2f}' for o in orders)}")


def test_criterion_09_decay_ratio_slopes():
    slopes = {}
    for n in (1, 2, 3):
        ts = np.geomspace(1.0, 100.0, 13)
        ratios = np.array([yz_bound_ratio(n, 2.0, float(t)) for t in ts])
        slope = np.polyfit(np.log(1.0 + ts), np.log(ratios), 1)[0]
        assert abs(slope) <= 0.05, (n, slope)
        slopes[n] = slope
    _report(9, "log-log ratio slopes " +
            ", ".join(f"n={n}: {s:+.4f}" for n, s in slopes.items()))


def _decomposition_config(dr):
    return SimConfig(
        model=ModelParams(n=1, mu1=2.0, mu2=0.0), p=3.0, eps=0.1,
        data=DataProfile(amplitude=1.0, shape="bump", radius=1.0,
                         data_class=DataClass.H_POSITIVE),
        grid=GridSpec(dr=dr, r_max=math.ceil(6.0 / dr + 2) * dr, cfl=0.45),
        stopping=StoppingSpec(blowup_factor=1e12, t_max=5.0))


def test_criterion_10_decomposition_identity():
    start = time.perf_counter()
    residuals = []
    for dr in (1 / 50, 1 / 100, 1 / 200):
        cfg = _decomposition_config(dr)
        report = verify_identities(run(cfg), cfg)
        residuals.append(report.decomposition_residual)
    orders = [math.log2(a / b) for a, b in zip(residuals, residuals[1:])]
    elapsed = time.perf_counter() - start
    assert residuals[-1] < 2e-2
    assert min(orders) >= 1.8
    assert elapsed < 60.0
    _report(10, f"residual {residuals[-1]:.2e} at dr=1/200, orders "
                f"{', '.join(f'{o:.2f}' for o in orders)}, {elapsed:.1f} s")


def _sweep_template(mu1):
    return SimConfig(
        model=ModelParams(n=1, mu1=mu1, mu2=0.0), p=2.0, eps=0.2,
        data=DataProfile(amplitude=2.0, shape="bump", radius=1.0,
                         data_class=DataClass.H_POSITIVE),
        grid=GridSpec(dr=0.02, r_max=10.0, cfl=0.45),
        stopping=StoppingSpec(blowup_factor=1e8, t_max=8.0))


def test_criterion_11_lifespan_sweeps():
    start = time.perf_counter()
    fit_damped = sweep(_sweep_template(2.0), [0.2, 0.1, 0.05, 0.025])
    t_damped = time.perf_counter() - start
    assert fit_damped.all_blew_up
    assert fit_damped.slope == approx(-1.0, abs=0.2)
    assert t_damped < 600.0

    start = time.perf_counter()
    fit_free = sweep(_sweep_template(0.0), [0.2, 0.1, 0.05, 0.025])
    t_free = time.perf_counter() - start
    assert fit_free.all_blew_up
    assert fit_free.slope == approx(-0.5, abs=0.15)
    assert t_free < 600.0
    _report(11, f"damped slope {fit_damped.slope:.4f} (target -1.0+-0.2) in "
                f"{t_damped:.1f} s, free slope {fit_free.slope:.4f} "
                f"(target -0.5+-0.15) in {t_free:.1f} s")


def test_criterion_12_ode_mode_against_quadrature():
    worst = 0.0
    for p in (2.0, 3.0):
        for u0 in (0.5, 1.0):
            for v0 in (0.0, 1.0):
                cfg = SimConfig(
                    model=ModelParams(n=1, mu1=0.0, mu2=0.0), p=p, eps=1.0,
                    data=DataProfile(amplitude=u0, shape="flat", radius=1.0,
                                     data_class=DataClass.H_POSITIVE,
                                     g_amplitude=v0),
                    grid=GridSpec(dr=0.01, r_max=7.0, cfl=0.4),
                    stopping=StoppingSpec(blowup_factor=1e10, t_max=6.0),
                    disable_laplacian=True)
                result = run(cfg)
                assert result.status is SimStatus.BLEW_UP
                oracle = ode_blowup_time(p, u0, v0)
                worst = max(worst, abs(result.T_est - oracle) / oracle)
    assert worst < 1e-2
    _report(12, f"8 (p, u0, v0) points, worst relative gap {worst:.2e}")

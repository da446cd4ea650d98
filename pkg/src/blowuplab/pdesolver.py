"""Radially symmetric finite-difference integration of

    u_tt - Delta u + d(t) u_t + m(t) u = |u|^p,   u(0) = eps f,  u_t(0) = eps g,

with scale-invariant coefficients d = mu1/(1+t), m = mu2/(1+t)^2 or the
scattering pair d = nu1/(1+t)^beta, m = nu2/(1+t)^2 (nu2 < 0), compactly
supported radial data, blow-up time estimation, functional tracking and
identity verification.

Scheme
------
Explicit leapfrog in time with the damping handled by the time-centered
average of u_t (semi-implicit, so the large coefficient near t = 0 never
restricts the step).  Three-level variable-step form: with dt_n = t_+ - t_0,
dt_o = t_0 - t_-,

    u_tt ~ A u_+ - B u_0 + C u_-,    A = 2/(dt_n(dt_n+dt_o)),
                                     B = 2/(dt_n dt_o),
                                     C = 2/(dt_o(dt_n+dt_o)),
    u_t  ~ (u_+ - u_-)/(dt_n + dt_o).

The radial Laplacian is u_rr + (n-1)/r u_r with the even extension at the
origin (Delta u(0) = 2n (u_1 - u_0)/dr^2) and a homogeneous condition at
r_max that finite propagation speed never activates.  The time step obeys
dt <= cfl dr and the growth control dt <= cfl / max(1, sup|u|^{(p-1)/2});
near blow-up the solution gains about one decade of amplitude every
2 ln(10)/((p-1) cfl) steps, so the shrinking step is cheap.

Blow-up detection fits the reciprocal power sup|u| ~ K (T - t)^{-2/(p-1)}
over the last decade of growth: y = sup^{-(p-1)/2} is linear in t and hits
zero at T.  The threshold-halving sensitivity of T is reported.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import quad

from .exponents import (
    LifespanLaw,
    ModelParams,
    NumericalFailureError,
    Regime,
    ScatteringParams,
    UnsupportedRegimeError,
    ValidationError,
    classify_h0,
    classify_negmass,
    classify_thm1,
    derive_scales,
    solve_lifespan,
)
from .specialfn import _log_phi1_grid, sphere_area


class SimStatus(Enum):
    BLEW_UP = "BlewUp"
    REACHED_TMAX = "ReachedTmax"
    NUMERICAL_FAILURE = "NumericalFailure"


class DataClass(Enum):
    H_POSITIVE = "HPositive"
    H_ZERO = "HZero"


_SHAPES = ("bump", "quartic", "flat")


@dataclass(frozen=True)
class DataProfile:
    """Radial data profile: u(0) = eps * amplitude * shape(r/R) and
    u_t(0) = eps * g with g fixed by the data class (g = f for HPositive,
    g = -((mu1 - 1 + sqrt(delta))/2) f for HZero).

    g_amplitude is a calibration knob for detector tests: when set, it
    replaces the class rule by g = g_amplitude * shape(r/R).
    """

    amplitude: float = 1.0
    shape: str = "bump"
    radius: float = 1.0
    data_class: DataClass = DataClass.H_POSITIVE
    g_amplitude: Optional[float] = None

    def __post_init__(self):
        if self.amplitude <= 0:
            raise ValidationError(f"amplitude must be positive, got {self.amplitude}")
        if self.shape not in _SHAPES:
            raise ValidationError(f"unknown shape {self.shape!r}; choose from {_SHAPES}")
        if self.radius < 1.0:
            raise ValidationError(f"support radius must be >= 1, got {self.radius}")


@dataclass(frozen=True)
class GridSpec:
    dr: float = 0.01
    r_max: float = 10.0
    cfl: float = 0.5

    def __post_init__(self):
        if self.dr <= 0:
            raise ValidationError(f"dr must be positive, got {self.dr}")
        if not (0.0 < self.cfl < 1.0):
            raise ValidationError(f"cfl must lie in (0,1), got {self.cfl}")
        ncells = self.r_max / self.dr
        if abs(ncells - round(ncells)) > 1e-9 * max(1.0, ncells):
            raise ValidationError(f"dr={self.dr} must divide r_max={self.r_max}")


@dataclass(frozen=True)
class StoppingSpec:
    blowup_factor: float = 1e12
    t_max: float = 10.0

    def __post_init__(self):
        if self.blowup_factor <= 1:
            raise ValidationError(f"blowup_factor must exceed 1, got {self.blowup_factor}")
        if self.t_max <= 0:
            raise ValidationError(f"t_max must be positive, got {self.t_max}")


@dataclass(frozen=True)
class SimConfig:
    model: Union[ModelParams, ScatteringParams]
    p: float
    eps: float
    data: DataProfile = field(default_factory=DataProfile)
    grid: GridSpec = field(default_factory=GridSpec)
    stopping: StoppingSpec = field(default_factory=StoppingSpec)
    # testing knobs: decouple the detector and the linear scheme
    disable_laplacian: bool = False
    include_nonlinearity: bool = True

    def __post_init__(self):
        if self.p <= 1.0:
            raise ValidationError(f"nonlinearity exponent must exceed 1, got {self.p}")
        if self.eps < 0:
            raise ValidationError(f"eps must be nonnegative, got {self.eps}")
        if self.grid.r_max < self.stopping.t_max + self.data.radius:
            raise ValidationError(
                "grid must contain the light cone: r_max >= t_max + R "
                f"(got {self.grid.r_max} < {self.stopping.t_max} + {self.data.radius})")

    @property
    def dim(self) -> int:
        return self.model.n if isinstance(self.model, ModelParams) else self.model.n


def _coefficients(model) -> tuple:
    """(damping d(t), mass m(t)) for either model family."""
    if isinstance(model, ModelParams):
        mu1, mu2 = model.mu1, model.mu2

        def damping(t: float) -> float:
            return mu1 / (1.0 + t)

        def mass(t: float) -> float:
            return mu2 / (1.0 + t) ** 2
    else:
        nu1, nu2, beta = model.nu1, model.nu2, model.beta

        def damping(t: float) -> float:
            return nu1 / (1.0 + t) ** beta

        def mass(t: float) -> float:
            return nu2 / (1.0 + t) ** 2
    return damping, mass


def _h_coefficient(model) -> float:
    """(mu1 - 1 + sqrt(delta))/2, the f-weight in h; scattering uses its
    effective discriminant with mu1 = 0."""
    if isinstance(model, ModelParams):
        delta = (model.mu1 - 1.0) ** 2 - 4.0 * model.mu2
        if delta < 0:
            raise UnsupportedRegimeError(
                f"data classes require delta >= 0, got delta = {delta}")
        return 0.5 * (model.mu1 - 1.0 + math.sqrt(delta))
    delta = 1.0 - 4.0 * model.effective_mass()
    return 0.5 * (-1.0 + math.sqrt(delta))


@dataclass
class InitialData:
    r: np.ndarray
    f: np.ndarray
    g: np.ndarray
    weights: np.ndarray        # |S^{n-1}| r^{n-1} trapezoid weights
    phi1_values: np.ndarray
    integral_f: float
    integral_g: float
    integral_f_phi1: float
    integral_h: float
    integral_h_phi1: float


def _shape_values(shape: str, r: np.ndarray, radius: float) -> np.ndarray:
    s = r / radius
    inside = s < 1.0
    out = np.zeros_like(r)
    if shape == "bump":
        su = s[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - su * su))
    elif shape == "quartic":
        su = s[inside]
        out[inside] = (1.0 - su * su) ** 4
    else:  # flat
        out[r <= radius] = 1.0
    return out


def make_initial_data(config: SimConfig) -> InitialData:
    """Discretize f and g on the radial grid and compute the data integrals.

    The integral sign conditions behind the data classes are asserted:
    HPositive needs int h > 0 and int h phi1 > 0 (with int f, int f phi1
    >= 0); HZero makes both h integrals vanish identically.
    """
    n = config.dim
    grid = config.grid
    npts = int(round(grid.r_max / grid.dr))
    r = np.linspace(0.0, grid.r_max, npts + 1)
    f = config.data.amplitude * _shape_values(config.data.shape, r, config.data.radius)
    coef = _h_coefficient(config.model)
    if config.data.g_amplitude is not None:
        g = config.data.g_amplitude * _shape_values(config.data.shape, r,
                                                    config.data.radius)
    elif config.data.data_class is DataClass.H_POSITIVE:
        g = f.copy()
    else:
        g = -coef * f
    w = np.full(npts + 1, grid.dr)
    w[0] = w[-1] = 0.5 * grid.dr
    if n > 1:
        w = w * r ** (n - 1)
    w *= sphere_area(n)
    phi_vals = np.exp(_log_phi1_grid(r, n))
    h = coef * f + g
    data = InitialData(
        r=r, f=f, g=g, weights=w, phi1_values=phi_vals,
        integral_f=float(np.dot(w, f)),
        integral_g=float(np.dot(w, g)),
        integral_f_phi1=float(np.dot(w, f * phi_vals)),
        integral_h=float(np.dot(w, h)),
        integral_h_phi1=float(np.dot(w, h * phi_vals)),
    )
    if config.data.g_amplitude is None:
        scale = max(float(np.dot(w, np.abs(f))), 1e-300)
        if config.data.data_class is DataClass.H_POSITIVE:
            if not (data.integral_f >= 0 and data.integral_f_phi1 >= 0
                    and data.integral_h > 0 and data.integral_h_phi1 > 0):
                raise ValidationError("HPositive data failed its sign conditions")
        else:
            if abs(data.integral_h) > 1e-10 * scale \
                    or abs(data.integral_h_phi1) > 1e-10 * scale * float(np.max(phi_vals)):
                raise ValidationError("HZero data failed to cancel h")
    return data


@dataclass
class FieldState:
    """Two time levels of the field plus step bookkeeping."""

    t_prev: float
    t_cur: float
    u_prev: np.ndarray
    u_cur: np.ndarray
    dt_prev: float


def _laplacian(u: np.ndarray, r: np.ndarray, dr: float, n: int,
               disabled: bool) -> np.ndarray:
    if disabled:
        return np.zeros_like(u)
    lap = np.zeros_like(u)
    lap[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dr ** 2
    if n > 1:
        lap[1:-1] += (n - 1) / r[1:-1] * (u[2:] - u[:-2]) / (2.0 * dr)
    lap[0] = 2.0 * n * (u[1] - u[0]) / dr ** 2
    lap[-1] = 0.0  # pinned boundary, outside the light cone by construction
    return lap


def _next_dt(config: SimConfig, sup: float) -> float:
    growth_cap = config.grid.cfl / max(1.0, sup ** (0.5 * (config.p - 1.0)))
    return min(config.grid.cfl * config.grid.dr, growth_cap)


def initial_state(config: SimConfig, data: Optional[InitialData] = None) -> FieldState:
    """Taylor startup: one second-order step off the data."""
    if data is None:
        data = make_initial_data(config)
    damping, mass = _coefficients(config.model)
    u0 = config.eps * data.f
    v0 = config.eps * data.g
    sup = float(np.max(np.abs(u0)))
    dt0 = _next_dt(config, sup)
    lap = _laplacian(u0, data.r, config.grid.dr, config.dim, config.disable_laplacian)
    source = np.abs(u0) ** config.p if config.include_nonlinearity else 0.0
    accel = lap - damping(0.0) * v0 - mass(0.0) * u0 + source
    u1 = u0 + dt0 * v0 + 0.5 * dt0 * dt0 * accel
    u1[-1] = 0.0
    return FieldState(t_prev=0.0, t_cur=dt0, u_prev=u0, u_cur=u1, dt_prev=dt0)


def step(state: FieldState, config: SimConfig,
         data: Optional[InitialData] = None) -> FieldState:
    """One leapfrog update; the new step size follows the growth control."""
    if data is None:
        data = make_initial_data(config)
    damping, mass = _coefficients(config.model)
    sup = float(np.max(np.abs(state.u_cur)))
    dt_new = _next_dt(config, sup)
    dt_old = state.dt_prev
    a = 2.0 / (dt_new * (dt_new + dt_old))
    b = 2.0 / (dt_new * dt_old)
    c = 2.0 / (dt_old * (dt_new + dt_old))
    t0 = state.t_cur
    d0 = damping(t0)
    m0 = mass(t0)
    lap = _laplacian(state.u_cur, data.r, config.grid.dr, config.dim,
                     config.disable_laplacian)
    source = np.abs(state.u_cur) ** config.p if config.include_nonlinearity else 0.0
    dsum = dt_new + dt_old
    rhs = (b - m0) * state.u_cur - c * state.u_prev \
        + (d0 / dsum) * state.u_prev + lap + source
    u_next = rhs / (a + d0 / dsum)
    u_next[-1] = 0.0
    if not np.all(np.isfinite(u_next)):
        raise NumericalFailureError(f"field lost finiteness at t = {t0}")
    return FieldState(t_prev=t0, t_cur=t0 + dt_new,
                      u_prev=state.u_cur, u_cur=u_next, dt_prev=dt_new)


def track_functionals(u: np.ndarray, t: float, data: InitialData, p: float) -> tuple:
    """(F0, F1, sup, N, N_psi): the two averaged functionals, the sup norm,
    and the nonlinear integrals int |u|^p and int |u|^p psi1.  Fixed-order
    dot products keep the run bit-deterministic."""
    absu = np.abs(u)
    powu = absu ** p
    f0 = float(np.dot(data.weights, u))
    f1 = math.exp(-t) * float(np.dot(data.weights, u * data.phi1_values))
    npsi = math.exp(-t) * float(np.dot(data.weights, powu * data.phi1_values))
    return f0, f1, float(np.max(absu)), float(np.dot(data.weights, powu)), npsi


@dataclass
class SimResult:
    status: SimStatus
    t: np.ndarray
    F0: np.ndarray
    F1: np.ndarray
    supnorm: np.ndarray
    nlp: np.ndarray
    nlp_psi: np.ndarray
    T_est: Optional[float]
    diagnostics: dict


def _fit_blowup_time(ts: np.ndarray, sups: np.ndarray, p: float,
                     ceiling: float) -> Optional[float]:
    """Zero crossing of the linear fit to sup^{-(p-1)/2} over the last
    decade of growth below the ceiling."""
    mask = (sups <= ceiling) & (sups >= ceiling / 10.0)
    if int(np.count_nonzero(mask)) < 3:
        return None
    x = ts[mask]
    y = sups[mask] ** (-0.5 * (p - 1.0))
    slope, intercept = np.polyfit(x, y, 1)
    if slope >= 0:
        return None
    return float(-intercept / slope)


def detect_blowup(result_t: np.ndarray, result_sup: np.ndarray,
                  config: SimConfig) -> tuple:
    """(status, T_est, sensitivity) from a sup-norm history.

    BlewUp requires growth by blowup_factor over the initial sup; T_est
    extrapolates sup ~ K (T - t)^{-2/(p-1)}.  Sensitivity is the relative
    move of T_est when the threshold is halved.
    """
    sup0 = float(result_sup[0])
    peak = float(np.max(result_sup))
    if sup0 <= 0 or peak < config.stopping.blowup_factor * sup0:
        return SimStatus.REACHED_TMAX, None, None
    t_est = _fit_blowup_time(result_t, result_sup, config.p, peak)
    if t_est is None or t_est <= float(result_t[-1]):
        raise NumericalFailureError("blow-up extrapolation failed to converge")
    t_half = _fit_blowup_time(result_t, result_sup, config.p, 0.5 * peak)
    sens = abs(t_est - t_half) / t_est if t_half is not None else math.inf
    return SimStatus.BLEW_UP, t_est, sens


def run(config: SimConfig) -> SimResult:
    """Integrate until blow-up threshold, t_max, or numerical failure.
    Deterministic: identical configs give bit-identical series."""
    data = make_initial_data(config)
    u0 = config.eps * data.f
    ts, f0s, f1s, sups, nls, npsis = [], [], [], [], [], []

    def record(u: np.ndarray, t: float) -> float:
        f0, f1, sup, nl, npsi = track_functionals(u, t, data, config.p)
        ts.append(t)
        f0s.append(f0)
        f1s.append(f1)
        sups.append(sup)
        nls.append(nl)
        npsis.append(npsi)
        return sup

    sup0 = record(u0, 0.0)
    threshold = config.stopping.blowup_factor * sup0 if sup0 > 0 else math.inf
    status = SimStatus.REACHED_TMAX
    diagnostics: dict = {}
    try:
        state = initial_state(config, data)
        sup = record(state.u_cur, state.t_cur)
        while state.t_cur < config.stopping.t_max:
            if sup >= threshold:
                break
            state = step(state, config, data)
            sup = record(state.u_cur, state.t_cur)
    except NumericalFailureError as exc:
        diagnostics["failure"] = str(exc)
        status = SimStatus.NUMERICAL_FAILURE
    arr_t = np.array(ts)
    arr_sup = np.array(sups)
    t_est = None
    if status is not SimStatus.NUMERICAL_FAILURE:
        status, t_est, sens = detect_blowup(arr_t, arr_sup, config)
        if sens is not None:
            diagnostics["threshold_sensitivity"] = sens
    diagnostics["steps"] = len(ts) - 1
    diagnostics["final_time"] = float(arr_t[-1])
    return SimResult(status=status, t=arr_t, F0=np.array(f0s), F1=np.array(f1s),
                     supnorm=arr_sup, nlp=np.array(nls), nlp_psi=np.array(npsis),
                     T_est=t_est, diagnostics=diagnostics)


# --- classifier bridge --------------------------------------------------------

def classify_regime(config: SimConfig) -> Regime:
    """Lifespan regime predicted for this configuration by the matching
    classifier (data class selects the h > 0 or h = 0 family)."""
    if isinstance(config.model, ScatteringParams):
        if config.data.data_class is DataClass.H_ZERO:
            raise ValidationError(
                "no lifespan prediction for the h = 0 class under scattering damping")
        return classify_negmass(config.model, config.p)
    if config.data.data_class is DataClass.H_POSITIVE:
        return classify_thm1(config.model, config.p, h_positive=True)
    return classify_h0(config.model, config.p)


def predicted_tmax(config: SimConfig, safety: float = 4.0) -> float:
    """safety x the classifier lifespan, the budget rule for sweeps."""
    regime = classify_regime(config)
    if not regime.blows_up:
        raise ValidationError(f"no blow-up predicted at p = {config.p}")
    return safety * solve_lifespan(regime.law, config.eps)


# --- identity verification ----------------------------------------------------

def _nonuniform_d1(ts: np.ndarray, fs: np.ndarray) -> np.ndarray:
    dtn = ts[2:] - ts[1:-1]
    dto = ts[1:-1] - ts[:-2]
    return (fs[2:] * dto / dtn - fs[:-2] * dtn / dto
            + fs[1:-1] * (dtn / dto - dto / dtn)) / (dtn + dto)


def _nonuniform_d2(ts: np.ndarray, fs: np.ndarray) -> np.ndarray:
    dtn = ts[2:] - ts[1:-1]
    dto = ts[1:-1] - ts[:-2]
    a = 2.0 / (dtn * (dtn + dto))
    b = 2.0 / (dtn * dto)
    c = 2.0 / (dto * (dtn + dto))
    return a * fs[2:] - b * fs[1:-1] + c * fs[:-2]


def _cumtrapz(ts: np.ndarray, fs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(fs)
    out[1:] = np.cumsum(0.5 * (fs[1:] + fs[:-1]) * np.diff(ts))
    return out


@dataclass
class IdentityReport:
    """Relative sup-norm residuals of the averaged-dynamics identities.

    ode_residual: the second-order equation for F0 against int |u|^p.
    decomposition_residual: F0 against its homogeneous-plus-memory split
        (None when the model's discriminant is negative or scattering).
    weighted_residual: the damped equation for F1 against int |u|^p psi1.
    l_positive_onset: first time from which the homogeneous part stays
        positive (None if it never does or the split is unavailable).
    """

    ode_residual: float
    decomposition_residual: Optional[float]
    weighted_residual: float
    l_positive_onset: Optional[float]


def verify_identities(result: SimResult, config: SimConfig) -> IdentityReport:
    damping, mass = _coefficients(config.model)
    ts, F0, F1 = result.t, result.F0, result.F1
    if len(ts) < 5:
        raise ValidationError("series too short to verify identities")
    tm = ts[1:-1]
    dvals = np.array([damping(t) for t in tm])
    mvals = np.array([mass(t) for t in tm])

    res0 = _nonuniform_d2(ts, F0) + dvals * _nonuniform_d1(ts, F0) \
        + mvals * F0[1:-1] - result.nlp[1:-1]
    scale0 = float(np.max(np.abs(result.nlp))) + float(np.max(np.abs(_nonuniform_d2(ts, F0))))
    ode_residual = float(np.max(np.abs(res0))) / max(scale0, 1e-300)

    res1 = _nonuniform_d2(ts, F1) + (2.0 + dvals) * _nonuniform_d1(ts, F1) \
        + (dvals + mvals) * F1[1:-1] - result.nlp_psi[1:-1]
    scale1 = float(np.max(np.abs(result.nlp_psi))) \
        + float(np.max(np.abs(_nonuniform_d2(ts, F1)))) \
        + float(np.max(np.abs(2.0 * _nonuniform_d1(ts, F1))))
    weighted_residual = float(np.max(np.abs(res1))) / max(scale1, 1e-300)

    decomposition_residual = None
    onset = None
    if isinstance(config.model, ModelParams):
        delta = (config.model.mu1 - 1.0) ** 2 - 4.0 * config.model.mu2
        if delta >= 0:
            scales = derive_scales(config.model)
            kappa, lam = scales.kappa, scales.lam
            sd = scales.sqrt_delta
            data = make_initial_data(config)
            f0_init = config.eps * data.integral_f
            fp_init = config.eps * data.integral_g
            opt = 1.0 + ts
            if sd > 0:
                growth = (1.0 - opt ** (-sd)) / sd
            else:
                growth = np.log(opt)
            L = opt ** (-kappa) * (f0_init + (kappa * f0_init + fp_init) * growth)
            inner = _cumtrapz(ts, opt ** (kappa + lam) * result.nlp)
            M = opt ** (-kappa) * _cumtrapz(ts, opt ** (-lam) * inner)
            resid = F0 - (L + M)
            decomposition_residual = float(np.max(np.abs(resid))) \
                / max(float(np.max(np.abs(F0))), 1e-300)
            positive = L > 0
            if positive[-1]:
                idx = len(L) - 1
                while idx > 0 and positive[idx - 1]:
                    idx -= 1
                onset = float(ts[idx])
    return IdentityReport(ode_residual, decomposition_residual,
                          weighted_residual, onset)


# --- blow-up ODE oracle ---------------------------------------------------------

def ode_blowup_time(p: float, u0: float, v0: float) -> float:
    """Blow-up time of u'' = u^p, u(0) = u0 > 0, u'(0) = v0 >= 0, by the
    energy quadrature T = int_{u0}^inf du / sqrt(v0^2 + 2(u^{p+1}-u0^{p+1})/(p+1)),
    regularized by u = u0 + w^2."""
    if p <= 1.0:
        raise ValidationError(f"need p > 1, got {p}")
    if u0 <= 0 or v0 < 0:
        raise ValidationError("need u0 > 0 and v0 >= 0")

    def integrand(w: float) -> float:
        u = u0 + w * w
        return 2.0 * w / math.sqrt(v0 * v0 + 2.0 * (u ** (p + 1.0) - u0 ** (p + 1.0)) / (p + 1.0))

    value, err = quad(integrand, 0.0, np.inf, limit=200)
    if not math.isfinite(value) or err > 1e-6 * value:
        raise NumericalFailureError("blow-up quadrature did not converge")
    return value


# --- eps sweeps -----------------------------------------------------------------

@dataclass
class SweepFit:
    eps_list: list
    T_list: list
    slope: float
    stderr: float
    predicted_exponent: float
    law: LifespanLaw
    passed: bool
    all_blew_up: bool
    statuses: list


def thread_budget(requested: Optional[int] = None) -> int:
    if requested is not None and requested >= 1:
        return requested
    env = os.environ.get("BLOWUPLAB_THREADS", "")
    if env.isdigit() and int(env) >= 1:
        return int(env)
    return min(4, os.cpu_count() or 1)


def sweep(template: SimConfig, eps_list, tolerance: float = 0.2,
          threads: Optional[int] = None) -> SweepFit:
    """Run the template at each eps (geometric grid, >= 4 points, given in
    decreasing order), fit ln T against ln eps, and compare the slope with
    the classifier prediction.

    Each run gets t_max = 4 x its predicted lifespan and a grid wide enough
    for its light cone.  Runs are independent and execute on a small thread
    pool (capped by BLOWUPLAB_THREADS or the threads argument); results
    aggregate in eps order regardless of completion order.
    """
    eps_arr = [float(e) for e in eps_list]
    if len(eps_arr) < 4:
        raise ValidationError("sweep needs at least 4 eps values")
    if any(b >= a for a, b in zip(eps_arr, eps_arr[1:])):
        raise ValidationError("eps grid must be strictly decreasing")
    ratios = [a / b for a, b in zip(eps_arr, eps_arr[1:])]
    if any(abs(q - ratios[0]) > 1e-9 * ratios[0] for q in ratios):
        raise ValidationError("eps grid must be geometric")
    regime = classify_regime(template)
    if not regime.blows_up:
        raise ValidationError(f"no blow-up predicted at p = {template.p}")

    def one(eps: float) -> SimResult:
        t_cap = 4.0 * solve_lifespan(regime.law, eps)
        r_needed = t_cap + template.data.radius
        ncells = int(math.ceil(r_needed / template.grid.dr))
        grid = GridSpec(dr=template.grid.dr, r_max=ncells * template.grid.dr,
                        cfl=template.grid.cfl)
        cfg = SimConfig(model=template.model, p=template.p, eps=eps,
                        data=template.data, grid=grid,
                        stopping=StoppingSpec(template.stopping.blowup_factor, t_cap),
                        disable_laplacian=template.disable_laplacian,
                        include_nonlinearity=template.include_nonlinearity)
        return run(cfg)

    with ThreadPoolExecutor(max_workers=thread_budget(threads)) as pool:
        results = list(pool.map(one, eps_arr))

    statuses = [res.status.value for res in results]
    t_list = [res.T_est for res in results]
    pairs = [(e, res.T_est) for e, res in zip(eps_arr, results)
             if res.status is SimStatus.BLEW_UP]
    all_blew_up = len(pairs) == len(eps_arr)
    if len(pairs) < 2:
        raise NumericalFailureError(f"too few blow-ups to fit: statuses {statuses}")
    xs = np.log([e for e, _ in pairs])
    ys = np.log([t for _, t in pairs])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    dof = max(len(pairs) - 2, 1)
    sx = float(np.sum((xs - np.mean(xs)) ** 2))
    stderr = math.sqrt(float(np.sum(resid ** 2)) / dof / sx) if sx > 0 else math.inf
    predicted = regime.law.eps_exponent()
    if regime.law.log_power == 0.0:
        ok = abs(slope + predicted) <= tolerance
    else:
        # log-corrected law: the combination eps^alpha T^beta ln^c(1+T)
        # should be constant across the sweep
        ks = [regime.law.eps_power * math.log(e)
              + regime.law.t_exponent * math.log(t)
              + regime.law.log_power * math.log(math.log1p(t))
              for e, t in pairs]
        ok = (max(ks) - min(ks)) <= tolerance * max(1.0, abs(np.mean(ks)))
    passed = bool(ok and all_blew_up)
    return SweepFit(eps_list=eps_arr, T_list=t_list,
                    slope=float(slope), stderr=stderr,
                    predicted_exponent=predicted, law=regime.law,
                    passed=passed, all_blew_up=all_blew_up, statuses=statuses)

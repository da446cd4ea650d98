"""Critical exponents, derived scales, and blow-up regime classification.

The model is the radially symmetric semilinear wave equation with
scale-invariant damping mu1/(1+t) u_t and mass mu2/(1+t)^2 u, nonlinearity
|u|^p, and data of size eps.  Everything here is closed-form bookkeeping:
shifted Fujita and Strauss exponents, the discriminant delta, the lifespan
laws attached to each regime, and the phase diagrams in the (p, mu) and
(p, sqrt(delta)) planes.

Conventions
-----------
* Extended reals use math.inf directly; comparisons against it are total.
* A lifespan law is stored normalized as eps^alpha * T^beta * ln(1+T)^c = 1
  with alpha > 0, beta > 0, c >= 0, so T = eps^(-alpha/beta) when c = 0.
* sgn(delta) is evaluated with an absolute tolerance on delta, since the
  log-improved laws switch exactly at delta = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

INF = math.inf

# delta within this window counts as zero for log-power selection
SGN_TOL = 1e-12


class ValidationError(ValueError):
    """Inputs outside the contract of an operation."""


class UnsupportedRegimeError(ValidationError):
    """Parameter combinations the theory does not cover (e.g. delta < 0)."""


class NumericalFailureError(RuntimeError):
    """A numerical routine failed to converge or produced non-finite values."""


class Branch(Enum):
    SUB_WAVE = "SubWave"
    SUB_HEAT = "SubHeat"
    TRANSITION = "Transition"
    SUB_MIXED = "SubMixed"
    IMPROVED_1D = "Improved1D"
    ABOVE_CRITICAL = "AboveCritical"


class LawTag(Enum):
    WAVE_LIKE = "WaveLike"
    HEAT_LIKE = "HeatLike"
    LOG_IMPROVED = "LogImproved"
    MIXED_TYPE = "MixedType"


@dataclass(frozen=True)
class ModelParams:
    """Dimension and damping/mass coefficients of the scale-invariant model."""

    n: int
    mu1: float
    mu2: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"space dimension must be a positive integer, got {self.n!r}")


@dataclass(frozen=True)
class ScatteringParams:
    """Coefficients for the scattering-producing damping nu1/(1+t)^beta u_t
    with negative mass nu2/(1+t)^2 u, beta > 1."""

    n: int
    nu1: float
    nu2: float
    beta: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"space dimension must be a positive integer, got {self.n!r}")
        if self.beta <= 1:
            raise ValidationError(f"scattering range requires beta > 1, got {self.beta}")
        if self.nu1 < 0:
            raise ValidationError(f"nu1 must be nonnegative, got {self.nu1}")
        if self.nu2 >= 0:
            raise ValidationError(f"negative mass requires nu2 < 0, got {self.nu2}")

    def effective_mass(self) -> float:
        """The constant mu2-equivalent nu2 * exp(nu1 / (1 - beta))."""
        return self.nu2 * math.exp(self.nu1 / (1.0 - self.beta))


@dataclass(frozen=True)
class LifespanLaw:
    """Upper lifespan bound in normalized form eps^a * T^b * ln(1+T)^c = 1."""

    eps_power: float
    t_exponent: float
    log_power: float
    tag: LawTag

    def eps_exponent(self) -> float:
        """Magnitude of the pure-power rate: T ~ eps^(-eps_exponent) when c=0."""
        return self.eps_power / self.t_exponent


@dataclass(frozen=True)
class Regime:
    """Outcome of a classification: branch taken and the lifespan law."""

    blows_up: bool
    p_crit: float
    branch: Branch
    law: Optional[LifespanLaw]
    q: Optional[float] = None


@dataclass(frozen=True)
class DerivedScales:
    """Scales derived from (n, mu1, mu2); Bessel-order and shift bookkeeping.

    kappa, lam, p_star, r_star are None when delta < 0 (they would be
    complex); everything else is always populated.
    """

    delta: float
    sqrt_delta: Optional[float]
    kappa: Optional[float]
    lam: Optional[float]
    d_star: float
    mu_star: float
    theta: float
    p_star: Optional[float]
    r_star: Optional[float]


def pos_part(x: float) -> float:
    """[x]_+ = (|x| + x) / 2."""
    return (abs(x) + x) / 2.0


def neg_part(x: float) -> float:
    """[x]_- = (|x| - x) / 2."""
    return (abs(x) - x) / 2.0


def sgn(x: float, tol: float = SGN_TOL) -> int:
    """Sign with a dead zone: 0 for |x| <= tol."""
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1


def fujita_exponent(nu: float) -> float:
    """Shifted Fujita exponent p_F(nu) = 1 + 2/nu, +inf for nu <= 0."""
    if nu <= 0:
        return INF
    return 1.0 + 2.0 / nu


def strauss_exponent(nu: float) -> float:
    """Shifted Strauss exponent: positive root of gamma_strauss(p, nu).

    For nu <= 1 the quadratic has no positive root beyond p = 1 and the
    exponent is +inf.
    """
    if nu <= 1:
        return INF
    return (nu + 1.0 + math.sqrt(nu * nu + 10.0 * nu - 7.0)) / (2.0 * (nu - 1.0))


def gamma_fujita(p: float, nu: float) -> float:
    """gamma_F(p, nu) = 2 - nu (p - 1); positive iff p < p_F(nu)."""
    return 2.0 - nu * (p - 1.0)


def gamma_strauss(p: float, nu: float) -> float:
    """gamma_S(p, nu) = 2 + (nu + 1) p - (nu - 1) p^2; positive iff p < p_S(nu)."""
    return 2.0 + (nu + 1.0) * p - (nu - 1.0) * p * p


def d_star(nu: float) -> float:
    """Distance d_*(nu) in [0, 2): where the Strauss and shifted Fujita
    thresholds meet.  Zero for nu <= 1."""
    if nu <= 1:
        return 0.0
    return (-1.0 - nu + math.sqrt(nu * nu + 10.0 * nu - 7.0)) / 2.0


def mu_star(n: int) -> float:
    """Damping size mu_*(n) = (n^2 + n + 2) / (n + 2) separating wave-type
    and heat-type criticality in the mass-free model."""
    return (n * n + n + 2.0) / (n + 2.0)


def theta_exponent(mu1: float) -> float:
    """theta(mu1) = 1 + mu1/2 - sqrt(mu1^2 + 16)/2, in (-1, 1)."""
    return 1.0 + mu1 / 2.0 - math.sqrt(mu1 * mu1 + 16.0) / 2.0


def transition_threshold(n: float, sqrt_delta: float) -> float:
    """Heat/wave switch point 2 / (n - sqrt(delta)).

    A nonpositive denominator means the heat side covers every p below the
    critical exponent, so the threshold is +inf.
    """
    den = n - sqrt_delta
    if den <= 0:
        return INF
    return 2.0 / den


def p_star(n: int, mu1: float, sqrt_delta: float) -> float:
    """Border p_* = 1 + (n - sqrt(delta) + 2)/(n + mu1 - 1) between the
    wave-type and mixed-type laws for vanishing-average data; +inf when
    n + mu1 = 1."""
    den = n + mu1 - 1.0
    if den == 0:
        return INF
    return 1.0 + (n - sqrt_delta + 2.0) / den


def r_star(mu1: float, delta: float) -> float:
    """1-D improvement threshold r_*(mu1, delta) for 0 <= delta < 1."""
    if delta < 0:
        raise UnsupportedRegimeError(f"r_star needs delta >= 0, got {delta}")
    sd = math.sqrt(delta)
    th = theta_exponent(mu1)
    if sd < th:
        return 1.0 + 2.0 * (2.0 - sd) / (1.0 + mu1 + sd)
    if sd == th:
        return 2.0 / (1.0 + th)
    return 2.0 / (1.0 + sd)


def derive_scales(params: ModelParams) -> DerivedScales:
    """Compute delta and every derived scale for a parameter set."""
    n, mu1, mu2 = params.n, params.mu1, params.mu2
    delta = (mu1 - 1.0) ** 2 - 4.0 * mu2
    ds = d_star(n + mu1)
    ms = mu_star(n)
    th = theta_exponent(mu1)
    if delta < 0:
        return DerivedScales(delta, None, None, None, ds, ms, th, None, None)
    sd = math.sqrt(delta)
    kappa = (mu1 - 1.0 - sd) / 2.0
    lam = 1.0 + sd
    return DerivedScales(
        delta=delta,
        sqrt_delta=sd,
        kappa=kappa,
        lam=lam,
        d_star=ds,
        mu_star=ms,
        theta=th,
        p_star=p_star(n, mu1, sd),
        r_star=r_star(mu1, delta),
    )


def critical_exponent_thm1(n: int, mu1: float, delta: float) -> float:
    """Critical exponent max{p_F(n + kappa), p_S(n + mu1)} for delta >= 0.

    Equals p_S(n + mu1) when sqrt(delta) <= n - d_star(n + mu1), equals
    p_F(n + kappa) in the band n - d_star < sqrt(delta) < 2n + mu1 - 1,
    and is +inf at or beyond that band (or when n + mu1 <= 1).
    """
    if delta < 0:
        raise UnsupportedRegimeError(f"classification requires delta >= 0, got delta = {delta}")
    sd = math.sqrt(delta)
    kappa = (mu1 - 1.0 - sd) / 2.0
    return max(fujita_exponent(n + kappa), strauss_exponent(n + mu1))


# --- law constructors -------------------------------------------------------
# All classifiers build laws through these three helpers so that regimes that
# must agree (general model vs. its mass-free reduction) agree bitwise.

def _wave_law(p: float, nu: float) -> LifespanLaw:
    # eps^p T^{gamma_S/(2(p-1))} = 1
    return LifespanLaw(p, gamma_strauss(p, nu) / (2.0 * (p - 1.0)), 0.0, LawTag.WAVE_LIKE)


def _heat_law(p: float, nu_eff: float, log_power: float) -> LifespanLaw:
    # eps T^{gamma_F/(p-1)} ln(1+T)^c = 1
    tag = LawTag.LOG_IMPROVED if log_power > 0 else LawTag.HEAT_LIKE
    return LifespanLaw(1.0, gamma_fujita(p, nu_eff) / (p - 1.0), log_power, tag)


def _sigma_law(p: float, nu_eff: float, log_power: float) -> LifespanLaw:
    # eps^p T^{gamma_F/(p-1)} ln(1+T)^c = 1
    tag = LawTag.LOG_IMPROVED if log_power > 0 else LawTag.MIXED_TYPE
    return LifespanLaw(p, gamma_fujita(p, nu_eff) / (p - 1.0), log_power, tag)


def _q_value(n: int, mu1: float, kappa: float, p: float) -> float:
    return kappa - (n + mu1 - 1.0) * p / 2.0 + n + 1.0


def _validate_p(p: float) -> None:
    if not (p > 1.0) or not math.isfinite(p):
        raise ValidationError(f"nonlinearity exponent must satisfy p > 1, got {p}")


def classify_thm1(params: ModelParams, p: float, h_positive: bool = True) -> Regime:
    """Classify the blow-up regime for data with positive weighted average
    h = (mu1 - 1 + sqrt(delta))/2 f + g > 0 and f >= 0.

    Requires delta >= 0.  Use :func:`classify_h0` for the h = 0 data class.
    """
    _validate_p(p)
    if not h_positive:
        raise ValidationError("h_positive=False is the vanishing-average class; use classify_h0")
    n, mu1 = params.n, params.mu1
    scales = derive_scales(params)
    if scales.sqrt_delta is None:
        raise UnsupportedRegimeError(f"classification requires delta >= 0, got delta = {scales.delta}")
    sd, kappa = scales.sqrt_delta, scales.kappa
    p_crit = max(fujita_exponent(n + kappa), strauss_exponent(n + mu1))
    q = _q_value(n, mu1, kappa, p)
    if p >= p_crit:
        return Regime(False, p_crit, Branch.ABOVE_CRITICAL, None, q)

    log_power = 1.0 - sgn(scales.delta)
    if sd <= n - 2.0:
        return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, n + mu1), q)
    if sd < n - scales.d_star:
        thr = transition_threshold(n, sd)
        if p < thr:
            return Regime(True, p_crit, Branch.SUB_HEAT, _heat_law(p, n + kappa, log_power), q)
        if p == thr:
            # threshold itself belongs to the heat side
            return Regime(True, p_crit, Branch.TRANSITION, _heat_law(p, n + kappa, log_power), q)
        return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, n + mu1), q)
    return Regime(True, p_crit, Branch.SUB_HEAT, _heat_law(p, n + kappa, log_power), q)


def classify_cor1(n: int, mu: float, p: float) -> Regime:
    """Mass-free model (mu2 = 0), data class [mu-1]_+ f + g > 0, f >= 0.

    Stated directly in terms of mu: for mu < mu_*(n) the law switches from
    heat type to wave type across p = 2/(n - |mu - 1|); for mu >= mu_*(n)
    the heat-type law covers the whole subcritical range.  The case
    mu = n = 1, p <= 2 picks up a logarithmic improvement.
    """
    _validate_p(p)
    if mu < 0:
        raise ValidationError(f"damping size must be nonnegative, got mu = {mu}")
    kappa = -neg_part(mu - 1.0)
    p_crit = max(fujita_exponent(n + kappa), strauss_exponent(n + mu))
    q = _q_value(n, mu, kappa, p)
    if p >= p_crit:
        return Regime(False, p_crit, Branch.ABOVE_CRITICAL, None, q)

    # mu = n = 1 carries the log factor of the degenerate (delta = 0) case;
    # the sign of delta = (mu-1)^2 is taken with the same dead zone as the
    # general classifier so the two agree on every input
    log_power = 1.0 if (n == 1 and sgn((mu - 1.0) ** 2) == 0) else 0.0
    if mu >= mu_star(n):
        return Regime(True, p_crit, Branch.SUB_HEAT, _heat_law(p, float(n), 0.0), q)
    thr = transition_threshold(n, abs(mu - 1.0))
    if p < thr:
        return Regime(True, p_crit, Branch.SUB_HEAT, _heat_law(p, n + kappa, log_power), q)
    if p == thr:
        return Regime(True, p_crit, Branch.TRANSITION, _heat_law(p, n + kappa, log_power), q)
    return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, n + mu), q)


def classify_cor2(n: int, mu: float, p: float) -> Regime:
    """Mass-free model (mu2 = 0), data class f > 0 with [mu-1]_+ f + g = 0.

    Wave-type up to p_* = 1 + (n - mu + 3)/(n + mu - 1) for moderate mu,
    mixed-type beyond, with a log-improved law exactly at p_*.  In 1-D with
    0 < mu < 2 a heat-type bound takes over below p = 2/(1 + |mu - 1|).
    """
    _validate_p(p)
    if mu < 0:
        raise ValidationError(f"damping size must be nonnegative, got mu = {mu}")
    kappa = -neg_part(mu - 1.0)
    p_crit = max(fujita_exponent(n + kappa), strauss_exponent(n + mu))
    q = _q_value(n, mu, kappa, p)
    if p >= p_crit:
        return Regime(False, p_crit, Branch.ABOVE_CRITICAL, None, q)

    if n == 1 and 0.0 < mu < 2.0 and p < 2.0 / (1.0 + abs(mu - 1.0)):
        return Regime(True, p_crit, Branch.IMPROVED_1D,
                      _heat_law(p, 1.0 + pos_part(mu - 1.0), 0.0), q)
    ms = mu_star(n)
    if mu <= ms:
        return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, n + mu), q)
    if mu < n + 3.0:
        ps = p_star(n, mu, abs(mu - 1.0))
        if p < ps:
            return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, n + mu), q)
        if p == ps:
            return Regime(True, p_crit, Branch.TRANSITION, _sigma_law(p, float(n), 1.0), q)
        return Regime(True, p_crit, Branch.SUB_MIXED, _sigma_law(p, float(n), 0.0), q)
    return Regime(True, p_crit, Branch.SUB_MIXED, _sigma_law(p, float(n), 0.0), q)


def classify_h0(params: ModelParams, p: float) -> Regime:
    """Classify for data with f > 0 and exactly vanishing weighted average
    h = (mu1 - 1 + sqrt(delta))/2 f + g = 0.

    Requires mu1 >= 0 and delta >= 0.  Wave-type below p_*, a doubly
    log-improved law at p_*, mixed-type above; in 1-D with 0 <= delta < 1 a
    heat-type bound takes over below r_*(mu1, delta).
    """
    _validate_p(p)
    n, mu1 = params.n, params.mu1
    if mu1 < 0:
        raise ValidationError(f"vanishing-average class requires mu1 >= 0, got {mu1}")
    scales = derive_scales(params)
    if scales.sqrt_delta is None:
        raise UnsupportedRegimeError(f"classification requires delta >= 0, got delta = {scales.delta}")
    sd, kappa = scales.sqrt_delta, scales.kappa
    p_crit = max(fujita_exponent(n + kappa), strauss_exponent(n + mu1))
    q = _q_value(n, mu1, kappa, p)
    if p >= p_crit:
        return Regime(False, p_crit, Branch.ABOVE_CRITICAL, None, q)

    if n == 1 and 0.0 <= scales.delta < 1.0 and p < r_star(mu1, scales.delta):
        return Regime(True, p_crit, Branch.IMPROVED_1D,
                      _heat_law(p, (mu1 + 1.0 + sd) / 2.0, 0.0), q)
    s = sgn(scales.delta)
    if sd <= n - scales.d_star:
        return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, n + mu1), q)
    if sd < n + 2.0:
        ps = scales.p_star
        if p < ps:
            return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, n + mu1), q)
        if p == ps:
            return Regime(True, p_crit, Branch.TRANSITION, _sigma_law(p, n + kappa, 2.0 - s), q)
        return Regime(True, p_crit, Branch.SUB_MIXED, _sigma_law(p, n + kappa, 1.0 - s), q)
    return Regime(True, p_crit, Branch.SUB_MIXED, _sigma_law(p, n + kappa, 1.0 - s), q)


def classify_negmass(params: ScatteringParams, p: float) -> Regime:
    """Scattering-producing damping with negative mass: nu1/(1+t)^beta u_t
    + nu2/(1+t)^2 u, beta > 1, nu1 >= 0, nu2 < 0, data f, g >= 0 not both 0.

    The effective discriminant is delta = 1 - 4 nu2 exp(nu1/(1-beta)) > 1,
    so every law is a pure power.
    """
    _validate_p(p)
    n = params.n
    m_eff = params.effective_mass()
    delta = 1.0 - 4.0 * m_eff
    sd = math.sqrt(delta)
    kappa = (0.0 - 1.0 - sd) / 2.0
    p_crit = max(fujita_exponent(n + kappa), strauss_exponent(float(n)))
    q = _q_value(n, 0.0, kappa, p)
    if p >= p_crit:
        return Regime(False, p_crit, Branch.ABOVE_CRITICAL, None, q)

    if sd <= n - 2.0:
        return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, float(n)), q)
    if sd < n - d_star(float(n)):
        thr = transition_threshold(n, sd)
        if p < thr:
            return Regime(True, p_crit, Branch.SUB_HEAT, _heat_law(p, n + kappa, 0.0), q)
        if p == thr:
            return Regime(True, p_crit, Branch.TRANSITION, _heat_law(p, n + kappa, 0.0), q)
        return Regime(True, p_crit, Branch.SUB_WAVE, _wave_law(p, float(n)), q)
    return Regime(True, p_crit, Branch.SUB_HEAT, _heat_law(p, n + kappa, 0.0), q)


def solve_lifespan(law: LifespanLaw, eps: float) -> float:
    """Solve eps^a T^b ln(1+T)^c = 1 for T >= 1.

    Closed form for c = 0; monotone bracketing plus bisection otherwise,
    to an absolute residual below 1e-12.
    """
    if not (0.0 < eps) or not math.isfinite(eps):
        raise ValidationError(f"eps must be positive and finite, got {eps}")
    a, b, c = law.eps_power, law.t_exponent, law.log_power
    if b <= 0:
        raise ValidationError(f"law has nonpositive time exponent {b}; no finite lifespan bound")
    if c == 0.0:
        t = eps ** (-a / b)
        if t <= 1.0:
            raise ValidationError(f"eps = {eps} is too large: lifespan bound {t} is not above 1")
        return t

    def g(t: float) -> float:
        return a * math.log(eps) + b * math.log(t) + c * math.log(math.log1p(t))

    if g(1.0) >= 0.0:
        raise ValidationError(f"eps = {eps} is too large: no solution above 1")
    lo, hi = 1.0, 2.0
    while g(hi) < 0.0:
        lo, hi = hi, hi * hi
        if hi > 1e300:
            raise NumericalFailureError("lifespan bracket exceeded 1e300")
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    t = 0.5 * (lo + hi)
    resid = abs(eps ** a * t ** b * math.log1p(t) ** c - 1.0)
    if resid >= 1e-12:
        raise NumericalFailureError(f"lifespan solve stalled, residual {resid}")
    return t


# --- phase diagrams ---------------------------------------------------------

@dataclass
class PhaseDiagram:
    """Sampled classification of a (p, y) window, y = mu or sqrt(delta)."""

    theorem: str
    n: int
    p_values: list
    y_values: list
    # rows of (p, y, branch name, eps exponent or nan, log power or nan)
    rows: list
    boundaries: dict


_DIAGRAM_IDS = ("cor1", "cor2", "negmass")


def _diagram_classify(theorem: str, n: int, p: float, y: float) -> Regime:
    if theorem == "cor1":
        return classify_cor1(n, y, p)
    if theorem == "cor2":
        return classify_cor2(n, y, p)
    # y is sqrt(delta); realize it through the mass term at mu1 = 0
    return classify_thm1(ModelParams(n, 0.0, (1.0 - y * y) / 4.0), p)


def _boundary_samples(theorem: str, n: int, p_lo: float, p_hi: float,
                      y_lo: float, y_hi: float, k: int = 257) -> dict:
    """Analytic boundary curves of the diagram, clipped to the window."""
    out: dict = {}

    def line(name, pts):
        pts = [(p, y) for (p, y) in pts if p_lo <= p <= p_hi and y_lo <= y <= y_hi]
        if len(pts) >= 2:
            out[name] = pts

    ys = [y_lo + (y_hi - y_lo) * i / (k - 1) for i in range(k)]
    if theorem in ("cor1", "cor2"):
        ms = mu_star(n)
        line("strauss", [(strauss_exponent(n + y), y) for y in ys if y <= ms])
        line("fujita", [(fujita_exponent(float(n)), y) for y in ys if y >= ms])
        if theorem == "cor1":
            up = [(transition_threshold(n, y - 1.0), y) for y in ys if 1.0 <= y <= ms]
            lo_ = [(transition_threshold(n, 1.0 - y), y) for y in ys if y <= 1.0]
            line("transition-upper", [(p, y) for (p, y) in up if math.isfinite(p)])
            line("transition-lower", [(p, y) for (p, y) in lo_ if math.isfinite(p)])
            if n == 1:
                line("log-improved", [(1.0 + (2.0 - 1.0) * i / (k - 1), 1.0) for i in range(k)])
        else:
            line("p-star", [(p_star(n, y, abs(y - 1.0)), y) for y in ys if ms <= y <= n + 3.0])
            if n == 1:
                line("heat-1d", [(2.0 / (1.0 + abs(y - 1.0)), y) for y in ys if 0.0 < y < 2.0])
    else:
        dsn = d_star(float(n))
        line("strauss", [(strauss_exponent(float(n)), y) for y in ys if y <= n - dsn])
        tr = [(transition_threshold(n, y), y) for y in ys if max(0.0, n - 2.0) <= y <= n - dsn]
        line("transition", [(p, y) for (p, y) in tr if math.isfinite(p)])
        fu = [(fujita_exponent(n - (1.0 + y) / 2.0), y) for y in ys if n - dsn <= y < 2.0 * n - 1.0]
        line("fujita", [(p, y) for (p, y) in fu if math.isfinite(p)])
    return out


def phase_diagram(n: int, theorem: str, p_range: tuple, y_range: tuple,
                  resolution: int) -> PhaseDiagram:
    """Classify a resolution x resolution grid over (p, y).

    theorem is one of "cor1", "cor2" (y = mu, data classes with and without
    positive weighted average) or "negmass" (y = sqrt(delta), the mu1 = 0
    family).  Rows are emitted in row-major order, y outer, p inner.
    """
    if theorem not in _DIAGRAM_IDS:
        raise ValidationError(f"unknown diagram {theorem!r}, expected one of {_DIAGRAM_IDS}")
    if resolution < 2:
        raise ValidationError("resolution must be at least 2")
    p_lo, p_hi = map(float, p_range)
    y_lo, y_hi = map(float, y_range)
    if not (1.0 < p_lo < p_hi):
        raise ValidationError(f"need 1 < p_lo < p_hi, got ({p_lo}, {p_hi})")
    if not (y_lo < y_hi) or y_lo < 0:
        raise ValidationError(f"need 0 <= y_lo < y_hi, got ({y_lo}, {y_hi})")

    ps = [p_lo + (p_hi - p_lo) * i / (resolution - 1) for i in range(resolution)]
    ys = [y_lo + (y_hi - y_lo) * i / (resolution - 1) for i in range(resolution)]
    rows = []
    for y in ys:
        for p in ps:
            reg = _diagram_classify(theorem, n, p, y)
            if reg.law is None:
                rows.append((p, y, reg.branch.value, math.nan, math.nan))
            else:
                rows.append((p, y, reg.branch.value, reg.law.eps_exponent(), reg.law.log_power))
    bnd = _boundary_samples(theorem, n, p_lo, p_hi, y_lo, y_hi)
    return PhaseDiagram(theorem, n, ps, ys, rows, bnd)


_BRANCH_COLORS = {
    "SubWave": "#4477aa",
    "SubHeat": "#ee6677",
    "Transition": "#ccbb44",
    "SubMixed": "#aa3377",
    "Improved1D": "#66ccee",
    "AboveCritical": "#bbbbbb",
}


def phase_diagram_svg(diag: PhaseDiagram) -> str:
    """Render a diagram as a standalone SVG region map (fixed 800x600 box)."""
    w, h = 800.0, 600.0
    p_lo, p_hi = diag.p_values[0], diag.p_values[-1]
    y_lo, y_hi = diag.y_values[0], diag.y_values[-1]
    nx, ny = len(diag.p_values), len(diag.y_values)
    cw, ch = w / nx, h / ny

    def sx(p):
        return (p - p_lo) / (p_hi - p_lo) * w

    def sy(y):
        return h - (y - y_lo) / (y_hi - y_lo) * h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:g} {h:g}">',
        f'<rect width="{w:g}" height="{h:g}" fill="white"/>',
    ]
    for (p, y, branch, _, _) in diag.rows:
        parts.append(
            f'<rect x="{sx(p) - cw / 2:.2f}" y="{sy(y) - ch / 2:.2f}" '
            f'width="{cw:.2f}" height="{ch:.2f}" fill="{_BRANCH_COLORS[branch]}"/>'
        )
    for name in sorted(diag.boundaries):
        pts = " ".join(f"{sx(p):.2f},{sy(y):.2f}" for (p, y) in diag.boundaries[name])
        parts.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="2">'
                     f"<title>{name}</title></polyline>")
    parts.append("</svg>")
    return "\n".join(parts)

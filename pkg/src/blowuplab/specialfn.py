"""Modified Bessel functions and the exponential test-function machinery.

Everything downstream of the averaged dynamics leans on four ingredients:

  * I_nu and K_nu for nonnegative real order, evaluated without library
    Bessel routines.  I uses its ascending series (all terms positive, no
    cancellation) up to a seam and the large-argument expansion with
    min-term truncation beyond it.  K uses the half-integer closed form
    plus upward order recurrence when 2 nu is an integer; otherwise a
    uniform small-argument series for z <= 2, a quadrature of the standard
    integral representation on the middle band, and the large-argument
    expansion beyond z = 16.  Accuracy target: 1e-10 relative on
    z in [1e-3, 50], nu in [0, 5].
  * phi1(r, n) = int_{S^{n-1}} e^{r omega_1} dS, reduced for n >= 2 to
    (2 pi)^{n/2} r^{1-n/2} I_{n/2-1}(r), and psi1 = e^{-t} phi1.
  * the positive multipliers m(t) used to remove the damping term.
  * the coefficient pair (c_plus, c_minus) attached to the homogeneous
    part of the averaged equation, with the positivity of c_plus and its
    consequence B_0(z) >~ eps z^{-1/2} e^z checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exponents import (
    NumericalFailureError,
    UnsupportedRegimeError,
    ValidationError,
)

EULER_GAMMA = 0.5772156649015328606
# x^3 coefficient of 1/Gamma(1+x); enters the mu -> 0 limit of the K series
_INV_GAMMA_C3 = -0.042002635034095236

_SERIES_MAX_TERMS = 700


def _check_domain(nu: float, z: float) -> None:
    if nu < 0:
        raise ValidationError(f"order must be nonnegative, got {nu}")
    if not (z > 0):
        raise ValidationError(f"argument must be positive, got {z}")


def _i_seam(nu: float) -> float:
    # the large-argument branch needs roughly z >= 2 nu + 10 before its
    # min-term error clears 1e-10; 16 keeps the nu ~ 0 seam safe too
    return max(16.0, 2.0 * nu + 10.0)


def _log_i_series(nu: float, z: float) -> float:
    head = nu * math.log(0.5 * z) - math.lgamma(nu + 1.0)
    w = 0.25 * z * z
    term = 1.0
    total = 1.0
    for k in range(1, _SERIES_MAX_TERMS):
        term *= w / (k * (nu + k))
        total += term
        if term < 1e-18 * total:
            return head + math.log(total)
    raise NumericalFailureError(f"I series did not converge at nu={nu}, z={z}")


def _log_i_asymptotic(nu: float, z: float) -> float:
    # e^z/sqrt(2 pi z) sum_k (-1)^k a_k(nu)/z^k, truncated at its smallest
    # term: the expansion diverges, so summation stops the moment the term
    # magnitudes turn around
    mu4 = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    prev = math.inf
    for k in range(1, 80):
        term *= -(mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * z)
        if abs(term) >= prev:
            break
        total += term
        prev = abs(term)
        if prev < 1e-18 * abs(total):
            break
    return z - 0.5 * math.log(2.0 * math.pi * z) + math.log(total)


def _log_bessel_i(nu: float, z: float) -> float:
    if z <= _i_seam(nu):
        return _log_i_series(nu, z)
    return _log_i_asymptotic(nu, z)


def bessel_I(nu: float, z: float) -> float:
    """Modified Bessel function of the first kind, nu >= 0, z > 0."""
    _check_domain(nu, z)
    return math.exp(_log_bessel_i(nu, z))


def _is_half_integer(nu: float) -> bool:
    two = 2.0 * nu
    return abs(two - round(two)) < 1e-12 and round(two) % 2 == 1


def _bessel_k_half(nu: float, z: float) -> float:
    # K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}; K_{-1/2} = K_{1/2}; recur upward
    k_half = math.sqrt(0.5 * math.pi / z) * math.exp(-z)
    below, here = k_half, k_half  # orders -1/2 and +1/2
    order = 0.5
    while order < nu - 0.25:
        below, here = here, below + (2.0 * order / z) * here
        order += 1.0
    return here


def _gam1(mu: float) -> float:
    # (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), continuous through mu = 0
    if abs(mu) < 1e-4:
        return -EULER_GAMMA - _INV_GAMMA_C3 * mu * mu
    gammi = math.exp(-math.lgamma(1.0 - mu))
    gampl = math.exp(-math.lgamma(1.0 + mu))
    return (gammi - gampl) / (2.0 * mu)


def _bessel_k_temme(mu: float, z: float) -> tuple:
    """(K_mu, K_{mu+1}) for |mu| <= 0.5, 0 < z <= 2, by the uniform series

        K_mu = sum_k c_k f_k,  c_k = (z^2/4)^k / k!,

    with f_k = (pi/(2 sin pi mu))[(z/2)^{-mu}/Gamma(k+1-mu)
               - (z/2)^{mu}/Gamma(k+1+mu)] run by its three-term recurrence.
    """
    d = -math.log(0.5 * z)
    e = mu * d
    pimu = math.pi * mu
    fact = 1.0 if mu == 0.0 else pimu / math.sin(pimu)
    fact2 = 1.0 if e == 0.0 else math.sinh(e) / e
    gampl = math.exp(-math.lgamma(1.0 + mu))
    gammi = math.exp(-math.lgamma(1.0 - mu))
    gam2 = 0.5 * (gammi + gampl)
    f = fact * (_gam1(mu) * math.cosh(e) + gam2 * fact2 * d)
    p = 0.5 * math.exp(e) / gampl
    q = 0.5 * math.exp(-e) / gammi
    w = 0.25 * z * z
    c = 1.0
    total = f
    total1 = p
    for i in range(1, _SERIES_MAX_TERMS):
        f = (i * f + p + q) / (i * i - mu * mu)
        c *= w / i
        p /= (i - mu)
        q /= (i + mu)
        delta = c * f
        total += delta
        total1 += c * (p - i * f)
        if abs(delta) < abs(total) * 1e-17:
            return total, 2.0 / z * total1
    raise NumericalFailureError(f"K series did not converge at mu={mu}, z={z}")


def _bessel_k_integral(nu: float, z: float) -> float:
    # K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt; the integrand is
    # even at t = 0 and truncation at T costs < 1e-18 relative
    t_end = 3.0
    for _ in range(40):
        t_end = math.acosh(1.0 + (46.0 + nu * t_end) / z)
    n = 32768
    ts = np.linspace(0.0, t_end, n + 1)
    vals = np.exp(-z * (np.cosh(ts) - 1.0)) * np.cosh(nu * ts)
    return math.exp(-z) * float(np.dot(_simpson_weights(n, t_end / n), vals))


def _log_k_asymptotic(nu: float, z: float) -> float:
    # sqrt(pi/(2z)) e^{-z} sum_k a_k(nu)/z^k, truncated at its smallest term
    mu4 = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    prev = math.inf
    for k in range(1, 80):
        term *= (mu4 - (2.0 * k - 1.0) ** 2) / (8.0 * k * z)
        if abs(term) >= prev:
            break
        total += term
        prev = abs(term)
        if prev < 1e-18 * abs(total):
            break
    return -z + 0.5 * math.log(0.5 * math.pi / z) + math.log(total)


def bessel_K(nu: float, z: float) -> float:
    """Modified Bessel function of the second kind, nu >= 0, z > 0."""
    _check_domain(nu, z)
    if _is_half_integer(nu):
        return _bessel_k_half(nu, z)
    if z > 16.0:
        return math.exp(_log_k_asymptotic(nu, z))
    if z > 2.0:
        return _bessel_k_integral(nu, z)
    steps = int(round(nu))
    mu = nu - steps
    k_mu, k_mu1 = _bessel_k_temme(mu, z)
    if steps == 0:
        return k_mu
    for j in range(1, steps):
        k_mu, k_mu1 = k_mu1, k_mu + (2.0 * (mu + j) / z) * k_mu1
    return k_mu1


def bessel_I_prime(nu: float, z: float) -> float:
    """d/dz I_nu(z) = I_{nu+1}(z) + (nu/z) I_nu(z)."""
    return bessel_I(nu + 1.0, z) + (nu / z) * bessel_I(nu, z)


def bessel_K_prime(nu: float, z: float) -> float:
    """d/dz K_nu(z) = (nu/z) K_nu(z) - K_{nu+1}(z)."""
    return (nu / z) * bessel_K(nu, z) - bessel_K(nu + 1.0, z)


@dataclass(frozen=True)
class BesselEval:
    """Joint evaluation (I_nu(z), K_nu(z)) at one point."""

    order: float
    argument: float
    value_I: float
    value_K: float


def bessel_eval(nu: float, z: float) -> BesselEval:
    return BesselEval(nu, z, bessel_I(nu, z), bessel_K(nu, z))


# --- the exponential test pair ----------------------------------------------

def sphere_area(n: int) -> float:
    """Surface measure of S^{n-1}: 2 pi^{n/2} / Gamma(n/2)."""
    if n < 1:
        raise ValidationError(f"dimension must be >= 1, got {n}")
    return 2.0 * math.pi ** (0.5 * n) / math.gamma(0.5 * n)


def phi1(r: float, n: int) -> float:
    """The radial eigenfunction of the Laplacian with eigenvalue 1:
    e^r + e^{-r} in one dimension, the sphere integral of e^{r omega_1}
    in general, via the reduction to I_{n/2-1}."""
    if n < 1:
        raise ValidationError(f"dimension must be >= 1, got {n}")
    if r < 0:
        raise ValidationError(f"radius must be nonnegative, got {r}")
    if n == 1:
        return math.exp(r) + math.exp(-r)
    if r < 1e-8:
        return sphere_area(n)  # analytic limit, avoids 0/0 in the reduction
    return (2.0 * math.pi) ** (0.5 * n) * r ** (1.0 - 0.5 * n) \
        * bessel_I(0.5 * n - 1.0, r)


def psi1(r: float, t: float, n: int) -> float:
    """e^{-t} phi1(r, n); solves the free wave equation."""
    if t < 0:
        raise ValidationError(f"time must be nonnegative, got {t}")
    return math.exp(-t) * phi1(r, n)


# fixed coefficients (-1)^k a_k(0) of the I_0 large-argument expansion
_I0_ASYM = [1.0]
for _k in range(1, 19):
    _I0_ASYM.append(_I0_ASYM[-1] * (-(0.0 - (2.0 * _k - 1.0) ** 2)) / (8.0 * _k))


def _log_phi1_grid(r: np.ndarray, n: int) -> np.ndarray:
    """log phi1 on an array of radii, overflow-free for large r."""
    r = np.asarray(r, dtype=float)
    if n == 1:
        return r + np.log1p(np.exp(-2.0 * np.minimum(r, 350.0)))
    if n == 3:
        # 4 pi sinh(r)/r, in the log domain away from the origin
        out = np.full_like(r, math.log(4.0 * math.pi))
        small = r < 1e-6
        big = ~small
        rb = r[big]
        out[big] += rb - math.log(2.0) - np.log(rb) + np.log1p(-np.exp(-2.0 * rb))
        out[small] += r[small] ** 2 / 6.0
        return out
    if n == 2:
        out = np.empty_like(r)
        small = r <= 16.0
        rs = r[small]
        w = 0.25 * rs * rs
        term = np.ones_like(rs)
        total = np.ones_like(rs)
        for k in range(1, 80):
            term = term * w / (k * k)
            total += term
        out[small] = np.log(total)
        rb = r[~small]
        acc = np.full_like(rb, _I0_ASYM[-1])
        for coef in reversed(_I0_ASYM[:-1]):
            acc = acc / rb + coef
        out[~small] = rb - 0.5 * np.log(2.0 * math.pi * rb) + np.log(acc)
        return out + math.log(2.0 * math.pi)
    head = 0.5 * n * math.log(2.0 * math.pi)
    vals = np.empty_like(r)
    for i, ri in enumerate(r):
        if ri < 1e-8:
            vals[i] = math.log(sphere_area(n))
        else:
            vals[i] = head + (1.0 - 0.5 * n) * math.log(ri) \
                + _log_bessel_i(0.5 * n - 1.0, ri)
    return vals


def _simpson_weights(panels: int, h: float) -> np.ndarray:
    if panels % 2 or panels < 2:
        raise ValidationError("composite rule needs an even panel count")
    w = np.ones(panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def yz_bound_ratio(n: int, p: float, t: float, R: float = 1.0) -> float:
    """Ratio of int_{|x| <= t+R} psi1^{p/(p-1)} dx to (1+t)^{(n-1)(1-p/(2(p-1)))}.

    Boundedness of the ratio in t is the content of the test-function
    estimate; two quadrature resolutions must agree to 1e-6 or the call
    fails numerically.
    """
    if n < 1:
        raise ValidationError(f"dimension must be >= 1, got {n}")
    if p <= 1.0:
        raise ValidationError(f"exponent must exceed 1, got {p}")
    if t < 0 or R < 1.0:
        raise ValidationError("need t >= 0 and R >= 1")
    pp = p / (p - 1.0)

    def lhs(panels: int) -> float:
        rs = np.linspace(0.0, t + R, panels + 1)
        g = np.exp(pp * (_log_phi1_grid(rs, n) - t))
        if n > 1:
            g = g * rs ** (n - 1)
        return sphere_area(n) * float(np.dot(_simpson_weights(panels, (t + R) / panels), g))

    coarse, fine = lhs(4096), lhs(8192)
    if not math.isclose(coarse, fine, rel_tol=1e-6):
        raise NumericalFailureError(
            f"ball quadrature did not settle at n={n}, p={p}, t={t}")
    rhs = (1.0 + t) ** ((n - 1) * (1.0 - 0.5 * pp))
    return fine / rhs


# --- multipliers -------------------------------------------------------------

@dataclass(frozen=True)
class MultiplierSpec:
    """Damping-removal multiplier: kind 'scale_invariant' carries mu1 and
    evaluates to e^t (1+t)^{(mu1-1)/2}; kind 'scattering' carries (nu1, beta),
    beta > 1, and evaluates to exp(nu1 (1+t)^{1-beta}/(1-beta)), a bounded
    increasing function with limit 1."""

    kind: str
    mu1: float = 0.0
    nu1: float = 0.0
    beta: float = 2.0

    def __post_init__(self):
        if self.kind not in ("scale_invariant", "scattering"):
            raise ValidationError(f"unknown multiplier kind: {self.kind!r}")
        if self.kind == "scattering":
            if not (self.beta > 1.0):
                raise ValidationError(f"scattering multiplier needs beta > 1, got {self.beta}")
            if self.nu1 < 0:
                raise ValidationError(f"scattering multiplier needs nu1 >= 0, got {self.nu1}")

    @classmethod
    def scale_invariant(cls, mu1: float) -> "MultiplierSpec":
        return cls(kind="scale_invariant", mu1=mu1)

    @classmethod
    def scattering(cls, nu1: float, beta: float) -> "MultiplierSpec":
        return cls(kind="scattering", nu1=nu1, beta=beta)


def multiplier(spec: MultiplierSpec, t: float) -> float:
    if t < 0:
        raise ValidationError(f"time must be nonnegative, got {t}")
    if spec.kind == "scale_invariant":
        return math.exp(t) * (1.0 + t) ** (0.5 * (spec.mu1 - 1.0))
    return math.exp(spec.nu1 * (1.0 + t) ** (1.0 - spec.beta) / (1.0 - spec.beta))


# --- homogeneous-part coefficients -------------------------------------------

@dataclass(frozen=True)
class CoefficientPair:
    """Coefficients of I_{sqrt(delta)/2} and K_{sqrt(delta)/2} in the
    homogeneous part, determined by the data integrals against phi1."""

    c_plus: float
    c_minus: float
    integral_f_phi1: float
    integral_h_phi1: float


def coefficients_cpm(int_f_phi1: float, int_h_phi1: float,
                     delta: float) -> CoefficientPair:
    """Evaluate the coefficient pair at argument 1, order sqrt(delta)/2.

        c_plus  =  K_nu(1) Ih + (K_{nu+1}(1) - sqrt(delta) K_nu(1)) If
        c_minus = -I_nu(1) Ih + (I_{nu+1}(1) + sqrt(delta) I_nu(1)) If

    For If >= 0, Ih >= 0, not both zero, c_plus > 0 because
    K_{nu+1}(1) - 2 nu K_nu(1) = K_{nu-1}(1) > 0; this is checked.
    """
    if delta < 0:
        raise UnsupportedRegimeError(
            f"coefficient formulas require delta >= 0, got {delta}")
    sd = math.sqrt(delta)
    nu = 0.5 * sd
    k0, k1 = bessel_K(nu, 1.0), bessel_K(nu + 1.0, 1.0)
    i0, i1 = bessel_I(nu, 1.0), bessel_I(nu + 1.0, 1.0)
    c_plus = k0 * int_h_phi1 + (k1 - sd * k0) * int_f_phi1
    c_minus = -i0 * int_h_phi1 + (i1 + sd * i0) * int_f_phi1
    hyp = int_f_phi1 >= 0 and int_h_phi1 >= 0 and (int_f_phi1 > 0 or int_h_phi1 > 0)
    if hyp and not c_plus > 0:
        raise NumericalFailureError(
            f"positivity of c_plus failed at delta={delta}: {c_plus}")
    return CoefficientPair(c_plus, c_minus, int_f_phi1, int_h_phi1)


@dataclass(frozen=True)
class HomogeneousBound:
    """ratio = B_0(z) / (eps z^{-1/2} e^z) at the requested z, and the first
    grid point z0 past which the ratio stays above half its end value
    (None when the end value is not positive)."""

    ratio: float
    z0: Optional[float]


def homogeneous_lower_bound(cpair: CoefficientPair, delta: float,
                            eps: float, z: float) -> HomogeneousBound:
    """Check B_0(z) = eps (c_plus I_nu(z) + c_minus K_nu(z)) against the
    growth floor eps z^{-1/2} e^z on [1, z]."""
    if z < 1.0:
        raise ValidationError(f"need z >= 1, got {z}")
    if delta < 0:
        raise UnsupportedRegimeError(
            f"coefficient formulas require delta >= 0, got {delta}")
    if eps <= 0:
        raise ValidationError(f"need eps > 0, got {eps}")
    nu = 0.5 * math.sqrt(delta)
    zs = np.linspace(1.0, z, 257)
    ratios = np.empty_like(zs)
    for i, zi in enumerate(zs):
        b0 = eps * (cpair.c_plus * bessel_I(nu, zi) + cpair.c_minus * bessel_K(nu, zi))
        ratios[i] = b0 / (eps * zi ** -0.5 * math.exp(zi))
    end = float(ratios[-1])
    z0 = None
    if end > 0:
        floor = 0.5 * end
        above = ratios >= floor
        # first index from which the ratio never dips under the floor again
        idx = len(zs) - 1
        while idx > 0 and above[idx - 1]:
            idx -= 1
        z0 = float(zs[idx])
    return HomogeneousBound(ratio=end, z0=z0)

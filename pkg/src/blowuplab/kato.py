"""Blow-up iteration lemma: derived constants, iteration traces, threshold
times, and a numerical extremal functional.

The lemma takes F with
    (hp1)  F(t) >= E A t^a [ln(1+t)]^c           for t >= T0,
    (hp2)  F(t) >= B int_{T0}^t ds int_{T0}^s r^{-b} F(r)^p dr,
p > 1, and gamma = 2[(p-1)a - b + 2] > 0, and concludes T < C Ttilde where
    E Ttilde^{gamma/(2(p-1))} [ln(1+Ttilde)]^c = 1
with C independent of E.  The proof iterates the ansatz
    F(t) >= D_j [ln(1+Ttilde)]^{c_j} t^{-b_j} (t - Ttilde)^{a_j},
whose parameter sequences this module reproduces exactly (D_j is carried in
the log domain; it grows doubly exponentially).

The extremal functional replaces both inequalities by equalities,
    F = E A t^a ln(1+t)^c + B int int r^{-b} F^p,
and is synthesized by fixed-point sweeps on a geometric grid.  Its numerical
blow-up time is the first grid time where F exceeds 1e12 times its initial
value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exponents import (
    LawTag,
    LifespanLaw,
    NumericalFailureError,
    ValidationError,
    neg_part,
    pos_part,
    solve_lifespan,
)

OVERFLOW_LIMIT = 1e300


@dataclass(frozen=True)
class KatoInput:
    """Hypothesis data (p, a, b, c) and constants (E, A, B), lower time T0."""

    p: float
    a: float
    b: float
    c: float
    E: float
    A: float = 1.0
    B: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        if not (self.p > 1.0):
            raise ValidationError(f"iteration lemma needs p > 1, got {self.p}")
        if self.c < 0:
            raise ValidationError(f"log power c must be nonnegative, got {self.c}")
        if self.E <= 0 or self.A <= 0 or self.B <= 0:
            raise ValidationError("E, A, B must all be positive")
        if self.t0 < 0:
            raise ValidationError(f"T0 must be nonnegative, got {self.t0}")


def kato_gamma(p: float, a: float, b: float) -> float:
    """gamma = 2[(p-1)a - b + 2], the double-integral case."""
    return 2.0 * ((p - 1.0) * a - b + 2.0)


def kato_gamma_k(p: float, a: float, b: float, k: int) -> float:
    """gamma_k = 2[(p-1)a - b + k] for a k-fold nested integral in (hp2)."""
    if k < 1:
        raise ValidationError(f"nesting depth must be a positive integer, got {k}")
    return 2.0 * ((p - 1.0) * a - b + k)


@dataclass
class IterationTrace:
    """Ansatz parameter sequences, index j = 1 .. len(a_seq)."""

    a_seq: list
    b_seq: list
    c_seq: list
    logD_seq: list
    truncated: bool = False


def iterate(inp: KatoInput, j_max: int) -> IterationTrace:
    """Run the ansatz recurrences for j_max steps.

    a_{j+1} = p a_j + [b]_- + 2, b_{j+1} = p b_j + [b]_+, c_{j+1} = p c_j,
    log D_{j+1} = p log D_j + log B - 2 log a_{j+1},
    starting from a_1 = [a]_+, b_1 = [a]_-, c_1 = c, D_1 = E A.
    Stops early (truncated=True) if any value leaves the double range.
    """
    if j_max < 1:
        raise ValidationError(f"j_max must be >= 1, got {j_max}")
    p = inp.p
    a_seq = [pos_part(inp.a)]
    b_seq = [neg_part(inp.a)]
    c_seq = [inp.c]
    logD_seq = [math.log(inp.E * inp.A)]
    trunc = False
    for _ in range(j_max - 1):
        a_next = p * a_seq[-1] + neg_part(inp.b) + 2.0
        b_next = p * b_seq[-1] + pos_part(inp.b)
        c_next = p * c_seq[-1]
        logD_next = p * logD_seq[-1] + math.log(inp.B) - 2.0 * math.log(a_next)
        if (abs(a_next) > OVERFLOW_LIMIT or abs(b_next) > OVERFLOW_LIMIT
                or abs(logD_next) > OVERFLOW_LIMIT):
            trunc = True
            break
        a_seq.append(a_next)
        b_seq.append(b_next)
        c_seq.append(c_next)
        logD_seq.append(logD_next)
    return IterationTrace(a_seq, b_seq, c_seq, logD_seq, trunc)


def closed_form_abc(inp: KatoInput, j: int) -> tuple:
    """Closed forms of (a_j, b_j, c_j) for 1-based index j."""
    if j < 1:
        raise ValidationError(f"index must be >= 1, got {j}")
    p = inp.p
    u = (neg_part(inp.b) + 2.0) / (p - 1.0)
    v = pos_part(inp.b) / (p - 1.0)
    w = p ** (j - 1)
    return (w * (pos_part(inp.a) + u) - u,
            w * (neg_part(inp.a) + v) - v,
            w * inp.c)


def c_tilde(inp: KatoInput) -> float:
    """Contraction constant B / ([a]_+ + ([b]_- + 2)/(p-1))^2."""
    m = pos_part(inp.a) + (neg_part(inp.b) + 2.0) / (inp.p - 1.0)
    return inp.B / (m * m)


def s_partial(p: float, ct: float, j: int) -> float:
    """Partial sum S_j = sum_{k=1}^{j-1} (2k ln p - ln ct) / p^k."""
    return sum((2.0 * k * math.log(p) - math.log(ct)) / p ** k for k in range(1, j))


def s_infinity(p: float, ct: float) -> float:
    """Series limit 2p ln p/(p-1)^2 + ln(ct)/(1-p).

    This is the sum of the series actually used in the iteration bound;
    mind the first power of ct in the second term.
    """
    return 2.0 * p * math.log(p) / (p - 1.0) ** 2 + math.log(ct) / (1.0 - p)


def threshold_time(inp: KatoInput) -> float:
    """The unique Ttilde >= 1 with E Ttilde^{gamma/(2(p-1))} ln(1+Ttilde)^c = 1."""
    g = kato_gamma(inp.p, inp.a, inp.b)
    if g <= 0:
        raise ValidationError(f"lemma needs gamma > 0, got gamma = {g}")
    beta = g / (2.0 * (inp.p - 1.0))
    if inp.E >= 1.0:
        if inp.c > 0 or inp.E > 1.0:
            raise ValidationError(f"no threshold time >= 1 for E = {inp.E}")
        return 1.0
    law = LifespanLaw(1.0, beta, inp.c, LawTag.HEAT_LIKE)
    return solve_lifespan(law, inp.E)


@dataclass
class KatoDerived:
    """All derived constants plus the iteration trace."""

    gamma: float
    c_tilde: float
    s_inf: float
    t_tilde: float
    c_amp: float
    trace: IterationTrace


def amplification_constant(inp: KatoInput, tol: float = 1e-6) -> float:
    """Minimal C > 1 (to within tol) making the limit factor
    J(C) = A e^{-S_inf} (1 - 1/C)^m C^{gamma/(2(p-1))} exceed 1.

    J is strictly increasing on (1, inf) with J(1+) = 0, so the minimal C
    sits on the unique root of J = 1; the returned value is the upper end
    of the final bracket, hence J(C) > 1 holds.
    """
    g = kato_gamma(inp.p, inp.a, inp.b)
    if g <= 0:
        raise ValidationError(f"lemma needs gamma > 0, got gamma = {g}")
    m = pos_part(inp.a) + (neg_part(inp.b) + 2.0) / (inp.p - 1.0)
    s = g / (2.0 * (inp.p - 1.0))
    logK = math.log(inp.A) - s_infinity(inp.p, c_tilde(inp))

    def logJ(cc: float) -> float:
        return logK + m * math.log1p(-1.0 / cc) + s * math.log(cc)

    lo, hi = 1.0 + 1e-12, 2.0
    while logJ(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e12:
            raise NumericalFailureError("amplification constant exceeds 1e12")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if logJ(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def derive(inp: KatoInput, j_max: int = 12) -> KatoDerived:
    """Aggregate: gamma, c_tilde, series limit, threshold time, minimal C,
    and the first j_max rows of the iteration trace."""
    return KatoDerived(
        gamma=kato_gamma(inp.p, inp.a, inp.b),
        c_tilde=c_tilde(inp),
        s_inf=s_infinity(inp.p, c_tilde(inp)),
        t_tilde=threshold_time(inp),
        c_amp=amplification_constant(inp),
        trace=iterate(inp, j_max),
    )


# --- extremal functional ----------------------------------------------------

@dataclass
class ExtremalResult:
    t: np.ndarray
    F: np.ndarray
    blowup_time: Optional[float]
    sweeps: int
    converged: bool


def _source(inp: KatoInput, t: np.ndarray) -> np.ndarray:
    return inp.E * inp.A * t ** inp.a * np.log1p(t) ** inp.c


def _double_integral(inp: KatoInput, t: np.ndarray, F: np.ndarray) -> np.ndarray:
    g = t ** (-inp.b) * F ** inp.p
    inner = np.concatenate(([0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(t))))
    outer = np.concatenate(([0.0], np.cumsum(0.5 * (inner[1:] + inner[:-1]) * np.diff(t))))
    return outer


def synthesize_extremal(inp: KatoInput, grid: np.ndarray,
                        blowup_factor: float = 1e12,
                        max_sweeps: int = 2000) -> ExtremalResult:
    """Fixed-point sweeps of F = source + B * double integral on the grid.

    Sweeps stop when successive iterates differ by less than 1e-10 in
    relative sup norm over the pre-blow-up segment and the blow-up index is
    stable.  Values are capped a little above the blow-up threshold so the
    arithmetic stays finite; everything at or past the cap is reported via
    blowup_time (first grid t where F exceeds blowup_factor times F(t_0)).
    """
    t = np.asarray(grid, dtype=float)
    if t.ndim != 1 or len(t) < 8:
        raise ValidationError("grid must be a 1-D array with at least 8 points")
    if not np.all(np.diff(t) > 0) or t[0] <= 0:
        raise ValidationError("grid must be strictly increasing and positive")
    if t[0] < inp.t0:
        raise ValidationError("grid must start at or after T0")
    src = _source(inp, t)
    f0 = src[0]
    cap = blowup_factor * f0
    capval = 10.0 * cap
    F = src.copy()
    prev_idx = -2
    sweeps = 0
    converged = False
    for sweeps in range(1, max_sweeps + 1):
        G = src + inp.B * _double_integral(inp, t, np.minimum(F, capval))
        G = np.minimum(G, capval)
        over = np.nonzero(G > cap)[0]
        idx = int(over[0]) if len(over) else -1
        stop = len(t) if idx < 0 else idx
        seg_prev, seg_new = F[:stop], G[:stop]
        rel = float(np.max(np.abs(seg_new - seg_prev) / np.maximum(np.abs(seg_prev), 1e-300)))
        F = G
        if rel < 1e-10 and idx == prev_idx:
            converged = True
            break
        prev_idx = idx
    blowup_time = float(t[prev_idx]) if prev_idx >= 0 else None
    if not converged:
        raise NumericalFailureError(f"extremal sweeps did not settle in {max_sweeps} iterations")
    return ExtremalResult(t, F, blowup_time, sweeps, converged)


def extremal_blowup_time(inp: KatoInput, t_end: Optional[float] = None,
                         n0: int = 2048, max_doublings: int = 6) -> tuple:
    """Measure the extremal blow-up time with grid-doubling refinement
    until the measured time moves by less than 1%.

    Returns (blowup_time, final ExtremalResult).
    """
    if t_end is None:
        t_end = 1.02 * amplification_constant(inp) * threshold_time(inp)
    t_start = max(inp.t0, 1e-3)
    n = n0
    prev = None
    res = None
    for _ in range(max_doublings + 1):
        grid = np.geomspace(t_start, t_end, n)
        res = synthesize_extremal(inp, grid)
        if res.blowup_time is None:
            raise NumericalFailureError(
                f"extremal functional did not blow up before t = {t_end}")
        if prev is not None and abs(res.blowup_time - prev) < 0.01 * res.blowup_time:
            return res.blowup_time, res
        prev = res.blowup_time
        n *= 2
    return prev, res


# --- divergence certificate -------------------------------------------------

@dataclass
class DivergenceCertificate:
    accepted: bool
    hp1_ok: bool
    hp2_ok: bool
    first_violation: Optional[tuple]
    dj_bound_ok: bool
    margins: list = field(default_factory=list)  # (j, log of ansatz bound at C*Ttilde)
    diverges: bool = False


def certify_divergence(t: np.ndarray, F: np.ndarray, inp: KatoInput,
                       rel_tol: float = 1e-6, j_max: int = 60) -> DivergenceCertificate:
    """Check a grid function against the lemma hypotheses and report the
    ansatz lower bounds at t = C Ttilde in the log domain.

    Rejects (accepted=False, with the first violated inequality and its
    location) if (hp1) or (hp2) fails beyond rel_tol by quadrature.  When
    the hypotheses hold, the per-j margins must exceed any fixed level for
    large j; `diverges` records that the tail is strictly increasing.
    """
    t = np.asarray(t, dtype=float)
    F = np.asarray(F, dtype=float)
    src = _source(inp, t)
    viol1 = np.nonzero(F < src * (1.0 - rel_tol))[0]
    hp1_ok = len(viol1) == 0
    integ = inp.B * _double_integral(inp, t, F)
    viol2 = np.nonzero(F < integ * (1.0 - rel_tol))[0]
    hp2_ok = len(viol2) == 0
    first = None
    if not hp1_ok:
        first = ("hp1", float(t[viol1[0]]))
    elif not hp2_ok:
        first = ("hp2", float(t[viol2[0]]))
    if first is not None:
        return DivergenceCertificate(False, hp1_ok, hp2_ok, first, False)

    trace = iterate(inp, j_max)
    ct = c_tilde(inp)
    dj_ok = True
    log_ea = math.log(inp.E * inp.A)
    for j in range(1, len(trace.logD_seq) + 1):
        lower = inp.p ** (j - 1) * (log_ea - s_partial(inp.p, ct, j))
        if trace.logD_seq[j - 1] < lower - 1e-9 * max(1.0, abs(lower)):
            dj_ok = False
            break

    ttil = threshold_time(inp)
    camp = amplification_constant(inp)
    tstar = camp * ttil
    loglog = math.log(math.log1p(ttil))
    margins = []
    for j in range(1, len(trace.logD_seq) + 1):
        m = (trace.logD_seq[j - 1] + trace.c_seq[j - 1] * loglog
             - trace.b_seq[j - 1] * math.log(tstar)
             + trace.a_seq[j - 1] * math.log(tstar - ttil))
        if not math.isfinite(m):
            break
        margins.append((j, m))
    tail = [m for (_, m) in margins[-5:]]
    diverges = len(tail) >= 3 and all(x < y for x, y in zip(tail, tail[1:])) \
        and margins[-1][1] > margins[0][1]
    return DivergenceCertificate(True, True, True, None, dj_ok, margins, diverges)

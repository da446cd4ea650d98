"""Verification laboratory for blow-up and lifespan estimates of semilinear
wave equations with time-decaying damping and mass.

Four computational layers: closed-form exponent classification
(``exponents``), the iteration-lemma machinery with its Volterra oracle
(``kato``), the special functions behind the test-function method
(``specialfn``), and a radial finite-difference solver with eps-sweep
fitting (``pdesolver``).  The ``blowuplab`` console script fronts all four.
"""

from .exponents import (
    Branch,
    DerivedScales,
    LawTag,
    LifespanLaw,
    ModelParams,
    NumericalFailureError,
    PhaseDiagram,
    Regime,
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
    p_star,
    phase_diagram,
    phase_diagram_svg,
    r_star,
    solve_lifespan,
    strauss_exponent,
    theta_exponent,
)
from .kato import (
    DivergenceCertificate,
    ExtremalResult,
    IterationTrace,
    KatoDerived,
    KatoInput,
    amplification_constant,
    certify_divergence,
    closed_form_abc,
    derive,
    extremal_blowup_time,
    iterate,
    kato_gamma,
    kato_gamma_k,
    s_infinity,
    s_partial,
    synthesize_extremal,
    threshold_time,
)
from .pdesolver import (
    DataClass,
    DataProfile,
    FieldState,
    GridSpec,
    IdentityReport,
    InitialData,
    SimConfig,
    SimResult,
    SimStatus,
    StoppingSpec,
    SweepFit,
    classify_regime,
    detect_blowup,
    initial_state,
    make_initial_data,
    ode_blowup_time,
    predicted_tmax,
    run,
    step,
    sweep,
    track_functionals,
    verify_identities,
)
from .specialfn import (
    BesselEval,
    CoefficientPair,
    HomogeneousBound,
    MultiplierSpec,
    bessel_I,
    bessel_I_prime,
    bessel_K,
    bessel_K_prime,
    bessel_eval,
    coefficients_cpm,
    homogeneous_lower_bound,
    multiplier,
    phi1,
    psi1,
    sphere_area,
    yz_bound_ratio,
)

__version__ = "0.1.0"

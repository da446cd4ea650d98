"""Command-line front door: classification, critical thresholds, phase
diagrams, iteration-lemma reports, special-function probes, simulation,
eps sweeps, and identity verification.

Machine payloads go to standard output (JSON, or CSV for series verbs),
log lines to standard error.  Every float prints with 17 significant
digits so reruns are byte-identical.  Exit codes: 0 success, 2 validation
error, 3 numerical failure, 4 simulation reached t_max where blow-up was
required.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from typing import Optional

from .exponents import (
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
    mu_star,
    p_star,
    phase_diagram,
    phase_diagram_svg,
    r_star,
    theta_exponent,
)
from .kato import KatoInput, derive, extremal_blowup_time, threshold_time
from .pdesolver import (
    DataClass,
    DataProfile,
    GridSpec,
    SimConfig,
    SimStatus,
    StoppingSpec,
    classify_regime,
    run,
    sweep,
    verify_identities,
)
from .specialfn import bessel_I, bessel_K, phi1, yz_bound_ratio

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_NO_BLOWUP = 4


# --- deterministic emitters -----------------------------------------------------

def format_float(x: float) -> str:
    """17 significant digits; always re-parses to the same float."""
    text = format(float(x), ".17g")
    if not any(ch in text for ch in ".eEnif"):  # nan/inf keep their spelling
        text += ".0"
    return text


def emit_json(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(emit_json(v) for v in value) + "]"
    if isinstance(value, dict):
        items = (f"{json.dumps(k)}: {emit_json(v)}" for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def emit_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    print(f"wrote {path}", file=sys.stderr)


def _deliver_csv(text: str, out: Optional[str]) -> bool:
    """CSV to --out when given, else to stdout; returns True if it went to
    a file (so a JSON summary may still use stdout)."""
    if out:
        _write_text(out, text)
        return True
    sys.stdout.write(text)
    return False


# --- option plumbing ------------------------------------------------------------

class _Formatter(argparse.ArgumentDefaultsHelpFormatter):
    """Pinned wrap width keeps help text byte-stable across terminals."""

    def __init__(self, prog):
        super().__init__(prog, width=96)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("global options")
    group.add_argument("--config", metavar="PATH", default=None,
                       help="INI file with [model], [data], [grid], [stopping]")
    group.add_argument("--out", metavar="PATH", default=None,
                       help="output file (or prefix for multi-file verbs)")
    group.add_argument("--threads", type=int, metavar="N", default=None,
                       help="sweep worker cap (overrides BLOWUPLAB_THREADS)")
    return common


def _load_ini(path: Optional[str]) -> dict:
    """Flatten the INI sections into {section: {key: str}}."""
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValidationError(f"config file not found: {path}")
    return {section: dict(parser.items(section)) for section in parser.sections()}


def _pick(args_value, ini: dict, section: str, key: str, cast, default):
    """Flag beats config file beats default."""
    if args_value is not None:
        return args_value
    raw = ini.get(section, {}).get(key)
    if raw is not None:
        return cast(raw)
    return default


def build_sim_config(args) -> SimConfig:
    ini = _load_ini(args.config)
    kind = _pick(getattr(args, "model_kind", None), ini, "model", "kind",
                 str, "scale_invariant")
    n = _pick(args.n, ini, "model", "n", int, 1)
    if kind == "scattering":
        model = ScatteringParams(
            n=n,
            nu1=_pick(args.nu1, ini, "model", "nu1", float, 0.0),
            nu2=_pick(args.nu2, ini, "model", "nu2", float, -1.0),
            beta=_pick(args.beta, ini, "model", "beta", float, 2.0))
    else:
        model = ModelParams(
            n=n,
            mu1=_pick(args.mu1, ini, "model", "mu1", float, 0.0),
            mu2=_pick(args.mu2, ini, "model", "mu2", float, 0.0))
    p = _pick(args.p, ini, "model", "p", float, 2.0)
    eps = _pick(args.eps, ini, "model", "eps", float, 0.1)
    class_name = _pick(args.data_class, ini, "data", "data_class", str, "HPositive")
    try:
        data_class = DataClass(class_name)
    except ValueError:
        raise ValidationError(f"unknown data class {class_name!r}") from None
    data = DataProfile(
        amplitude=_pick(args.amplitude, ini, "data", "amplitude", float, 1.0),
        shape=_pick(args.shape, ini, "data", "shape", str, "bump"),
        radius=_pick(args.radius, ini, "data", "radius", float, 1.0),
        data_class=data_class)
    dr = _pick(args.dr, ini, "grid", "dr", float, 0.01)
    cfl = _pick(args.cfl, ini, "grid", "cfl", float, 0.45)
    stopping = StoppingSpec(
        blowup_factor=_pick(args.blowup_factor, ini, "stopping", "blowup_factor",
                            float, 1e12),
        t_max=_pick(args.t_max, ini, "stopping", "t_max", float, 10.0))
    r_max = _pick(args.r_max, ini, "grid", "r_max", float, None)
    if r_max is None:
        # smallest dr-aligned grid containing the light cone
        r_max = math.ceil((stopping.t_max + data.radius) / dr + 2) * dr
    grid = GridSpec(dr=dr, r_max=r_max, cfl=cfl)
    return SimConfig(model=model, p=p, eps=eps, data=data, grid=grid,
                     stopping=stopping)


def _add_model_flags(sub) -> None:
    group = sub.add_argument_group("problem options (override --config)")
    group.add_argument("--n", type=int, default=None, help="space dimension")
    group.add_argument("--mu1", type=float, default=None, help="damping scale")
    group.add_argument("--mu2", type=float, default=None, help="mass scale")
    group.add_argument("--scattering", dest="model_kind", action="store_const",
                       const="scattering", default=None,
                       help="use the scattering-producing damping model")
    group.add_argument("--nu1", type=float, default=None,
                       help="scattering damping size")
    group.add_argument("--nu2", type=float, default=None,
                       help="negative mass size (< 0)")
    group.add_argument("--beta", type=float, default=None,
                       help="scattering damping decay rate (> 1)")
    group.add_argument("--p", type=float, default=None, help="nonlinearity exponent")
    group.add_argument("--eps", type=float, default=None, help="data size")
    group.add_argument("--amplitude", type=float, default=None, help="profile height")
    group.add_argument("--shape", default=None, choices=("bump", "quartic", "flat"),
                       help="profile shape")
    group.add_argument("--radius", type=float, default=None, help="support radius R")
    group.add_argument("--data-class", default=None, choices=("HPositive", "HZero"),
                       help="velocity rule")
    group.add_argument("--dr", type=float, default=None, help="grid spacing")
    group.add_argument("--r-max", type=float, default=None,
                       help="grid extent (default: fits the light cone)")
    group.add_argument("--cfl", type=float, default=None, help="step ratio in (0,1)")
    group.add_argument("--blowup-factor", type=float, default=None,
                       help="growth factor declaring blow-up")
    group.add_argument("--t-max", type=float, default=None, help="time horizon")


# --- verb: classify -------------------------------------------------------------

def _law_payload(law) -> Optional[dict]:
    if law is None:
        return None
    return {"eps_power": law.eps_power, "t_exponent": law.t_exponent,
            "log_power": law.log_power, "tag": law.tag.value}


def cmd_classify(args) -> int:
    thm = args.thm
    if thm == "thm1":
        reg = classify_thm1(ModelParams(args.n, args.mu1, args.mu2), args.p)
        params = {"mu1": args.mu1, "mu2": args.mu2}
    elif thm == "cor1":
        reg = classify_cor1(args.n, args.mu, args.p)
        params = {"mu": args.mu}
    elif thm == "cor2":
        reg = classify_cor2(args.n, args.mu, args.p)
        params = {"mu": args.mu}
    elif thm == "h0":
        reg = classify_h0(ModelParams(args.n, args.mu1, args.mu2), args.p)
        params = {"mu1": args.mu1, "mu2": args.mu2}
    else:
        reg = classify_negmass(ScatteringParams(args.n, args.nu1, args.nu2,
                                                args.beta), args.p)
        params = {"nu1": args.nu1, "nu2": args.nu2, "beta": args.beta}
    payload = {"theorem": thm, "n": args.n, **params, "p": args.p,
               "p_crit": reg.p_crit, "blows_up": reg.blows_up,
               "branch": reg.branch.value, "law": _law_payload(reg.law),
               "exponent": reg.law.eps_exponent() if reg.law else None,
               "q": reg.q}
    print(emit_json(payload))
    return EXIT_OK


# --- verb: critical -------------------------------------------------------------

def cmd_critical(args) -> int:
    thm = args.thm
    if thm in ("thm1", "h0"):
        model = ModelParams(args.n, args.mu1, args.mu2)
        mu1 = args.mu1
    elif thm in ("cor1", "cor2"):
        model = ModelParams(args.n, args.mu, 0.0)
        mu1 = args.mu
    else:
        sp = ScatteringParams(args.n, args.nu1, args.nu2, args.beta)
        delta = 1.0 - 4.0 * sp.effective_mass()
        payload = {"theorem": thm, "n": args.n, "nu1": args.nu1, "nu2": args.nu2,
                   "beta": args.beta, "effective_mass": sp.effective_mass(),
                   "delta": delta, "sqrt_delta": math.sqrt(delta),
                   "p_crit": critical_exponent_thm1(args.n, 0.0, delta)}
        print(emit_json(payload))
        return EXIT_OK
    scales = derive_scales(model)
    payload = {"theorem": thm, "n": args.n, "mu1": mu1, "mu2": model.mu2,
               "delta": scales.delta, "sqrt_delta": scales.sqrt_delta,
               "kappa": scales.kappa, "lambda": scales.lam,
               "d_star": d_star(args.n + mu1), "mu_star": mu_star(args.n),
               "theta": theta_exponent(mu1)}
    if thm == "h0":
        payload["r_star"] = r_star(mu1, scales.delta)
        payload["p_star"] = scales.p_star
        payload["p_crit"] = payload["r_star"]
    else:
        payload["p_star"] = scales.p_star
        payload["p_crit"] = critical_exponent_thm1(args.n, mu1, scales.delta)
    print(emit_json(payload))
    return EXIT_OK


# --- verb: phase-diagram --------------------------------------------------------

def _plot_phase_diagram(diag, path: str) -> None:
    try:
        import matplotlib
    except ImportError:
        raise ValidationError("--plot needs matplotlib (install extra 'plot')") from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .exponents import _BRANCH_COLORS

    fig, ax = plt.subplots(figsize=(8.0, 6.0), dpi=100)
    xs = [row[0] for row in diag.rows]
    ys = [row[1] for row in diag.rows]
    cs = [_BRANCH_COLORS.get(row[2], "#000000") for row in diag.rows]
    ax.scatter(xs, ys, c=cs, s=4.0, marker="s", linewidths=0)
    for name, pts in sorted(diag.boundaries.items()):
        ax.plot([q[0] for q in pts], [q[1] for q in pts], "k-", linewidth=1.0)
    ax.set_xlabel("p")
    ax.set_ylabel("mu" if diag.theorem in ("cor1", "cor2") else "sqrt(delta)")
    ax.set_title(f"{diag.theorem}, n = {diag.n}")
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    print(f"wrote {path}", file=sys.stderr)


def cmd_phase_diagram(args) -> int:
    if not args.out:
        raise ValidationError("phase-diagram needs --out as a file prefix")
    diag = phase_diagram(args.n, args.thm, (args.p_min, args.p_max),
                         (args.y_min, args.y_max), args.resolution)
    grid_rows = [(p, y, branch, expo, logp)
                 for (p, y, branch, expo, logp) in diag.rows]
    files = [args.out + ".csv", args.out + "_boundary.csv"]
    _write_text(files[0], emit_csv(("p", "mu", "branch", "exponent", "log_power"),
                                   grid_rows))
    boundary_rows = [(name, q[0], q[1])
                     for name in sorted(diag.boundaries)
                     for q in diag.boundaries[name]]
    _write_text(files[1], emit_csv(("curve", "p", "mu"), boundary_rows))
    if args.svg:
        files.append(args.out + ".svg")
        _write_text(files[-1], phase_diagram_svg(diag))
    if args.plot:
        files.append(args.out + ".png")
        _plot_phase_diagram(diag, files[-1])
    payload = {"theorem": diag.theorem, "n": diag.n,
               "rows": len(diag.rows), "boundary_curves": len(diag.boundaries),
               "files": files}
    print(emit_json(payload))
    return EXIT_OK


# --- verb: kato -----------------------------------------------------------------

def _kato_input(args) -> KatoInput:
    return KatoInput(p=args.p, a=args.a, b=args.b, c=args.c, E=args.E,
                     A=args.A, B=args.B)


def cmd_kato(args) -> int:
    inp = _kato_input(args)
    if args.kato_action == "threshold":
        print(emit_json({"T_tilde": threshold_time(inp)}))
        return EXIT_OK
    if args.kato_action == "derive":
        result = derive(inp, j_max=args.j_max)
        trace = [{"j": j + 1, "a": result.trace.a_seq[j], "b": result.trace.b_seq[j],
                  "c": result.trace.c_seq[j], "logD": result.trace.logD_seq[j]}
                 for j in range(len(result.trace.a_seq))]
        payload = {"gamma": result.gamma, "C_tilde": result.c_tilde,
                   "S_inf": result.s_inf, "T_tilde": result.t_tilde,
                   "C_amp": result.c_amp, "trace": trace}
        print(emit_json(payload))
        return EXIT_OK
    # extremal: synthesize the minimal functional and report its blow-up
    result = derive(inp, j_max=args.j_max)
    blowup, extremal = extremal_blowup_time(inp)
    if args.out:
        _deliver_csv(emit_csv(("t", "F"),
                              list(zip(extremal.t.tolist(), extremal.F.tolist()))),
                     args.out)
    payload = {"gamma": result.gamma, "T_tilde": result.t_tilde,
               "C_amp": result.c_amp, "blowup_time": blowup,
               "bound": result.c_amp * result.t_tilde}
    print(emit_json(payload))
    return EXIT_OK


# --- verb: special --------------------------------------------------------------

def cmd_special(args) -> int:
    if args.special_action == "bessel":
        payload = {"nu": args.nu, "z": args.z,
                   "value_I": bessel_I(args.nu, args.z),
                   "value_K": bessel_K(args.nu, args.z)}
        print(emit_json(payload))
        return EXIT_OK
    if args.special_action == "phi1":
        payload = {"n": args.n, "r": args.r, "value": phi1(args.r, args.n)}
        print(emit_json(payload))
        return EXIT_OK
    # yz-check: ratio of the weighted integral to its stated power bound
    times = [math.exp(u) for u in
             _linspace(0.0, math.log(args.t_max), args.samples)]
    rows = [(t, yz_bound_ratio(args.n, args.p, t)) for t in times]
    _deliver_csv(emit_csv(("t", "ratio"), rows), args.out)
    return EXIT_OK


def _linspace(lo: float, hi: float, k: int):
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


# --- verbs: simulate / sweep / verify --------------------------------------------

def _blowup_required(config: SimConfig) -> bool:
    if config.eps == 0.0:
        return False
    try:
        return classify_regime(config).blows_up
    except (ValidationError, UnsupportedRegimeError):
        return False


def cmd_simulate(args) -> int:
    config = build_sim_config(args)
    result = run(config)
    csv_text = emit_csv(("t", "F0", "F1", "supnorm"),
                        list(zip(result.t.tolist(), result.F0.tolist(),
                                 result.F1.tolist(), result.supnorm.tolist())))
    went_to_file = _deliver_csv(csv_text, args.out)
    if went_to_file:
        payload = {"status": result.status.value, "T_est": result.T_est,
                   "steps": result.diagnostics["steps"],
                   "final_time": result.diagnostics["final_time"]}
        if "threshold_sensitivity" in result.diagnostics:
            payload["threshold_sensitivity"] = result.diagnostics["threshold_sensitivity"]
        print(emit_json(payload))
    if result.status is SimStatus.NUMERICAL_FAILURE:
        return EXIT_NUMERICAL
    if result.status is SimStatus.REACHED_TMAX and _blowup_required(config):
        print("reached t_max but the classifier predicts blow-up", file=sys.stderr)
        return EXIT_NO_BLOWUP
    return EXIT_OK


def _plot_sweep(fit, path: str) -> None:
    try:
        import matplotlib
    except ImportError:
        raise ValidationError("--plot needs matplotlib (install extra 'plot')") from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=100)
    pts = [(e, t) for e, t in zip(fit.eps_list, fit.T_list) if t is not None]
    ax.loglog([e for e, _ in pts], [t for _, t in pts], "ko", label="measured")
    lo, hi = min(fit.eps_list), max(fit.eps_list)
    anchor = pts[0][1] * (pts[0][0] ** -fit.slope)
    ax.loglog([lo, hi], [anchor * lo ** fit.slope, anchor * hi ** fit.slope],
              "k--", label=f"slope {fit.slope:.3f}")
    ax.set_xlabel("eps")
    ax.set_ylabel("T_est")
    ax.legend()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    print(f"wrote {path}", file=sys.stderr)


def cmd_sweep(args) -> int:
    config = build_sim_config(args)
    eps_list = [float(tok) for tok in args.eps_list.split(",") if tok.strip()]
    fit = sweep(config, eps_list, tolerance=args.tolerance, threads=args.threads)
    if args.out:
        rows = [(eps, t if t is not None else math.nan)
                for eps, t in zip(fit.eps_list, fit.T_list)]
        _deliver_csv(emit_csv(("eps", "T_est"), rows), args.out)
        if args.plot:
            _plot_sweep(fit, os.path.splitext(args.out)[0] + ".png")
    elif args.plot:
        raise ValidationError("--plot needs --out to name the figure file")
    payload = {"slope": fit.slope, "stderr": fit.stderr,
               "predicted": fit.predicted_exponent,
               "predicted_exponent": fit.predicted_exponent,
               "pass": fit.passed, "all_blew_up": fit.all_blew_up,
               "eps": fit.eps_list, "T_est": fit.T_list,
               "law": _law_payload(fit.law), "statuses": fit.statuses}
    print(emit_json(payload))
    if not fit.all_blew_up:
        return EXIT_NO_BLOWUP
    return EXIT_OK


def cmd_verify(args) -> int:
    config = build_sim_config(args)
    result = run(config)
    if result.status is SimStatus.NUMERICAL_FAILURE:
        print("run failed before identities could be checked", file=sys.stderr)
        return EXIT_NUMERICAL
    report = verify_identities(result, config)
    payload = {"status": result.status.value,
               "ode_residual": report.ode_residual,
               "decomposition_residual": report.decomposition_residual,
               "weighted_residual": report.weighted_residual,
               "l_positive_onset": report.l_positive_onset}
    print(emit_json(payload))
    return EXIT_OK


# --- parser assembly --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="blowuplab", formatter_class=_Formatter,
        description="Blow-up and lifespan laboratory for damped wave equations "
                    "with power nonlinearity.")
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    sub = verbs.add_parser(
        "classify", parents=[common], formatter_class=_Formatter,
        help="branch and lifespan law for one parameter point",
        description="Classify a parameter point: blow-up branch, critical "
                    "exponent, and the lifespan law.")
    sub.add_argument("--thm", required=True,
                     choices=("thm1", "cor1", "cor2", "h0", "negmass"),
                     help="result family")
    sub.add_argument("--n", type=int, default=1, help="space dimension")
    sub.add_argument("--p", type=float, required=True, help="nonlinearity exponent")
    sub.add_argument("--mu1", type=float, default=0.0, help="damping scale (thm1, h0)")
    sub.add_argument("--mu2", type=float, default=0.0, help="mass scale (thm1, h0)")
    sub.add_argument("--mu", type=float, default=0.0, help="damping scale (cor1, cor2)")
    sub.add_argument("--nu1", type=float, default=0.0, help="scattering damping (negmass)")
    sub.add_argument("--nu2", type=float, default=-1.0, help="negative mass (negmass)")
    sub.add_argument("--beta", type=float, default=2.0, help="damping decay (negmass)")
    sub.set_defaults(handler=cmd_classify)

    sub = verbs.add_parser(
        "critical", parents=[common], formatter_class=_Formatter,
        help="critical exponents and derived scales",
        description="Critical exponents and derived scales for a model family.")
    sub.add_argument("--thm", required=True,
                     choices=("thm1", "cor1", "cor2", "h0", "negmass"),
                     help="result family")
    sub.add_argument("--n", type=int, default=1, help="space dimension")
    sub.add_argument("--mu1", type=float, default=0.0, help="damping scale (thm1, h0)")
    sub.add_argument("--mu2", type=float, default=0.0, help="mass scale (thm1, h0)")
    sub.add_argument("--mu", type=float, default=0.0, help="damping scale (cor1, cor2)")
    sub.add_argument("--nu1", type=float, default=0.0, help="scattering damping (negmass)")
    sub.add_argument("--nu2", type=float, default=-1.0, help="negative mass (negmass)")
    sub.add_argument("--beta", type=float, default=2.0, help="damping decay (negmass)")
    sub.set_defaults(handler=cmd_critical)

    sub = verbs.add_parser(
        "phase-diagram", parents=[common], formatter_class=_Formatter,
        help="classify a (p, mu) window onto CSV/SVG",
        description="Sample a window of the (p, mu) or (p, sqrt(delta)) plane, "
                    "write the grid CSV, the analytic boundary polylines, and "
                    "optionally an SVG region map; --out is the file prefix.")
    sub.add_argument("--thm", required=True, choices=("cor1", "cor2", "negmass"),
                     help="diagram family")
    sub.add_argument("--n", type=int, default=1, help="space dimension")
    sub.add_argument("--p-min", type=float, default=1.01, help="left edge")
    sub.add_argument("--p-max", type=float, default=4.0, help="right edge")
    sub.add_argument("--y-min", type=float, default=0.0, help="bottom edge")
    sub.add_argument("--y-max", type=float, default=5.0, help="top edge")
    sub.add_argument("--resolution", type=int, default=200, help="grid points per axis")
    sub.add_argument("--svg", action="store_true", help="also write the SVG map")
    sub.add_argument("--plot", action="store_true",
                     help="also render a PNG figure (needs matplotlib)")
    sub.set_defaults(handler=cmd_phase_diagram)

    sub = verbs.add_parser(
        "kato", parents=[common], formatter_class=_Formatter,
        help="iteration-lemma constants, threshold, extremal run",
        description="Iteration-lemma machinery: derived constants with the "
                    "iteration trace, the threshold time alone, or the extremal "
                    "Volterra functional with its measured blow-up time.")
    sub.add_argument("kato_action", choices=("derive", "threshold", "extremal"),
                     metavar="ACTION", help="derive | threshold | extremal")
    sub.add_argument("--p", type=float, required=True, help="nonlinearity exponent")
    sub.add_argument("--a", type=float, required=True, help="growth power")
    sub.add_argument("--b", type=float, required=True, help="kernel decay power")
    sub.add_argument("--c", type=float, default=0.0, help="log power")
    sub.add_argument("--E", type=float, required=True, help="data-size factor")
    sub.add_argument("--A", type=float, default=1.0, help="lower-bound amplitude")
    sub.add_argument("--B", type=float, default=1.0, help="integral kernel constant")
    sub.add_argument("--j-max", type=int, default=12, help="trace length")
    sub.set_defaults(handler=cmd_kato)

    sub = verbs.add_parser(
        "special", parents=[common], formatter_class=_Formatter,
        help="Bessel and test-function probes",
        description="Special-function probes: modified Bessel values, the "
                    "growing eigenfunction, and the decaying-integral ratio "
                    "series (CSV t,ratio).")
    sub.add_argument("special_action", choices=("bessel", "phi1", "yz-check"),
                     metavar="ACTION", help="bessel | phi1 | yz-check")
    sub.add_argument("--nu", type=float, default=0.0, help="Bessel order")
    sub.add_argument("--z", type=float, default=1.0, help="Bessel argument")
    sub.add_argument("--n", type=int, default=1, help="space dimension")
    sub.add_argument("--r", type=float, default=1.0, help="radius")
    sub.add_argument("--p", type=float, default=2.0, help="nonlinearity exponent")
    sub.add_argument("--t-max", type=float, default=100.0, help="largest time")
    sub.add_argument("--samples", type=int, default=33, help="time samples")
    sub.set_defaults(handler=cmd_special)

    sub = verbs.add_parser(
        "simulate", parents=[common], formatter_class=_Formatter,
        help="integrate one configuration (CSV t,F0,F1,supnorm)",
        description="Integrate one configuration and emit the functional "
                    "series as CSV; with --out, a JSON summary goes to stdout. "
                    "Exit 4 if t_max is reached where blow-up was predicted.")
    _add_model_flags(sub)
    sub.set_defaults(handler=cmd_simulate)

    sub = verbs.add_parser(
        "sweep", parents=[common], formatter_class=_Formatter,
        help="lifespan-exponent fit over a geometric eps grid",
        description="Run a decreasing geometric eps grid, fit ln T against "
                    "ln eps, and compare with the classifier prediction. "
                    "CSV eps,T_est goes to --out; the fit report to stdout.")
    _add_model_flags(sub)
    sub.add_argument("--eps-list", default="0.2,0.1,0.05,0.025",
                     help="comma-separated decreasing eps grid")
    sub.add_argument("--tolerance", type=float, default=0.2,
                     help="slope acceptance tolerance")
    sub.add_argument("--plot", action="store_true",
                     help="also render a PNG fit figure next to --out")
    sub.set_defaults(handler=cmd_sweep)

    sub = verbs.add_parser(
        "verify", parents=[common], formatter_class=_Formatter,
        help="integrate and check the averaged-dynamics identities",
        description="Integrate one configuration and report the relative "
                    "residuals of the averaged-dynamics identities.")
    _add_model_flags(sub)
    sub.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads >= 1:
        os.environ["BLOWUPLAB_THREADS"] = str(args.threads)
    try:
        return args.handler(args)
    except (ValidationError, UnsupportedRegimeError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

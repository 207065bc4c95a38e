"""Command-line front end.

Every subcommand is a thin call into the library followed by
:func:`elasticbit.tables.emit_table`.  Exit status: 0 success, 1
computation or I/O failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import analysis, berry, dynamics, gates, steadystate
from .exceptions import ElasticBitError
from .model import MaterialSpec, SystemParams, eigenfrequencies
from .tables import emit_table

log = logging.getLogger("elasticbit")

DEFAULTS = {
    "m": 1.0,
    "k": 1.0,
    "eta": 0.003,
    "omega": math.sqrt(2.0),
    "eps": 0.5,
    "delta": 0.0,
    "steps": 4096,
    "delta_points": 101,
    "omega_points": 41,
    "eps_points": 101,
    "sweep_steps": 512,
    "model": "linear",
    "t_end": 100.0,
    "force_scale": 1.0,
    "stride": 1,
    "cycles": 20,
    "format": None,
}

ANGLE_COLUMNS = {
    "delta", "theta", "phi", "phi_m1_m2", "phi_m1_d1", "theta_in", "phi_in",
    "theta_out", "phi_out", "gamma_discrete", "gamma_analytic", "gamma_abs",
}


class UsageError(Exception):
    pass


class Settings:
    """Resolved option values: command-line flag, then config file, then default."""

    def __init__(self, args, config):
        self._args = args
        self._config = config

    def __getattr__(self, name):
        value = getattr(self._args, name, None)
        if value is None:
            value = self._config.get(name)
        if value is None:
            value = DEFAULTS.get(name)
        return value


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    for key, value in cfg.items():
        if isinstance(value, dict) and key != "material":
            raise UsageError(f"config key {key!r}: only 'material' may be nested")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def _system(s: Settings) -> SystemParams:
    material = s._config.get("material")
    knl = s.knl
    sigma0 = s.sigma0
    flags_given = s._args.m is not None or s._args.k is not None
    if material is not None and not flags_given:
        try:
            mat = MaterialSpec(**material)
        except TypeError as exc:
            raise UsageError(f"bad material block: {exc}") from exc
        return SystemParams.from_material(mat, eta=s.eta)
    if sigma0 is not None:
        if knl is None:
            knl = s.k / (1.5 * math.sqrt(sigma0))
        return SystemParams.from_hertz(knl, sigma0, m=s.m, eta=s.eta)
    return SystemParams(m=s.m, k_l=s.k, eta=s.eta)


def _params_dict(p: SystemParams, **extra):
    d = {"m": p.m, "k_l": p.k_l, "eta": p.eta}
    if p.has_hertz:
        d.update(k_nl=p.k_nl, sigma0=p.sigma0)
    d.update(extra)
    return d


def _emit(s: Settings, header, rows, params, default_fmt="csv"):
    fmt = s.format or default_fmt
    if s.degrees:
        idx = [i for i, h in enumerate(header) if h in ANGLE_COLUMNS]
        rows = [
            [math.degrees(v) if i in idx and isinstance(v, float) else v for i, v in enumerate(r)]
            for r in rows
        ]
    emit_table(rows, header, fmt, s.output, params)


def _check_eps(eps):
    if not 0.0 <= eps <= 1.0:
        raise UsageError(f"--eps must satisfy 0 <= eps <= 1, got {eps}")


def _check_omega(omega):
    if not (omega > 0 and math.isfinite(omega)):
        raise UsageError(f"--omega must be finite and > 0, got {omega}")


def _check_delta(delta):
    if not -math.pi <= delta <= math.pi:
        raise UsageError(f"--delta must satisfy -pi <= delta <= pi, got {delta}")


def cmd_eig(s):
    p = _system(s)
    e = eigenfrequencies(p)
    _emit(s, ["omega01", "omega02"], [[e.omega01, e.omega02]], _params_dict(p))


def cmd_steady(s):
    p = _system(s)
    _check_eps(s.eps)
    _check_omega(s.omega)
    if s.delta_points < 1:
        raise UsageError("--delta-points must be >= 1")
    deltas = np.linspace(-math.pi, math.pi, int(s.delta_points))
    table = analysis.response_table(p, s.omega, s.eps, deltas)
    _emit(
        s,
        ["delta", "abs_a1", "abs_a2", "phi_m1_m2", "phi_m1_d1"],
        table.tolist(),
        _params_dict(p, omega_d=s.omega, eps=s.eps),
    )


def cmd_bloch(s):
    p = _system(s)
    _check_eps(s.eps)
    _check_delta(s.delta)
    _check_omega(s.omega)
    drive = steadystate.DriveSpec(s.eps, s.delta, s.omega)
    state, ang = steadystate.bloch_state(p, drive)
    row = [s.eps, s.delta, s.omega, ang.theta, ang.phi, abs(state.alpha), abs(state.beta)]
    _emit(
        s,
        ["eps", "delta", "omega_d", "theta", "phi", "abs_alpha", "abs_beta"],
        [row],
        _params_dict(p),
    )


def cmd_gate(s):
    p = _system(s)
    _check_omega(s.omega)
    if s.theta is not None or s.phi is not None:
        theta = s.theta if s.theta is not None else 0.0
        if not 0.0 <= theta <= math.pi:
            raise UsageError(f"--theta must satisfy 0 <= theta <= pi, got {theta}")
        state = steadystate.state_from_angles(theta, s.phi or 0.0)
    else:
        _check_eps(s.eps)
        _check_delta(s.delta)
        state, _ = steadystate.bloch_state(p, steadystate.DriveSpec(s.eps, s.delta, s.omega))
    name = s.name
    gate = gates.PhaseShift(s.shift) if name.lower() == "phase" else name
    try:
        gates.gate_matrix(gate)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    before = steadystate.bloch_angles(state)
    after = steadystate.bloch_angles(gates.apply_gate(gate, state))
    eps, delta = gates.gate_as_drive(gate, state, p, s.omega)
    _emit(
        s,
        ["gate", "theta_in", "phi_in", "theta_out", "phi_out", "eps", "delta"],
        [[name.upper(), before.theta, before.phi, after.theta, after.phi, float(eps), float(delta)]],
        _params_dict(p, omega_d=s.omega),
    )


def cmd_berry(s):
    p = _system(s)
    _check_eps(s.eps)
    _check_omega(s.omega)
    if s.steps < 8:
        raise UsageError(f"--steps must be >= 8, got {s.steps}")
    r = berry.berry_phase_loop(p, berry.LoopSpec(s.eps, s.omega, int(s.steps)))
    _emit(
        s,
        ["omega_d", "eps", "gamma_discrete", "gamma_analytic", "theta", "winding", "n_steps"],
        [[s.omega, s.eps, r.gamma_discrete, r.gamma_analytic, r.theta, r.winding, r.n_steps]],
        _params_dict(p),
        default_fmt="json",
    )


def _jobs(s):
    jobs = s.jobs
    if jobs is None:
        env = os.environ.get("ELASTICBIT_JOBS")
        if env:
            try:
                jobs = int(env)
            except ValueError as exc:
                raise UsageError(f"ELASTICBIT_JOBS must be an integer, got {env!r}") from exc
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return jobs


def _omega_grid(s, eig):
    lo = s.omega_min if s.omega_min is not None else eig.omega01
    hi = s.omega_max if s.omega_max is not None else eig.omega02
    n = int(s.omega_points)
    if n < 1:
        raise UsageError("--omega-points must be >= 1")
    if not eig.omega01 <= lo < hi <= eig.omega02:
        raise UsageError(
            f"frequency range must lie within [{eig.omega01}, {eig.omega02}], got [{lo}, {hi}]"
        )
    grid = np.linspace(lo, hi, n + 2)[1:-1]
    return grid


def cmd_berry_sweep(s):
    p = _system(s)
    eig = eigenfrequencies(p)
    omegas = _omega_grid(s, eig)
    if s.eps_points < 1:
        raise UsageError("--eps-points must be >= 1")
    eps = np.linspace(0.0, 1.0, int(s.eps_points))
    res = berry.berry_sweep(p, omegas, eps, int(s.sweep_steps), jobs=_jobs(s))
    for (i, j), msg in sorted(res.errors.items()):
        print(f"warning: cell omega={omegas[i]:g} eps={eps[j]:g}: {msg}", file=sys.stderr)
    _emit(
        s,
        ["omega_d", "eps", "gamma_abs"],
        [list(r) for r in res.rows()],
        _params_dict(p, n_steps=int(s.sweep_steps)),
    )


def cmd_transition(s):
    p = _system(s)
    eig = eigenfrequencies(p)
    omegas = _omega_grid(s, eig)
    rows = [[float(w), berry.transition_eps(float(w), eig)] for w in omegas]
    _emit(s, ["omega_d", "eps_star"], rows, _params_dict(p))


def _drive(s):
    _check_eps(s.eps)
    _check_delta(s.delta)
    _check_omega(s.omega)
    return steadystate.DriveSpec(s.eps, s.delta, s.omega)


def cmd_simulate(s):
    p = _system(s)
    drive = _drive(s)
    dt = s.dt if s.dt is not None else dynamics.default_dt(s.omega)
    cfg = dynamics.IntegratorConfig(
        model=s.model, dt=dt, t_end=s.t_end, force_scale=s.force_scale,
        initial=tuple(s.initial) if s.initial is not None else (0.0, 0.0, 0.0, 0.0),
    )
    if s.stride < 1:
        raise UsageError("--stride must be >= 1")
    ts = dynamics.integrate(p, drive, cfg)
    rows = ts.samples[:: int(s.stride)].tolist()
    _emit(
        s,
        ["t", "u1", "v1", "u2", "v2"],
        rows,
        _params_dict(p, omega_d=s.omega, eps=s.eps, delta=s.delta, dt=dt, model=s.model),
    )


def cmd_validate(s):
    """Compare analytic, linear time-domain and nonlinear time-domain amplitudes."""
    p = _system(s)
    drive = _drive(s)
    if not p.eta > 0:
        raise UsageError("validate needs --eta > 0 so that transients decay")
    analytic = steadystate.steady_amplitudes(p, drive)
    ref = np.array([analytic.a1, analytic.a2])
    dt = s.dt if s.dt is not None else dynamics.default_dt(s.omega)
    period = 2.0 * math.pi / s.omega
    t_end = s._args.t_end or s._config.get("t_end")
    if t_end is None:
        t_end = dynamics.transient_cut(p) + (s.cycles + 2) * period
    rows = [["analytic", ref[0].real, ref[0].imag, ref[1].real, ref[1].imag, 0.0]]
    sigma0 = s.sigma0 if s.sigma0 is not None else 1.0
    knl = p.k_l / (1.5 * math.sqrt(sigma0))
    # drive scaled so the response stays far below the pre-compression
    scale = s._args.force_scale or 1e-4 * sigma0
    hertz = SystemParams.from_hertz(knl, sigma0, m=p.m, eta=p.eta)
    for model, params, fs in (("linear", p, 1.0), ("nonlinear", hertz, scale)):
        cfg = dynamics.IntegratorConfig(model=model, dt=dt, t_end=t_end, force_scale=fs)
        amps = dynamics.extract_steady(
            dynamics.integrate(params, drive, cfg), s.omega, int(s.cycles),
            t_min=dynamics.transient_cut(p),
        )
        got = np.array([amps.a1, amps.a2]) / fs
        err = float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))
        rows.append([model, got[0].real, got[0].imag, got[1].real, got[1].imag, err])
    _emit(
        s,
        ["source", "re_a1", "im_a1", "re_a2", "im_a2", "rel_error"],
        rows,
        _params_dict(p, omega_d=s.omega, eps=s.eps, delta=s.delta, dt=dt, t_end=t_end),
    )


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("system")
    g.add_argument("--m", type=float, help="granule mass (default 1)")
    g.add_argument("--k", type=float, help="linear coupling stiffness k_L (default 1)")
    g.add_argument("--eta", type=float, help="damping coefficient (default 0.003)")
    g.add_argument("--knl", type=float, help="Hertz stiffness k_NL (needs --sigma0)")
    g.add_argument("--sigma0", type=float, help="static pre-compression overlap")
    g.add_argument("--config", help="JSON file of flag values; flags win")
    o = common.add_argument_group("output")
    o.add_argument("-o", "--output", help="output path (default: stdout)")
    o.add_argument("--format", choices=["csv", "json"])
    o.add_argument("--degrees", action="store_true", help="emit angles in degrees")
    o.add_argument("-v", "--verbose", action="store_true")

    def drive_args(sp, delta=True):
        sp.add_argument("--omega", type=float, help="driving frequency (default sqrt 2)")
        sp.add_argument("--eps", type=float, help="mixing ratio in [0, 1] (default 0.5)")
        if delta:
            sp.add_argument("--delta", type=float, help="driver phase offset (default 0)")

    parser = argparse.ArgumentParser(
        prog="elasticbit",
        description="Steady states, Bloch angles, gates and Berry phase of a driven elastic bit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eig", parents=[common], help="eigenmode frequencies")
    sp.set_defaults(func=cmd_eig)

    sp = sub.add_parser("steady", parents=[common], help="amplitude/phase table over delta")
    drive_args(sp, delta=False)
    sp.add_argument("--delta-points", type=int, help="grid size over [-pi, pi] (default 101)")
    sp.set_defaults(func=cmd_steady)

    sp = sub.add_parser("bloch", parents=[common], help="Bloch angles of one drive point")
    drive_args(sp)
    sp.set_defaults(func=cmd_bloch)

    sp = sub.add_parser("gate", parents=[common], help="apply a gate and give its realizing drive")
    drive_args(sp)
    sp.add_argument("--name", required=True, help="I, X, Y, Z, H, S, T or 'phase'")
    sp.add_argument("--shift", type=float, default=0.0, help="phase for --name phase")
    sp.add_argument("--theta", type=float, help="input state polar angle (instead of a drive)")
    sp.add_argument("--phi", type=float, help="input state azimuth")
    sp.set_defaults(func=cmd_gate)

    sp = sub.add_parser("berry", parents=[common], help="Berry phase of one delta loop")
    drive_args(sp, delta=False)
    sp.add_argument("--steps", type=int, help="loop discretization (default 4096)")
    sp.set_defaults(func=cmd_berry)

    for name, func, hlp in (
        ("berry-sweep", cmd_berry_sweep, "Berry phase surface over (omega, eps)"),
        ("transition", cmd_transition, "transition ratio eps* versus omega"),
    ):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("--omega-min", type=float)
        sp.add_argument("--omega-max", type=float)
        sp.add_argument("--omega-points", type=int, help="interior frequencies (default 41)")
        if name == "berry-sweep":
            sp.add_argument("--eps-points", type=int, help="grid over [0, 1] (default 101)")
            sp.add_argument("--steps", dest="sweep_steps", type=int, help="loop size (default 512)")
            sp.add_argument("--jobs", type=int, help="worker processes (env ELASTICBIT_JOBS)")
        sp.set_defaults(func=func)

    for name, func, hlp in (
        ("simulate", cmd_simulate, "time-domain trajectory"),
        ("validate", cmd_validate, "time-domain versus analytic amplitudes"),
    ):
        sp = sub.add_parser(name, parents=[common], help=hlp)
        drive_args(sp)
        sp.add_argument("--dt", type=float, help="time step (default min(0.005, T/200))")
        sp.add_argument("--t-end", type=float)
        sp.add_argument("--force-scale", type=float)
        if name == "simulate":
            sp.add_argument("--model", choices=["linear", "nonlinear"])
            sp.add_argument("--stride", type=int, help="keep every n-th sample")
            sp.add_argument("--initial", type=float, nargs=4, metavar=("U1", "V1", "U2", "V2"))
        else:
            sp.add_argument("--cycles", type=int, help="projection window in periods (default 20)")
        sp.set_defaults(func=func)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        settings = Settings(args, _load_config(args.config))
        args.func(settings)
    except (UsageError, ValueError) as exc:
        print(f"elasticbit {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ElasticBitError, OSError) as exc:
        print(f"elasticbit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

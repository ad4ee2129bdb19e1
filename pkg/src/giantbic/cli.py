"""Command-line front end.

    giantbic concurrence-map --out conc.dsv
    giantbic fidelity-map --set fidelity_map.varphi=pi/2 --out fid.dsv
    giantbic rates-map --set rates_map.n2=1 --workers 4 --out rates.dsv
    giantbic dynamics --engine ed --initial bell-plus --tmax 400 --out dyn.dsv
    giantbic bic-find --set geometry.n2=6 --out bic.dsv

Exit codes: 0 success, 2 configuration error, 3 numerical backend error,
4 invalid physical regime (out-of-band Omega, band-edge k*).
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from . import config as cfgmod
from .config import SweepSpec, parse_number
from .dynamics import (
    SingleExcitationState,
    build_hamiltonian,
    detuned_case,
    diagonalize,
    evolve_ed,
    evolve_volterra_coupled,
    markov_trajectory,
)
from .entanglement import (
    best_phi,
    bic_state,
    concurrence_closed_form,
    fidelity_to_phi,
    reduced_atomic_density,
    wootters_concurrence,
)
from .errors import ConfigError, GiantBicError, NumericalBackendError, OutOfBandError
from .export import FORMATS, append_manifest, render_table, sibling, write_text
from .model import Geometry, ModelParams
from .spectral import decay_rate_continuum, find_bic, on_shell_dark_state, robust_bic_check

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_REGIME = 0, 2, 3, 4
ENGINES = ("ed", "volterra", "markov")


def parallel_map(fn, items, workers: int = 1) -> list:
    """Order-preserving map over a process pool; ``workers <= 1`` runs inline."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


# --- concurrence map -------------------------------------------------------

def concurrence_map(lambdas) -> tuple[list, list]:
    """Rows ``(lambda, C)``; non-positive ratios become diagnostics instead of rows."""
    rows, notes = [], []
    for lam in lambdas:
        lam = float(lam)
        if not lam > 0:
            notes.append(f"rejected lambda={lam!r}: ratio must be positive")
            continue
        rows.append((lam, float(concurrence_closed_form(lam))))
    return rows, notes


# --- fidelity map ----------------------------------------------------------

def _fidelity_ring(lam: float, thetas, varphi: float) -> list:
    out = []
    for theta in thetas:
        F = fidelity_to_phi(bic_state(lam, theta), varphi)
        out.append((lam, theta, lam * np.cos(theta), lam * np.sin(theta), F))
    return out


def fidelity_map(lambdas, thetas, varphi: float, workers: int = 1) -> list:
    """Rows ``(lambda, theta, x, y, F)`` with ``theta = k* dx`` and ``(x, y) = lambda (cos, sin) theta``."""
    thetas = [float(t) for t in thetas]
    rings = parallel_map(partial(_fidelity_ring, thetas=thetas, varphi=float(varphi)),
                         [float(v) for v in lambdas], workers)
    return [row for ring in rings for row in ring]


def iso_contours(rows, levels) -> list:
    """Points ``(level, lambda, theta, x, y)`` where ``F`` crosses ``level`` along each ring.

    Crossings are located by linear interpolation between neighbouring
    ``theta`` samples; the ``theta`` axis is treated as periodic.
    """
    rings: dict[float, list] = {}
    for lam, theta, _, _, F in rows:
        rings.setdefault(lam, []).append((theta, F))
    out = []
    for level in levels:
        level = float(level)
        for lam, samples in rings.items():
            samples = sorted(samples)
            th = [s[0] for s in samples] + [samples[0][0] + 2 * np.pi]
            fv = [s[1] for s in samples] + [samples[0][1]]
            for j in range(len(samples)):
                a, b = fv[j] - level, fv[j + 1] - level
                if a == 0.0:
                    t = th[j]
                elif a * b < 0.0:
                    t = th[j] + (th[j + 1] - th[j]) * a / (a - b)
                else:
                    continue
                t = float(np.mod(t, 2 * np.pi))
                out.append((level, lam, t, lam * np.cos(t), lam * np.sin(t)))
    return out


# --- rates map -------------------------------------------------------------

def _rates_ring(lam: float, thetas, n2: float, kstar: float, p: ModelParams) -> list:
    out = []
    for theta in thetas:
        geom = Geometry.from_ratio(lam, theta, kstar, n2=n2)
        gp = decay_rate_continuum(p.Omega, 1, p, geom) / p.xi
        gm = decay_rate_continuum(p.Omega, -1, p, geom) / p.xi
        out.append((lam, theta, lam * np.cos(theta), lam * np.sin(theta), gp, gm))
    return out


def rates_map(lambdas, thetas, n2: float, kstar: float, p: ModelParams, workers: int = 1) -> list:
    """Rows ``(lambda, theta, x, y, Gamma+/xi, Gamma-/xi)`` at the frequency resonant with ``kstar``.

    The geometry is ``n1 = lambda n2``, ``dx = theta / kstar``.
    """
    if not 0.0 < kstar < np.pi:
        raise OutOfBandError(f"kstar={kstar} is at or beyond the band edge")
    p = p.replace(Omega=p.omega_c - 2.0 * p.xi * np.cos(kstar))
    thetas = [float(t) for t in thetas]
    rings = parallel_map(partial(_rates_ring, thetas=thetas, n2=float(n2), kstar=float(kstar), p=p),
                         [float(v) for v in lambdas], workers)
    return [row for ring in rings for row in ring]


# --- dynamics --------------------------------------------------------------

def initial_amplitudes(spec: str, p: ModelParams, geom: Geometry) -> tuple[complex, complex]:
    """Atomic amplitudes from ``bic``, ``bell-plus``, ``bell-minus``, ``bic:<lam>,<phi>`` or ``amplitudes:<c1>,<c2>``."""
    spec = str(spec).strip()
    r = 1 / np.sqrt(2)
    if spec == "bell-plus":
        return complex(r), complex(r)
    if spec == "bell-minus":
        return complex(r), complex(-r)
    if spec == "bic":
        psi = bic_state(geom.lam, p.k_star * geom.dx)
        return complex(psi[1]), complex(psi[2])
    try:
        if spec.startswith("bic:"):
            lam, phi = spec[4:].split(",")
            psi = bic_state(parse_number(lam), parse_number(phi))
            return complex(psi[1]), complex(psi[2])
        if spec.startswith("amplitudes:"):
            c1, c2 = (complex(s.replace(" ", "")) for s in spec[11:].split(","))
            norm = abs(c1) ** 2 + abs(c2) ** 2
            if abs(norm - 1.0) > 1e-10:
                raise ConfigError(f"custom amplitudes must be normalized, |c1|^2+|c2|^2={norm}")
            return c1, c2
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid initial state {spec!r}: {exc}") from exc
    raise ConfigError(f"invalid initial state {spec!r}")


def run_dynamics(p: ModelParams, geom: Geometry, c1: complex, c2: complex, *, engine: str,
                 tmax: float, output_dt: float, dt: float):
    """Interaction-picture trajectory from one engine on the output grid ``0, output_dt, ..., tmax``."""
    if engine not in ENGINES:
        raise ConfigError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    if not (output_dt > 0 and tmax >= 0 and dt > 0):
        raise ConfigError("tmax must be >= 0 and dt, output_dt > 0")
    n_out = int(round(tmax / output_dt))
    times = output_dt * np.arange(n_out + 1)
    if engine == "ed":
        eig = diagonalize(build_hamiltonian(p, geom))
        return evolve_ed(eig, SingleExcitationState.atomic(c1, c2, p.N_c), times).rotated(p.Omega)
    if engine == "markov":
        return markov_trajectory(c1, c2, times, p, geom)
    stride = output_dt / dt
    if abs(stride - round(stride)) > 1e-9 * stride:
        raise ConfigError(f"output_dt={output_dt} must be a multiple of dt={dt}")
    stride = int(round(stride))
    traj = evolve_volterra_coupled(c1, c2, n_out * output_dt, dt, p, geom)
    sel = slice(None, None, stride)
    return type(traj)(times, traj.c1[sel], traj.c2[sel])


def dynamics_rows(traj) -> list:
    cp, cm = traj.c_plus, traj.c_minus
    conc, leak = traj.concurrence, traj.norm_leak
    return [
        (traj.times[i], cp[i].real, cp[i].imag, cm[i].real, cm[i].imag, conc[i], leak[i])
        for i in range(traj.times.size)
    ]


# --- bic-find --------------------------------------------------------------

def bic_report(p: ModelParams, geom: Geometry, kstar: float | None = None) -> tuple[list, list]:
    """Per-channel BIC rows plus notes on the robust condition and the on-shell dark state."""
    k = p.k_star if kstar is None else kstar
    notes = [f"k_star = {k!r}"]
    robust_all = True
    for i, n in ((1, geom.n1), (2, geom.n2)):
        chk = robust_bic_check(k, n)
        robust_all &= chk.holds
        notes.append(f"robust condition atom {i} (n={n!r}): "
                     + (f"holds, ell={chk.ell}" if chk.holds else "fails"))
    if not robust_all:
        notes.append("no robust BIC: the form factor does not vanish for both atoms")
    dark = on_shell_dark_state(k, p, geom)
    notes.append("on-shell dark state: none" if dark is None else
                 f"on-shell dark state: c1={dark[0]!r}, c2={dark[1]!r}, "
                 f"concurrence={float(2 * abs(dark[0] * np.conj(dark[1])))!r}")
    rows = []
    for channel in ("+", "-"):
        for sol in find_bic(channel, p, geom):
            c1, c2 = sol.amplitudes
            conc = wootters_concurrence(reduced_atomic_density(c1, c2))
            rows.append((channel, sol.energy, sol.residual_gamma, sol.band_edge, sol.k_star, sol.robust,
                         c1.real, c1.imag, c2.real, c2.imag, conc, best_phi(c1, c2)))
    if not rows:
        notes.append("no in-band BIC found in either channel")
    return rows, notes


# --- argument handling -----------------------------------------------------

def _axis(section: dict, name: str, parameter: str, spacing: str = "linear", endpoint: bool = True) -> SweepSpec:
    return SweepSpec(parameter, parse_number(section[f"{name}_min"]), parse_number(section[f"{name}_max"]),
                     int(section[f"{name}_count"]), spacing, endpoint=endpoint)


def _theta_axis(count: int) -> np.ndarray:
    return SweepSpec("theta", 0.0, 2 * np.pi, int(count), endpoint=False).values()


def _resolved(cfg: dict, *sections: str) -> dict:
    return {name: cfg[name] for name in ("model", "geometry") + sections}


def _emit(args, command: str, tables: list, parameters: dict, started: float) -> None:
    """Write ``(tag, columns, units, rows, notes)`` tables; the first goes to ``--out``."""
    outputs = {}
    for i, (tag, columns, units, rows, notes) in enumerate(tables):
        text = render_table(command, columns, units, rows, fmt=args.format, parameters=parameters, notes=notes)
        target = args.out if i == 0 or args.out in (None, "-") else sibling(args.out, tag)
        digest = write_text(target, text)
        if target not in (None, "-"):
            outputs[str(target)] = digest
    if outputs:
        append_manifest(args.out, command=command, parameters=parameters,
                        duration=time.perf_counter() - started, outputs=outputs)


def cmd_concurrence_map(args, cfg) -> None:
    started = time.perf_counter()
    sec = cfg["concurrence_map"]
    if sec["values"] is not None:
        lambdas = [parse_number(v) for v in sec["values"]]
    else:
        lambdas = SweepSpec("lambda", parse_number(sec["lambda_min"]), parse_number(sec["lambda_max"]),
                            int(sec["count"]), "log").values()
    rows, notes = concurrence_map(lambdas)
    for note in notes:
        print(note, file=sys.stderr)
    _emit(args, "concurrence-map", [("main", ["lambda", "concurrence"], ["1", "1"], rows, notes)],
          {"concurrence_map": sec}, started)


def cmd_fidelity_map(args, cfg) -> None:
    started = time.perf_counter()
    sec = cfg["fidelity_map"]
    lambdas = _axis(sec, "lambda", "lambda").values()
    rows = fidelity_map(lambdas, _theta_axis(sec["theta_count"]), parse_number(sec["varphi"]), args.workers)
    contours = iso_contours(rows, [parse_number(v) for v in sec["levels"]])
    _emit(args, "fidelity-map", [
        ("main", ["lambda", "theta", "x", "y", "fidelity"], ["1", "rad", "1", "1", "1"], rows, []),
        ("contours", ["level", "lambda", "theta", "x", "y"], ["1", "1", "rad", "1", "1"], contours, []),
    ], {"fidelity_map": sec}, started)


def cmd_rates_map(args, cfg) -> None:
    started = time.perf_counter()
    sec = cfg["rates_map"]
    p = cfgmod.model_params(cfg)
    rows = rates_map(_axis(sec, "lambda", "lambda").values(), _theta_axis(sec["theta_count"]),
                     parse_number(sec["n2"]), parse_number(sec["kstar"]), p, args.workers)
    _emit(args, "rates-map", [("main", ["lambda", "theta", "x", "y", "gamma_plus", "gamma_minus"],
                               ["1", "rad", "1", "1", "xi", "xi"], rows, [])],
          _resolved(cfg, "rates_map"), started)


def cmd_dynamics(args, cfg) -> None:
    started = time.perf_counter()
    sec = cfg["dynamics"]
    p, geom = cfgmod.model_params(cfg), cfgmod.geometry(cfg)
    c1, c2 = initial_amplitudes(sec["initial"], p, geom)
    if sec["detuning"] is not None:
        # the protocol's initial state only replaces the default "bic" choice
        p, geom, bic_amps = detuned_case(sec["detuning"], p, geom, parse_number(sec["detuning_factor"]))
        if str(sec["initial"]).strip() == "bic":
            c1, c2 = bic_amps
    traj = run_dynamics(p, geom, c1, c2, engine=sec["engine"], tmax=parse_number(sec["tmax"]),
                        output_dt=parse_number(sec["output_dt"]), dt=parse_number(sec["dt"]))
    columns = ["t", "re_c_plus", "im_c_plus", "re_c_minus", "im_c_minus", "concurrence", "norm_leak"]
    units = ["1/xi", "1", "1", "1", "1", "1", "1"]
    _emit(args, "dynamics", [("main", columns, units, dynamics_rows(traj), [f"engine: {sec['engine']}"])],
          _resolved(cfg, "dynamics"), started)


def cmd_bic_find(args, cfg) -> None:
    started = time.perf_counter()
    p, geom = cfgmod.model_params(cfg), cfgmod.geometry(cfg)
    kstar = cfg["bic_find"]["kstar"]
    rows, notes = bic_report(p, geom, None if kstar is None else parse_number(kstar))
    columns = ["channel", "energy", "residual_gamma", "band_edge", "k_star", "robust",
               "re_c1", "im_c1", "re_c2", "im_c2", "concurrence", "best_phi"]
    units = ["-", "xi", "xi", "-", "rad", "-", "1", "1", "1", "1", "1", "rad"]
    _emit(args, "bic-find", [("main", columns, units, rows, notes)], _resolved(cfg, "bic_find"), started)


COMMANDS = {
    "concurrence-map": cmd_concurrence_map,
    "fidelity-map": cmd_fidelity_map,
    "rates-map": cmd_rates_map,
    "dynamics": cmd_dynamics,
    "bic-find": cmd_bic_find,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="giantbic", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")
        sp.add_argument("--format", choices=FORMATS, default="dsv")
        sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--config", default=None, help="YAML/JSON configuration file")
        sp.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override, e.g. --set model.g=0.1 (repeatable)")
        if name == "dynamics":
            sp.add_argument("--engine", choices=ENGINES)
            sp.add_argument("--tmax", type=float)
            sp.add_argument("--dt", type=float)
            sp.add_argument("--initial", help="bic | bell-plus | bell-minus | bic:<lambda>,<phi> | amplitudes:<c1>,<c2>")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = list(args.overrides)
        for key in ("engine", "tmax", "dt", "initial"):
            value = getattr(args, key, None)
            if value is not None:
                overrides.append(f"dynamics.{key}={value}")
        cfg = cfgmod.load_config(args.config, overrides)
        COMMANDS[args.command](args, cfg)
    except OutOfBandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except NumericalBackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (GiantBicError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

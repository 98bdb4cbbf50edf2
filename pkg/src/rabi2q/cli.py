"""Command-line front end.

Commands: spectrum, dynamics, perturb, rwa-compare, eigenstate.  All physics
parameters arrive via flags (or an optional key=value config file; flags
win), energies are in units of the field frequency, and every CSV starts
with a comment line carrying the tool version, the command and a hash of the
resolved configuration so identical configs produce byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical/truncation
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

import numpy as np

from . import __version__, dynamics, eigenstates, spectra
from ._svg import Panel, Series, render
from .errors import ConfigError, Rabi2qError, SmallDenominator
from .model import ModelParams, Parity, QubitLevel, TruncationConfig
from .numerics import eigh
from .hamiltonian import build_parity_matrix

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _config_hash(command: str, resolved: dict) -> str:
    skip = {"out", "svg", "config", "jobs"}
    parts = [f"{k}={_fmt(v)}" for k, v in sorted(resolved.items())
             if k not in skip and v is not None]
    digest = hashlib.sha256(";".join(parts).encode()).hexdigest()
    return digest[:12]


def _write_csv(path, command, cfg_hash, header, rows):
    lines = [f"# rabi2q {__version__} {command} {cfg_hash}",
             ",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _parse_range(text: str) -> np.ndarray:
    """Coupling value or start:stop:step range."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ConfigError(f"expected VALUE or START:STOP:STEP, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if stop < start:
        raise ConfigError("range STOP must be >= START")
    if stop == start:
        return np.array([start])
    if step <= 0:
        raise ConfigError("range STEP must be positive")
    count = int(round((stop - start) / step)) + 1
    return np.round(start + step * np.arange(count), 12)


_QUBITS = {"g": QubitLevel.G, "e": QubitLevel.E}


def _parse_qubits(text: str):
    if len(text) != 2 or any(c not in _QUBITS for c in text):
        raise ConfigError(f"--qubits must be two of 'g'/'e', got {text!r}")
    return _QUBITS[text[0]], _QUBITS[text[1]]


def _add_common(parser: argparse.ArgumentParser, couplings: str = "value"):
    parser.add_argument("--omega1", type=float, default=1.0,
                        help="qubit-1 frequency in units of omega_f")
    parser.add_argument("--omega2", type=float, default=1.0,
                        help="qubit-2 frequency in units of omega_f")
    if couplings == "range":
        parser.add_argument("--g1", type=str, default="0",
                            help="coupling 1: VALUE or START:STOP:STEP")
        parser.add_argument("--g2", type=str, default="0",
                            help="coupling 2: VALUE or START:STOP:STEP")
        parser.add_argument("--lock", type=str, default=None,
                            help="tie couplings together: g2=g1 or g1=g2")
    else:
        parser.add_argument("--g1", type=float, default=0.0)
        parser.add_argument("--g2", type=float, default=0.0)
    parser.add_argument("--omega-f", type=float, default=1.0, dest="omega_f",
                        help="display unit: energies are multiplied by this "
                             "on output (internal computations are unitless)")
    parser.add_argument("--nmax", type=int, default=300,
                        help="photon-number cutoff")
    parser.add_argument("--config", type=str, default=None,
                        help="key=value file with defaults; flags win")
    parser.add_argument("--out", type=str, default=None,
                        help="CSV output path (stdout if omitted)")
    parser.add_argument("--svg", type=str, default=None,
                        help="optional SVG plot path")
    parser.add_argument("--seed", type=str, default=None,
                        help=argparse.SUPPRESS)


def _reject_seed(args):
    if args.seed is not None:
        raise ConfigError("--seed is rejected: this tool is deterministic "
                          "and accepts no random seed")


def _model(args) -> ModelParams:
    try:
        return ModelParams(args.omega1, args.omega2,
                           float(args.g1), float(args.g2))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    _reject_seed(args)
    g1 = _parse_range(args.g1)
    g2 = _parse_range(args.g2)
    if args.lock:
        lock = args.lock.replace(" ", "")
        if lock == "g2=g1":
            g2 = g1
        elif lock == "g1=g2":
            g1 = g2
        else:
            raise ConfigError("--lock accepts g2=g1 or g1=g2")
    if len(g1) != len(g2):
        if len(g1) == 1:
            g1 = np.full_like(g2, g1[0])
        elif len(g2) == 1:
            g2 = np.full_like(g1, g2[0])
        else:
            raise ConfigError("g1 and g2 ranges must have equal length")
    try:
        template = ModelParams(args.omega1, args.omega2, 0.0, 0.0)
        trunc = TruncationConfig(args.nmax)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sweep = spectra.sweep_spectrum(template, g1, g2, trunc, args.k,
                                   n_jobs=args.jobs)
    resolved = dict(vars(args))
    cfg_hash = _config_hash("spectrum", resolved)
    w = args.omega_f
    rows = []
    for i in range(sweep.n_points):
        for parity in (Parity.EVEN, Parity.ODD):
            for branch in range(args.k):
                rows.append((float(g1[i]), float(g2[i]), parity.value,
                             branch,
                             float(sweep.energies[parity][i, branch]) * w))
    _write_csv(args.out, "spectrum", cfg_hash,
               ("g1", "g2", "parity", "branch", "energy"), rows)

    crossing_rows = []
    for parity in (Parity.EVEN, Parity.ODD):
        for rec in spectra.detect_crossings(sweep, parity, args.gap_tol,
                                            args.overlap_tol):
            crossing_rows.append((rec.parity.value, rec.branch_lo,
                                  rec.g_lo, rec.g_hi, rec.kind.value))
    sibling = (args.out.replace(".csv", ".crossings.csv")
               if args.out and args.out.endswith(".csv")
               else (args.out + ".crossings" if args.out else None))
    _write_csv(sibling, "spectrum-crossings", cfg_hash,
               ("parity", "branch_lo", "g_lo", "g_hi", "kind"),
               crossing_rows)

    if args.svg:
        panel = Panel(title="parity-resolved spectrum",
                      xlabel="g / omega_f", ylabel="E / omega_f")
        colors = {Parity.EVEN: "#d62728", Parity.ODD: "#1f77b4"}
        dashes = {Parity.EVEN: "", Parity.ODD: "4,3"}
        axis = sweep.primary_values
        for parity in (Parity.EVEN, Parity.ODD):
            for branch in range(args.k):
                panel.series.append(Series(
                    axis, sweep.energies[parity][:, branch] * w,
                    colors[parity], dashes[parity],
                    parity.value if branch == 0 else ""))
        render([panel], args.svg, panel_size=(640, 480), columns=1)
    return EXIT_OK


def _initial_state(args, trunc):
    q1, q2 = _parse_qubits(args.qubits)
    if args.fock is not None and args.alpha is not None:
        raise ConfigError("give either --alpha or --fock, not both")
    if args.fock is not None:
        field = int(args.fock)
    else:
        field = ("coherent", float(args.alpha if args.alpha is not None
                                   else 0.0))
    return dynamics.decompose_initial_state(field, q1, q2, trunc)


def cmd_dynamics(args) -> int:
    _reject_seed(args)
    params = _model(args)
    try:
        trunc = TruncationConfig(args.nmax)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.steps < 1 or args.tmax <= 0:
        raise ConfigError("--steps must be >= 1 and --tmax positive")
    times = np.linspace(0.0, args.tmax, args.steps + 1)
    state = _initial_state(args, trunc)
    if args.engine == "full":
        traj = dynamics.evolve_parity(state, params, times)
    else:
        traj = dynamics.evolve_rwa_closed_form(state, params, times)
    resolved = dict(vars(args))
    cfg_hash = _config_hash("dynamics", resolved)
    w = args.omega_f
    rows = [(t / w, mn, sz, ent, con) for t, mn, sz, ent, con
            in zip(traj.times, traj.mean_n, traj.s_z, traj.entropy,
                   traj.concurrence)]
    _write_csv(args.out, "dynamics", cfg_hash,
               ("t", "mean_n", "s_z", "entropy", "concurrence"), rows)
    if args.svg:
        panels = []
        for name, data in (("mean photon number", traj.mean_n),
                           ("population inversion", traj.s_z),
                           ("von Neumann entropy", traj.entropy),
                           ("concurrence", traj.concurrence)):
            panels.append(Panel([Series(traj.times / w, data, "#1f77b4")],
                                title=name, xlabel="t * omega_f"))
        render(panels, args.svg)
    return EXIT_OK


def cmd_perturb(args) -> int:
    _reject_seed(args)
    params = _model(args)
    spectrum = spectra.dsc_perturbative_spectrum(params, args.mmax,
                                                 n_cut=args.ncut)
    if spectrum.resonant:
        for branch, m, n in spectrum.resonant:
            print(f"perturb: branch {branch}, m={m} skipped "
                  f"(near-resonant denominator at intermediate level n={n})",
                  file=sys.stderr)
    w = args.omega_f
    rows = []
    for m in range(args.mmax + 1):
        for branch, zeroth, shift in ((1, spectrum.branch1_zeroth,
                                       spectrum.branch1_shift),
                                      (2, spectrum.branch2_zeroth,
                                       spectrum.branch2_shift)):
            if np.isnan(shift[m]):
                continue
            rows.append((m, branch, zeroth[m] * w, -shift[m] * w,
                         (zeroth[m] - shift[m]) * w))
    if not rows:
        raise SmallDenominator("every requested branch value sits on a "
                               "near-resonant denominator")
    cfg_hash = _config_hash("perturb", dict(vars(args)))
    _write_csv(args.out, "perturb", cfg_hash,
               ("m", "branch", "energy_zeroth", "correction_second",
                "energy_total"), rows)
    return EXIT_OK


def cmd_rwa_compare(args) -> int:
    _reject_seed(args)
    params = _model(args)
    try:
        trunc = TruncationConfig(args.nmax)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = spectra.rwa_relative_error(params, trunc, args.k)
    w = args.omega_f
    rows = [(i, report.e_full[i] * w, report.e_rwa[i] * w, report.errors[i])
            for i in range(args.k)]
    rows.append(("mean", "", "", report.mean_error))
    rows.append(("ground", "", "", report.ground_error))
    cfg_hash = _config_hash("rwa-compare", dict(vars(args)))
    _write_csv(args.out, "rwa-compare", cfg_hash,
               ("index", "e_full", "e_rwa", "rel_error"), rows)
    return EXIT_OK


def cmd_eigenstate(args) -> int:
    _reject_seed(args)
    params = _model(args)
    parities = ([Parity.EVEN, Parity.ODD] if args.parity == "both"
                else [Parity.EVEN if args.parity == "even" else Parity.ODD])
    rows = []
    for parity in parities:
        trunc = TruncationConfig(args.nmax)
        decomp = eigh(build_parity_matrix(params, parity, trunc))
        for index in range(args.count):
            state = eigenstates.eigenstate_recurrence(params, parity, index,
                                                      args.nmax)
            res_rec = eigenstates.residual(params, parity, state)
            res_barg = ""
            if args.bargmann:
                try:
                    res_barg = eigenstates.bargmann_reconstruction_residual(
                        params, parity, float(decomp.values[index]),
                        j_max=args.jmax, n_max=args.nmax)
                except Rabi2qError as exc:
                    print(f"eigenstate: bargmann route unavailable for "
                          f"{parity.value} #{index}: {exc}", file=sys.stderr)
            rows.append((parity.value, index,
                         float(decomp.values[index]) * args.omega_f,
                         res_rec, res_barg))
    cfg_hash = _config_hash("eigenstate", dict(vars(args)))
    _write_csv(args.out, "eigenstate", cfg_hash,
               ("parity", "index", "energy", "residual_recurrence",
                "residual_bargmann"), rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rabi2q",
        description="Two-qubit quantum Rabi model: spectra, eigenstates "
                    "and entanglement dynamics")
    parser.add_argument("--version", action="version",
                        version=f"rabi2q {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="parity-resolved coupling sweep")
    _add_common(sp, couplings="range")
    sp.add_argument("--k", type=int, default=20,
                    help="branches per parity")
    sp.add_argument("--gap-tol", type=float, default=0.05, dest="gap_tol")
    sp.add_argument("--overlap-tol", type=float, default=0.2,
                    dest="overlap_tol")
    sp.add_argument("--jobs", type=int, default=None,
                    help="parallel sweep workers")
    sp.set_defaults(func=cmd_spectrum)

    dy = sub.add_parser("dynamics", help="time evolution of observables")
    _add_common(dy)
    dy.add_argument("--alpha", type=float, default=None,
                    help="coherent field amplitude")
    dy.add_argument("--fock", type=int, default=None,
                    help="Fock occupation (alternative to --alpha)")
    dy.add_argument("--qubits", type=str, default="gg",
                    help="initial qubit pair, e.g. gg, eg")
    dy.add_argument("--tmax", type=float, default=100.0,
                    help="final time in units of 1/omega_f")
    dy.add_argument("--steps", type=int, default=1000)
    dy.add_argument("--engine", choices=("full", "rwa"), default="full")
    dy.set_defaults(func=cmd_dynamics)

    pe = sub.add_parser("perturb",
                        help="deep-strong-coupling perturbative branches")
    _add_common(pe)
    pe.add_argument("--mmax", type=int, default=11,
                    help="highest branch index")
    pe.add_argument("--ncut", type=int, default=None,
                    help="correction sum cutoff (default m + 80)")
    pe.set_defaults(func=cmd_perturb)

    rc = sub.add_parser("rwa-compare",
                        help="RWA vs full spectrum relative errors")
    _add_common(rc)
    rc.add_argument("--k", type=int, default=20)
    rc.set_defaults(func=cmd_rwa_compare)

    ei = sub.add_parser("eigenstate",
                        help="recurrence eigenstates and their residuals")
    _add_common(ei)
    ei.add_argument("--parity", choices=("even", "odd", "both"),
                    default="both")
    ei.add_argument("--count", type=int, default=5,
                    help="number of lowest states per parity")
    ei.add_argument("--jmax", type=int, default=120,
                    help="Bargmann series length")
    ei.add_argument("--bargmann", action="store_true",
                    help="also report Bargmann reconstruction residuals")
    ei.set_defaults(func=cmd_eigenstate)
    return parser


def _apply_config_file(argv: list[str]) -> list[str]:
    """Prepend key=value file entries as flags so explicit flags win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ConfigError("--config requires a path")
    path = argv[idx + 1]
    injected = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"config line {line!r} is not "
                                      f"key=value")
                key, value = line.split("=", 1)
                injected.extend([f"--{key.strip().replace('_', '-')}",
                                 value.strip()])
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    # insert after the subcommand so explicit flags (later) win
    for i in range(1, len(argv)):
        if not argv[i].startswith("-"):
            return argv[:i + 1] + injected + argv[i + 1:]
    return argv + injected


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv if argv is None else ["rabi2q"] + list(argv))
    try:
        argv = _apply_config_file(argv)
        parser = build_parser()
        args = parser.parse_args(argv[1:])
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Rabi2qError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

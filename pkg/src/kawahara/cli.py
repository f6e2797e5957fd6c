"""Command-line front door: ``kawahara <subcommand> [options]``.

Every subcommand accepts ``--seed``, ``--out`` and ``--config``.  A config file
is a JSON object whose keys are option names (dashes or underscores); options
given on the command line take precedence.  With ``--out DIR`` results are
written to files in DIR, otherwise the main table or report goes to stdout.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure
(non-convergence, or a failed acceptance criterion).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import acceptance, forcing, kernel, probe
from .acceptance import SCHEMA_VERSION, dumps
from .fractional import HalfLineSignal
from .nonlinearity import NonlinearityKind
from .norms import SobolevIndex, dalpha_norm, xsb_norm, ysb_norm
from .propagator import propagate
from .solver import IBVPData, NonConvergenceError, extract_traces, picard_solve, whole_line_reference
from .spectral import Field1D, Field2D, Grid1D, SpaceTimeGrid, l2_physical

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


# ----------------------------------------------------------------- output

def _csv_text(header: list[str], columns: list[np.ndarray]) -> str:
    """CSV with a header row; complex columns expand into (name_re, name_im)."""
    names, cols = [], []
    for name, col in zip(header, columns):
        col = np.asarray(col)
        if np.iscomplexobj(col):
            names += [f"{name}_re", f"{name}_im"]
            cols += [col.real, col.imag]
        else:
            names.append(name)
            cols.append(col)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*cols):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


class Output:
    def __init__(self, out: str | None):
        self.dir = Path(out) if out else None
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, text: str, primary: bool = False) -> None:
        if self.dir is not None:
            (self.dir / name).write_text(text)
        elif primary:
            sys.stdout.write(text)

    def json(self, name: str, obj: dict, primary: bool = False) -> None:
        self.write(name, dumps({"schema_version": SCHEMA_VERSION, **obj}) + "\n", primary)


# ------------------------------------------------------------- subcommands

def _gaussian(grid: Grid1D, amplitude: float, center: float, width: float) -> np.ndarray:
    return amplitude * np.exp(-((grid.points - center) ** 2) / (2.0 * width**2))


def _bump(t: np.ndarray, a: float, b: float) -> np.ndarray:
    return acceptance._bump(t, a, b)


def cmd_kernel(o, out: Output) -> int:
    xs = np.linspace(o.x_min, o.x_max, o.points)
    vals = kernel.eval_B(o.order, xs)
    out.write("kernel.csv", _csv_text(["x", "B"], [xs, vals]), primary=True)
    out.json("kernel.json", {"order": o.order, "closed_form_at_zero": kernel.closed_form_at_zero(o.order),
                             "points": o.points})
    return EXIT_OK


def cmd_propagate(o, out: Output) -> int:
    g = Grid1D(o.n, o.length, -o.length / 2)
    phi = Field1D(g, _gaussian(g, o.amplitude, o.center, o.width))
    u = propagate(phi, o.time)
    out.write("propagate.csv", _csv_text(["x", "u"], [g.points, u.values]), primary=True)
    out.json("propagate.json", {"t": o.time, "l2_initial": l2_physical(phi), "l2_final": l2_physical(u)})
    return EXIT_OK


def cmd_forcing(o, out: Output) -> int:
    dt = o.t_end / o.nt
    t = dt * np.arange(o.nt)
    f = HalfLineSignal(dt, _bump(t, 0.05 * o.t_end, 0.75 * o.t_end))
    g = Grid1D(o.n, o.length, -o.length / 2)
    F = forcing.L_lambda(f, o.lam, o.side, g) if o.lam != 0 else forcing.L0(f, g, method="spectral")
    trace = F.values[:, g.index_of(0.0)]
    a = forcing.trace_constant(o.lam, o.side) if o.lam != 0 else 1.0
    err = float(np.max(np.abs(trace - a * f.values)) / np.max(np.abs(f.values)))
    out.write("forcing.csv", _csv_text(["t", "f", "trace"], [t, f.values, trace]), primary=True)
    out.json("forcing.json", {"lambda": o.lam, "side": o.side, "trace_constant": a, "trace_error": err})
    return EXIT_OK


def cmd_norms(o, out: Output) -> int:
    space = Grid1D(o.n, o.length, -o.length / 2)
    time = Grid1D(o.nt, o.t_end, 0.0)
    st = SpaceTimeGrid(space, time)
    rng = np.random.default_rng(o.seed)
    phase = rng.uniform(0.0, 2 * np.pi)
    tt, xx = np.meshgrid(time.points, space.points, indexing="ij")
    vals = np.exp(-((xx - o.center) ** 2) / (2 * o.width**2)) * np.exp(-((tt - o.t_end / 2) ** 2) / (0.02 * o.t_end**2))
    f = Field2D(st, vals * np.exp(1j * phase))
    rep = {"s": o.s, "b": o.b, "alpha": o.alpha, "X": xsb_norm(f, o.s, o.b), "Y": ysb_norm(f, o.s, o.b),
           "D": dalpha_norm(f, o.alpha)}
    out.json("norms.json", rep, primary=True)
    return EXIT_OK


def cmd_probe(o, out: Output) -> int:
    k_range = (o.kmin, o.kmax)
    if o.variant in probe.VARIANTS:
        rep = probe.probe_block_estimate(o.variant, k_range, o.ensemble, o.seed)
    elif o.variant == "strichartz":
        rep = probe.strichartz_probe(k_range, o.ensemble, o.seed)
    elif o.variant in ("theorem-quadratic", "theorem-cubic"):
        kind = NonlinearityKind.QUADRATIC if o.variant.endswith("quadratic") else NonlinearityKind.CUBIC
        rep = probe.probe_theorem_ratio(kind, o.s, o.b, o.alpha, k_range, o.ensemble, o.seed, o.norm)
    else:
        raise UsageError(f"unknown probe variant {o.variant!r}")
    levels = np.array(rep.levels, dtype=float)
    table = _csv_text(["level", "max_ratio"], [levels, [rep.max_ratio[k] for k in rep.levels]])
    out.write("probe.csv", table)
    out.json("probe.json", rep.as_dict(), primary=True)
    return EXIT_OK


def cmd_solve_ibvp(o, out: Output) -> int:
    kind = NonlinearityKind(o.kind)
    g = Grid1D(o.n, o.length, -o.length / 2)
    u0 = Field1D(g, _gaussian(g, o.amplitude, o.center, o.width))
    times = o.t_end / o.nt * np.arange(o.nt)
    # boundary data compatible with u0: traces of the whole-line solution
    v = whole_line_reference(u0, times, kind, substeps=8)
    f, gx, _ = extract_traces(v)
    dt = times[1]
    data = IBVPData(u0, HalfLineSignal(dt, f), HalfLineSignal(dt, gx), kind, o.s)
    u, rep = picard_solve(data, SobolevIndex(o.s, o.b, o.alpha), T0=o.T0, T_min=o.T_min)
    last = int(np.searchsorted(times, rep.T, side="right")) - 1
    r = g.points >= 0
    out.write("solution.csv", _csv_text(["x", "u"], [g.points[r], u.values[last, r]]), primary=True)
    out.json("solve.json", {"t": float(times[last]), **rep.as_dict()})
    return EXIT_OK


def cmd_verify(o, out: Output) -> int:
    def progress(rec):
        print(acceptance.summary_line(rec), file=sys.stderr if out.dir is None else sys.stdout, flush=True)

    try:
        acceptance.select(o.only)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    report = acceptance.run_acceptance(o.only, o.seed, progress)
    out.write("verify.json", dumps(report) + "\n", primary=True)
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


# ------------------------------------------------------------------ parser

COMMANDS = {
    "kernel": (cmd_kernel, "Oscillatory kernel B^(n)(x) = (1/2pi) int (i xi)^n exp(i x xi + i xi^5) dxi,"
                           " sampled on a uniform x range.",
               {"order": (int, 0), "x_min": (float, -5.0), "x_max": (float, 5.0), "points": (int, 101)}),
    "propagate": (cmd_propagate, "Free flow exp(t d_x^5) phi, the solution of u_t - u_xxxxx = 0, for a"
                                 " Gaussian datum.",
                  {"n": (int, 1024), "length": (float, 100.0), "time": (float, 0.05), "amplitude": (float, 1.0),
                   "center": (float, 0.0), "width": (float, 1.0)}),
    "forcing": (cmd_forcing, "Boundary forcing L^lambda_{+/-} f for a smooth bump datum f, with its trace at"
                             " x = 0 compared against the trace constant times f.",
                {"lam": (float, 0.0), "side": (str, "plus"), "n": (int, 4096), "length": (float, 200.0),
                 "nt": (int, 256), "t_end": (float, 1.0)}),
    "norms": (cmd_norms, "X^{s,b}, Y^{s,b} and D^alpha norms of a space-time Gaussian.",
              {"s": (float, 0.0), "b": (float, 0.45), "alpha": (float, 0.55), "n": (int, 256),
               "length": (float, 40.0), "nt": (int, 128), "t_end": (float, 2.0), "center": (float, 0.0),
               "width": (float, 1.0)}),
    "probe": (cmd_probe, "Dyadic block estimates for the resonance functionals J2/J3 (L2a, L2b, L2c, L3a,"
                         " L3b1, L3b2), the L^6 Strichartz bound, and the bilinear/trilinear X^{s,-b} ratios"
                         " (theorem-quadratic, theorem-cubic).",
              {"variant": (str, "L2a"), "s": (float, 0.0), "b": (float, 0.45), "alpha": (float, 0.55),
               "kmin": (int, 2), "kmax": (int, 8), "ensemble": (int, 100), "norm": (str, "X")}),
    "solve-ibvp": (cmd_solve_ibvp, "Right half-line problem u_t - u_xxxxx + F(u) = 0, u(0,x) = u0,"
                                   " u(t,0) = f, u_x(t,0) = g, solved by Picard iteration with boundary"
                                   " data taken from the whole-line solution.",
                   {"kind": (str, "cubic"), "n": (int, 2048), "length": (float, 100.0), "nt": (int, 512),
                    "t_end": (float, 0.04), "amplitude": (float, 2.0), "center": (float, 4.0),
                    "width": (float, 0.495), "T0": (float, 0.015), "T_min": (float, 2.0**-10), "s": (float, 0.0), "b": (float, 0.4),
                    "alpha": (float, 0.55)}),
    "verify": (cmd_verify, "Run the acceptance suite; --only accepts criterion numbers, keys or groups"
                           " (kernel, propagator, fractional, forcing, nonlinearity, probe, solver,"
                           " determinism).", {}),
}


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kawahara", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_text, opts) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text.split(".")[0], description=help_text)
        sp.add_argument("--seed", type=_u64, default=None)
        sp.add_argument("--out", default=None, help="output directory (default: stdout)")
        sp.add_argument("--config", default=None, help="JSON file with option values")
        for key, (typ, default) in opts.items():
            sp.add_argument("--" + key.replace("_", "-"), dest=key, type=typ, default=None,
                            help=f"default {default}")
        if name == "verify":
            sp.add_argument("--only", action="append", default=None, help="criterion filter (repeatable)")
    return p


def _resolve(ns: argparse.Namespace) -> argparse.Namespace:
    """Fill options from the config file and built-in defaults."""
    opts = dict(COMMANDS[ns.command][2])
    opts["seed"] = (_u64, 0)
    if ns.command == "verify":
        opts["only"] = (list, None)
    cfg = {}
    if ns.config:
        try:
            cfg = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        unknown = set(cfg) - set(opts) - {"out"}
        if unknown:
            raise UsageError(f"unknown config keys for {ns.command}: {sorted(unknown)}")
    for key, (typ, default) in opts.items():
        if getattr(ns, key, None) is None:
            if key in cfg:
                try:
                    val = typ(cfg[key]) if cfg[key] is not None else None
                except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"bad config value for {key}: {exc}") from None
            else:
                val = default
            setattr(ns, key, val)
    if ns.out is None and "out" in cfg:
        ns.out = str(cfg["out"])
    return ns


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        ns = _resolve(ns)
        return COMMANDS[ns.command][0](ns, Output(ns.out))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:  # domain errors of the numerical modules
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())

"""Command line: ``metaconf eval | figure | verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or config error,
3 numeric failure (singular input).
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import __version__
from . import corrkernels as ck
from . import suites
from .errors import MetaconfError, SingularInput
from .svg import line_plot

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
FIGURES = ("fig00a", "fig00b", "fig00cd", "fig2", "fig3")
KERNELS = tuple(k.value for k in ck.CorrelatorKind if k is not ck.CorrelatorKind.ORTHO_Z)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str | None = None
    kernel: str | None = None
    which: str | None = None
    suite: str | None = None
    delta: float | None = None
    delta2: float | None = None
    gamma: float | None = None
    gamma2: float | None = None
    gamma_par: float | None = None
    gamma_perp: float | None = None
    mu: float | None = None
    mu2: float | None = None
    t: float | None = None
    r: float | None = None
    r_par: float | None = None
    r_perp: float | None = None
    phi: float | None = None
    grid: str | None = None
    t_grid: str | None = None
    tol: float | None = None
    format: str | None = None
    out: str | None = None
    seed: int = 0
    version: str = __version__

    @classmethod
    def from_sources(cls, args: argparse.Namespace) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        values: dict = {}
        if getattr(args, "config", None):
            try:
                with open(args.config, encoding="utf-8") as fh:
                    loaded = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {args.config}: {exc}") from exc
            unknown = set(loaded) - names
            if unknown:
                raise UsageError(f"unknown config keys: {sorted(unknown)}")
            values.update(loaded)
        for k, v in vars(args).items():
            if k in names and v is not None:
                values[k] = v
        values["seed"] = suites.seed()
        values["version"] = __version__
        return cls(**values)

    def stamp(self) -> str:
        """JSON of everything that determines the output (the output path excluded)."""
        d = dataclasses.asdict(self)
        d.pop("out")
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def parse_grid(spec: str) -> np.ndarray:
    """``min:max:n`` (linear) or ``min:max:n:log``."""
    parts = spec.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
        raise UsageError(f"bad grid {spec!r}; expected min:max:n[:log]")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {spec!r}") from exc
    if n < 1:
        raise UsageError("grid needs at least one point")
    if len(parts) == 4:
        if lo <= 0 or hi <= 0:
            raise UsageError("log grid bounds must be positive")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def csv_text(cfg: RunConfig, columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# metaconf {__version__}\n")
    buf.write(f"# config: {cfg.stamp()}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".metaconf-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _is_2d(kernel: str, cfg: RunConfig) -> bool:
    if kernel in ("meta2d-holo", "meta2d-reg"):
        return True
    if kernel in ("cga-naive", "cga-reg"):
        return cfg.gamma_par is not None or cfg.gamma_perp is not None
    return False


def _quantum_numbers(cfg: RunConfig, two_d: bool):
    mu = 1.0 if cfg.mu is None else cfg.mu
    mu2 = mu if cfg.mu2 is None else cfg.mu2
    delta2 = cfg.delta if cfg.delta2 is None else cfg.delta2
    if two_d:
        _need(cfg, "delta")
        gp = cfg.gamma_par or 0.0
        gq = cfg.gamma_perp or 0.0
        return (ck.QuantumNumbers2D(cfg.delta, gp, gq, mu),
                ck.QuantumNumbers2D(delta2, gp, gq, mu2))
    _need(cfg, "delta", "gamma")
    g2 = cfg.gamma if cfg.gamma2 is None else cfg.gamma2
    return ck.QuantumNumbers1D(cfg.delta, cfg.gamma, mu), ck.QuantumNumbers1D(delta2, g2, mu2)


def _evaluate(kernel: str, qn1, qn2, t: float, r_par: float, r_perp: float | None) -> ck.EvalResult:
    if r_perp is None:
        return ck.evaluate(kernel, ck.Point1D(t, r_par), ck.Point1D(0.0, 0.0), qn1, qn2)
    return ck.evaluate(kernel, ck.Point2D(t, r_par, r_perp), ck.Point2D(0.0, 0.0, 0.0), qn1, qn2)


def _value_text(v: complex) -> str:
    if v.imag == 0:
        return repr(float(v.real))
    return repr(complex(v))


def cmd_eval(cfg: RunConfig) -> int:
    _need(cfg, "kernel")
    if cfg.kernel not in KERNELS:
        raise UsageError(f"unknown kernel {cfg.kernel!r}; choose from {', '.join(KERNELS)}")
    two_d = _is_2d(cfg.kernel, cfg)
    qn1, qn2 = _quantum_numbers(cfg, two_d)

    if cfg.grid is None:
        _need(cfg, "t")
        if two_d:
            rp, rq = (cfg.r_par or 0.0), (cfg.r_perp or 0.0)
            if cfg.r is not None and cfg.phi is not None:
                rp, rq = cfg.r * math.cos(math.radians(cfg.phi)), cfg.r * math.sin(math.radians(cfg.phi))
            res = _evaluate(cfg.kernel, qn1, qn2, cfg.t, rp, rq)
        else:
            res = _evaluate(cfg.kernel, qn1, qn2, cfg.t, cfg.r or 0.0, None)
        if res.diagnostic:
            print(f"metaconf: {res.diagnostic}", file=sys.stderr)
        if res.is_singular:
            print("nan")
            return EXIT_NUMERIC
        text = _value_text(res.value) + "\n"
        if cfg.format == "json":
            text = json.dumps({"value": [res.value.real, res.value.imag], "diagnostic": res.diagnostic,
                               "config": json.loads(cfg.stamp())}, sort_keys=True) + "\n"
        emit(cfg, text)
        return EXIT_OK

    rs = parse_grid(cfg.grid)
    ts = parse_grid(cfg.t_grid) if cfg.t_grid else [cfg.t if cfg.t is not None else 1.0]
    phi = math.radians(cfg.phi or 0.0)
    rows, diagnostics = [], set()
    for t in ts:
        if t == 0:
            continue
        for r in rs:
            if two_d:
                rp, rq = r * math.cos(phi), r * math.sin(phi)
                res = _evaluate(cfg.kernel, qn1, qn2, float(t), rp, rq)
                rows.append((t, rp, rq, res.value.real, res.value.imag, res.is_singular))
            else:
                res = _evaluate(cfg.kernel, qn1, qn2, float(t), float(r), None)
                rows.append((t, r, res.value.real, res.value.imag, res.is_singular))
            if res.diagnostic:
                diagnostics.add(res.diagnostic)
    for d in sorted(diagnostics):
        print(f"metaconf: {d}", file=sys.stderr)
    cols = ("t", "r_par", "r_perp", "re", "im", "singular") if two_d else ("t", "r", "re", "im", "singular")
    emit(cfg, csv_text(cfg, cols, rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# figure
# ---------------------------------------------------------------------------


def figure_data(which: str, cfg: RunConfig):
    """``(columns, rows, svg_series, svg_options)`` for one figure."""
    q1 = ck.QuantumNumbers1D(**suites.FIG00)
    if which in ("fig00a", "fig00b"):
        kind = "meta1d-holo" if which == "fig00a" else "meta1d-reg"
        ts = parse_grid(cfg.t_grid or "-1:1:40")
        rs = parse_grid(cfg.grid or "-1:1:41")
        rows = []
        for t in ts:
            if t == 0:
                continue
            for r in rs:
                res = ck.evaluate(kind, ck.Point1D(float(t), float(r)), ck.Point1D(0.0, 0.0), q1, q1)
                rows.append((t, r, res.value.real, res.value.imag, res.is_singular))
        series = []
        for t in ts[:: max(1, len(ts) // 4)]:
            sel = [row for row in rows if row[0] == t and not row[4]]
            series.append((f"t={t:.2f}", [row[1] for row in sel], [row[2] for row in sel]))
        return ("t", "r", "re", "im", "singular"), rows, series, {"xlabel": "r", "ylabel": "Re C"}
    if which == "fig00cd":
        t = -0.6
        rs = parse_grid(cfg.grid or "-1:1:401")
        rows = []
        for r in rs:
            p1, p2 = ck.Point1D(t, float(r)), ck.Point1D(0.0, 0.0)
            h = ck.eval_meta1d_holo(p1, p2, q1, q1)
            g = ck.eval_meta1d_reg(p1, p2, q1, q1)
            rows.append((r, h.value.real, h.value.imag, abs(h.value), h.is_singular, g.value.real))
        ok = [row for row in rows if not row[4]]
        series = [("holomorphic Re", [x[0] for x in ok], [x[1] for x in ok]),
                  ("holomorphic Im", [x[0] for x in ok], [x[2] for x in ok]),
                  ("regularized", [x[0] for x in rows], [x[5] for x in rows])]
        return (("r", "holo_re", "holo_im", "holo_abs", "holo_singular", "reg"), rows, series,
                {"xlabel": "r", "ylabel": "C(t=-0.6, r)"})
    pars = suites.FIG2 if which == "fig2" else suites.FIG3
    q2 = ck.QuantumNumbers2D(suites.FIG_DELTA, **pars)
    rs = parse_grid(cfg.grid or "1e-2:1e4:121:log")
    rows, series = [], []
    for phi in suites.ANGLES:
        c, s = math.cos(math.radians(phi)), math.sin(math.radians(phi))
        vals = []
        for r in rs:
            res = ck.eval_meta2d_reg(ck.Point2D(1.0, float(r) * c, float(r) * s), ck.Point2D(0.0, 0.0, 0.0), q2, q2)
            vals.append(res.value.real)
            rows.append((phi, r, res.value.real))
        series.append((f"phi={phi:g}", list(rs), vals))
    return ("phi_deg", "r", "C"), rows, series, {"xlabel": "r", "ylabel": "C", "logx": True, "logy": True}


def cmd_figure(cfg: RunConfig) -> int:
    _need(cfg, "which")
    if cfg.which not in FIGURES:
        raise UsageError(f"unknown figure {cfg.which!r}; choose from {', '.join(FIGURES)}")
    cols, rows, series, opts = figure_data(cfg.which, cfg)
    if cfg.format == "svg":
        emit(cfg, line_plot(series, title=cfg.which, **opts))
    elif cfg.format == "json":
        emit(cfg, json.dumps({"figure": cfg.which, "columns": list(cols),
                              "rows": [[float(v) for v in row] for row in rows],
                              "config": json.loads(cfg.stamp())}, sort_keys=True) + "\n")
    else:
        emit(cfg, csv_text(cfg, cols, rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> int:
    _need(cfg, "suite")
    names = list(suites.SUITES) if cfg.suite == "all" else [cfg.suite]
    if any(n not in suites.SUITES for n in names):
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(suites.SUITES)}, all")
    reports = [suites.run_suite(n) for n in names]
    doc = reports[0] if len(reports) == 1 else {
        "suite": "all", "cases": [dict(c, id=f"{r['suite']}/{c['id']}") for r in reports for c in r["cases"]],
        "summary": {"n_cases": sum(r["summary"]["n_cases"] for r in reports),
                    "n_pass": sum(r["summary"]["n_pass"] for r in reports),
                    "pass": all(r["summary"]["pass"] for r in reports)}}
    doc = dict(doc, config=json.loads(cfg.stamp()))
    emit(cfg, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    for c in doc["cases"]:
        if not c["pass"]:
            print(f"metaconf: FAIL {c['id']}: observed {c['observed']}", file=sys.stderr)
    return EXIT_OK if doc["summary"]["pass"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--out", help="output path (written atomically); stdout when absent")
    p.add_argument("--format", choices=("csv", "json", "svg"))
    p.add_argument("--tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="metaconf", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"metaconf {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a correlator at a point or on a grid")
    ev.add_argument("--kernel")
    for name in ("delta", "delta2", "gamma", "gamma2", "gamma-par", "gamma-perp", "mu", "mu2",
                 "t", "r", "r-par", "r-perp", "phi"):
        ev.add_argument(f"--{name}", type=float)
    ev.add_argument("--grid", help="r grid as min:max:n[:log]")
    ev.add_argument("--t-grid", help="t grid as min:max:n[:log]")
    _common(ev)

    fg = sub.add_parser("figure", help="emit figure data as CSV, JSON or SVG")
    fg.add_argument("which", nargs="?")
    fg.add_argument("--grid")
    fg.add_argument("--t-grid")
    _common(fg)

    vf = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    vf.add_argument("suite", nargs="?")
    _common(vf)
    return ap


COMMANDS = {"eval": cmd_eval, "figure": cmd_figure, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = RunConfig.from_sources(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"metaconf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularInput as exc:
        print(f"metaconf: singular input: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MetaconfError as exc:
        print(f"metaconf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

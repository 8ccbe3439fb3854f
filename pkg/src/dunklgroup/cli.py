"""Command-line entry point.

    dunklgroup --command kernel --b 0.6 --t 1.1 --x-grid 0.6:0.6:1 --y-grid -2:2:41
    dunklgroup --command evolve --b 0.6 --t 0.8 --x-grid -2:2:21 --f 0:1.0,2:0.5
    dunklgroup --command verify --only specfun --format json

Exit codes: 0 success, 1 verification failure, 2 domain/config error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import specfun as sf
from .dunkl import EigenCoefficients, RegionTag, check_b, dunkl_transform, kernel_K, region_classify
from .evolution import DEFAULT_EPS, boundary_value_diagnostic, evolve
from .quad import DEFAULT_QUAD, QuadratureError, QuadratureSpec
from .verify import SUITES, run_suites

COMMANDS = ("kernel", "evolve", "transform", "jump-diagnostic", "verify", "plot-data")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

# grid points this close to x = -t are treated as the excluded point itself
DEGENERATE_TOL = 1e-12

_VALUED_FLAGS = ("--x-grid", "--y-grid", "--eps-list", "--t-list", "--b", "--t", "--f")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must be min:max:count, got {text!r}")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}: {exc}") from None
        if n < 1:
            raise ConfigError("grid count must be >= 1")
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConfigError("grid bounds must be finite")
        return cls(lo, hi, n)

    def points(self) -> list[float]:
        if self.count == 1:
            return [self.lo]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.count)]


def parse_function(text: str) -> list[tuple[int, float]]:
    pairs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            k, v = item.split(":")
            ell, c = int(k), float(v)
        except ValueError:
            raise ConfigError(f"bad function term {item!r}; expected l:coefficient") from None
        if ell < 0 or not math.isfinite(c):
            raise ConfigError(f"bad function term {item!r}")
        pairs.append((ell, c))
    if not pairs:
        raise ConfigError("empty function specification")
    return pairs


def parse_floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad number list {text!r}") from None
    if not vals:
        raise ConfigError("empty number list")
    return vals


@dataclass(frozen=True)
class RunConfig:
    command: str
    b: float = 0.6
    t: float = 1.0
    x_grid: Grid = Grid(1.0, 1.0, 1)
    y_grid: Grid = Grid(-2.0, 2.0, 41)
    f: tuple[tuple[int, float], ...] = ((0, 1.0),)
    eps_list: tuple[float, ...] = DEFAULT_EPS
    t_list: tuple[float, ...] = (0.3, 1.0)
    tol_abs: float = DEFAULT_QUAD.abs_tol
    tol_rel: float = DEFAULT_QUAD.rel_tol
    fmt: str = "csv"
    out: str | None = None
    only: str | None = None
    seed: int = 0
    inverse: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        try:
            check_b(self.b)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not math.isfinite(self.t):
            raise ConfigError("t must be finite")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.tol_abs <= 0 or self.tol_rel <= 0:
            raise ConfigError("tolerances must be positive")
        if any(e <= 0 for e in self.eps_list):
            raise ConfigError("eps values must be positive")
        if self.only is not None and self.only not in SUITES:
            raise ConfigError(f"unknown suite {self.only!r}; choose from {sorted(SUITES)}")

    @property
    def quad(self) -> QuadratureSpec:
        return DEFAULT_QUAD.with_(abs_tol=self.tol_abs, rel_tol=self.tol_rel)

    def coefficients(self) -> EigenCoefficients:
        return EigenCoefficients.from_pairs(self.b, self.f)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["x_grid"] = list(asdict(self.x_grid).values())
        d["y_grid"] = list(asdict(self.y_grid).values())
        d["f"] = [list(p) for p in self.f]
        d["eps_list"] = list(self.eps_list)
        d["t_list"] = list(self.t_list)
        return d


def _notice(msg: str) -> None:
    print(f"notice: {msg}", file=sys.stderr)


# ---------------------------------------------------------------- commands


def cmd_kernel(cfg: RunConfig) -> list[dict]:
    rows = []
    t = cfg.t
    if t == 0:
        raise ConfigError("kernel needs t != 0")
    for x in cfg.x_grid.points():
        for y in cfg.y_grid.points():
            if x == 0 or y == 0:
                _notice(f"skipping (x, y) = ({x}, {y}): xy = 0")
                continue
            region = region_classify(x, y, t)
            u = (x * x + y * y - t * t) / (2 * abs(x) * abs(y))
            k = None if region is RegionTag.BOUNDARY else kernel_K(cfg.b, x, y, t).value
            rows.append({"x": x, "y": y, "t": t, "u": u, "region": region.value, "K": k})
    return rows


def cmd_evolve(cfg: RunConfig, t: float | None = None) -> list[dict]:
    f = cfg.coefficients()
    t = cfg.t if t is None else t
    rows = []
    for x in cfg.x_grid.points():
        if t != 0 and (x == 0 or abs(x + t) <= DEGENERATE_TOL * max(1.0, abs(t))):
            _notice(f"skipping x = {x}: x(x+t) = 0")
            continue
        r = evolve(f, t, x, quad=cfg.quad)
        rows.append({"x": x, "value": r.value, "delta_term": r.delta_term,
                     "pv_term": r.pv_term, "imag_residual": r.imag_residual})
    return rows


def cmd_transform(cfg: RunConfig) -> list[dict]:
    f = cfg.coefficients()
    xi = np.array(cfg.x_grid.points())
    vals = np.atleast_1d(dunkl_transform(f, xi, inverse=cfg.inverse))
    return [{"xi": float(a), "re": float(v.real), "im": float(v.imag)} for a, v in zip(xi, vals)]


def cmd_jump(cfg: RunConfig) -> list[dict]:
    rows = []
    for x in cfg.x_grid.points():
        for y in cfg.y_grid.points():
            if x == 0 or y == 0:
                _notice(f"skipping (x, y) = ({x}, {y}): xy = 0")
                continue
            region = region_classify(x, y, cfg.t)
            if region in (RegionTag.MIDDLE, RegionTag.BOUNDARY):
                _notice(f"skipping (x, y) = ({x}, {y}): {region.value} region not supported")
                continue
            rep = boundary_value_diagnostic(cfg.b, x, y, cfg.t, cfg.eps_list)
            orders = (math.nan,) + rep.orders
            for row, order in zip(rep.rows, orders):
                rows.append({"x": x, "y": y, "t": cfg.t, "region": region.value, "eps": row.eps,
                             "jump_re": row.jump.real, "jump_im": row.jump.imag,
                             "reference": rep.reference, "error": row.error,
                             "order": None if math.isnan(order) else order})
    if not rows:
        raise sf.DomainError("jump-diagnostic: no INNER or OUTER grid points")
    return rows


def cmd_verify(cfg: RunConfig) -> list[dict]:
    return [r.as_dict() for r in run_suites(cfg.only, cfg.seed)]


def cmd_plot_data(cfg: RunConfig) -> dict[str, list[dict]]:
    """Named row sets: one kernel slice, one evolution snapshot per t, one jump table."""
    x0 = cfg.x_grid.points()[0]
    out: dict[str, list[dict]] = {}
    slice_cfg = RunConfig(**{**_fields(cfg), "command": "kernel", "x_grid": Grid(x0, x0, 1)})
    out["kernel_slice"] = [{"y": r["y"], "K": r["K"], "region": r["region"]} for r in cmd_kernel(slice_cfg)]
    evo_cfg = RunConfig(**{**_fields(cfg), "command": "evolve", "x_grid": cfg.y_grid})
    for i, t in enumerate(cfg.t_list):
        out[f"evolve_t{i}"] = [{"t": t, **r} for r in cmd_evolve(evo_cfg, t)]
    ax = abs(x0) if x0 != 0 else 1.0
    t_outer = 3.0 * ax
    rep = boundary_value_diagnostic(cfg.b, x0 if x0 != 0 else 1.0, 0.5 * ax, t_outer, cfg.eps_list)
    out["jump"] = [{"eps": r.eps, "jump_re": r.jump.real, "jump_im": r.jump.imag, "reference": rep.reference}
                   for r in rep.rows]
    return out


def _fields(cfg: RunConfig) -> dict:
    return {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}


# ---------------------------------------------------------------- output


def _fmt_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        keys = list(rows[0].keys())
        w.writerow(keys)
        for r in rows:
            w.writerow([_fmt_cell(r[k]) for k in keys])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render_json(cfg: RunConfig, rows: Sequence[dict], runtime_ms: float) -> str:
    doc = {
        "config": cfg.as_dict(),
        "rows": [{k: _json_safe(v) for k, v in r.items()} for r in rows],
        "meta": {"version": __version__, "runtime_ms": runtime_ms},
    }
    return json.dumps(doc, indent=2) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dunklgroup", description="Explicit kernels for e^{tD_b} on the real line.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--b", type=float, default=0.6)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--x-grid", default="1:1:1", help="min:max:count (x for kernel/evolve, xi for transform)")
    p.add_argument("--y-grid", default="-2:2:41", help="min:max:count")
    p.add_argument("--f", default="0:1.0", help="eigenbasis coefficients as l:c pairs, e.g. 0:1.0,2:0.5")
    p.add_argument("--eps-list", default=",".join(str(e) for e in DEFAULT_EPS))
    p.add_argument("--t-list", default="0.3,1.0", help="times for plot-data evolution snapshots")
    p.add_argument("--tol-abs", type=float, default=DEFAULT_QUAD.abs_tol)
    p.add_argument("--tol-rel", type=float, default=DEFAULT_QUAD.rel_tol)
    p.add_argument("--format", dest="fmt", default="csv", choices=("csv", "json"))
    p.add_argument("--out", default=None, help="output file (plot-data: output directory)")
    p.add_argument("--only", default=None, help="restrict verify to one suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inverse", action="store_true", help="transform: use the conjugate kernel")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, b=ns.b, t=ns.t,
        x_grid=Grid.parse(ns.x_grid), y_grid=Grid.parse(ns.y_grid),
        f=tuple(parse_function(ns.f)), eps_list=tuple(parse_floats(ns.eps_list)),
        t_list=tuple(parse_floats(ns.t_list)), tol_abs=ns.tol_abs, tol_rel=ns.tol_rel,
        fmt=ns.fmt, out=ns.out, only=ns.only, seed=ns.seed, inverse=ns.inverse,
    )


def _error(kind: str, exc: BaseException, code: int) -> int:
    print(json.dumps({"error": {"type": kind, "message": str(exc)}}), file=sys.stderr)
    return code


def run(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    try:
        if cfg.command == "plot-data":
            if cfg.out is None:
                raise ConfigError("plot-data needs --out DIRECTORY")
            sets = cmd_plot_data(cfg)
        else:
            handler = {"kernel": cmd_kernel, "evolve": cmd_evolve, "transform": cmd_transform,
                       "jump-diagnostic": cmd_jump, "verify": cmd_verify}[cfg.command]
            rows = handler(cfg)
    except (ConfigError, sf.SpecialFunctionError, QuadratureError, ValueError) as exc:
        return _error(type(exc).__name__, exc, EXIT_CONFIG)
    ms = (time.perf_counter() - t0) * 1e3

    def render(rs):
        return render_csv(rs) if cfg.fmt == "csv" else render_json(cfg, rs, ms)

    try:
        if cfg.command == "plot-data":
            os.makedirs(cfg.out, exist_ok=True)
            for name, rs in sets.items():
                _write(render(rs), os.path.join(cfg.out, f"{name}.{cfg.fmt}"))
        else:
            _write(render(rows), cfg.out)
    except OSError as exc:
        return _error("OSError", exc, EXIT_IO)
    if cfg.command == "verify" and not all(r["passed"] for r in rows):
        return EXIT_FAIL
    return EXIT_OK


def _glue_values(argv: Sequence[str]) -> list[str]:
    """Rewrite '--x-grid -2:2:9' as '--x-grid=-2:2:9' so argparse does not read a flag."""
    out, it = [], iter(argv)
    for a in it:
        if a in _VALUED_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_values(sys.argv[1:] if argv is None else argv)
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
    except ConfigError as exc:
        return _error("ConfigError", exc, EXIT_CONFIG)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

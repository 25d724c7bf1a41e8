"""Command-line front end.

Subcommands: wave, collide, classify, spectrum, sweep, atlas.  Options can be
preloaded from a flat JSON config file; explicit flags override file values.
All machine output is JSON (floats at 17 significant digits) or CSV; human
tables round to 9 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import collisions, operator, reduced, stokes, symbols
from .errors import NumericalError, TranspecError, ValidationError

_JSON_DIGITS = 17
_TABLE_DIGITS = 9


# --- deterministic serialization -------------------------------------------

def _fmt(x: float, digits: int = _JSON_DIGITS) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return format(x, f".{digits}g")
    return str(x)


def _leaf(obj) -> Optional[str]:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    return None


def dumps(obj, indent: int = 0) -> str:
    """JSON text with floats rendered at fixed significant digits."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2).lstrip()}'
            for k, v in obj.items())
        return f"{pad}{{\n{items}\n{pad}}}" if obj else pad + "{}"
    if isinstance(obj, (list, tuple)):
        items = ",\n".join(dumps(v, indent + 2) for v in obj)
        return f"{pad}[\n{items}\n{pad}]" if len(obj) else pad + "[]"
    leaf = _leaf(obj)
    if leaf is None:
        raise ValidationError(f"cannot serialize {type(obj).__name__}")
    return pad + leaf


def dumps_compact(obj) -> str:
    """Single-line JSON with the same float formatting as ``dumps``."""
    if isinstance(obj, dict):
        return "{" + ", ".join(
            f'{json.dumps(str(k))}: {dumps_compact(v)}' for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps_compact(v) for v in obj) + "]"
    leaf = _leaf(obj)
    if leaf is None:
        raise ValidationError(f"cannot serialize {type(obj).__name__}")
    return leaf


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text)


def _csv_lines(rows, header: str) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(float(v)) for v in row))
    return "\n".join(lines) + "\n"


# --- minimal SVG -------------------------------------------------------------

def _svg_plot(path: str, pts, xlabel: str, ylabel: str, connect: bool = False) -> None:
    """Scatter (or polyline) of (x, y) points on fixed 640x480 axes."""
    W, H, M = 640, 480, 60
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    if xhi == xlo:
        xlo, xhi = xlo - 1.0, xhi + 1.0
    if yhi == ylo:
        ylo, yhi = ylo - 1.0, yhi + 1.0

    def sx(x):
        return M + (x - xlo) / (xhi - xlo) * (W - 2 * M)

    def sy(y):
        return H - M - (y - ylo) / (yhi - ylo) * (H - 2 * M)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{M}" y1="{H - M}" x2="{W - M}" y2="{H - M}" stroke="black"/>',
        f'<line x1="{M}" y1="{M}" x2="{M}" y2="{H - M}" stroke="black"/>',
        f'<text x="{W // 2}" y="{H - 15}" text-anchor="middle" font-size="14">{xlabel}</text>',
        f'<text x="18" y="{H // 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 18 {H // 2})">{ylabel}</text>',
        f'<text x="{M}" y="{H - M + 18}" font-size="11">{_fmt(xlo, _TABLE_DIGITS)}</text>',
        f'<text x="{W - M}" y="{H - M + 18}" text-anchor="end" font-size="11">{_fmt(xhi, _TABLE_DIGITS)}</text>',
        f'<text x="{M - 4}" y="{H - M}" text-anchor="end" font-size="11">{_fmt(ylo, _TABLE_DIGITS)}</text>',
        f'<text x="{M - 4}" y="{M + 4}" text-anchor="end" font-size="11">{_fmt(yhi, _TABLE_DIGITS)}</text>',
    ]
    if connect and len(pts) > 1:
        path_pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(f'<polyline points="{path_pts}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    else:
        for x, y in pts:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="steelblue"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


# --- argument plumbing --------------------------------------------------------

def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", default=None, help="model id, e.g. rmkp, rmbo-kp, rm-whitham-kp")
    p.add_argument("--gamma", type=float, default=None, help="rotation parameter (> 0)")
    p.add_argument("--beta", type=float, default=None, help="dispersion scale")
    p.add_argument("--alpha", type=float, default=None, help="symbol exponent (rm-fkdv-kp)")


def _parse_grid(text: str) -> list:
    """Parse 'lo:hi:num' into a list, or a comma list of values."""
    if ":" in text:
        lo, hi, num = text.split(":")
        return list(np.linspace(float(lo), float(hi), int(num)))
    return [float(v) for v in text.split(",")]


_DEFAULTS = {"model": "rmkp", "gamma": 1.0, "beta": 1.0, "alpha": None,
             "k": 1.0, "eps": 0.01, "N": 64}


def _merged(args: argparse.Namespace) -> dict:
    """Flag values over config-file values over defaults."""
    cfg = dict(_DEFAULTS)
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ValidationError("config file must hold a flat JSON object")
        cfg.update(loaded)
    for key, val in vars(args).items():
        if val is not None and key not in ("config", "func"):
            cfg[key] = val
    return cfg


def _model_from(cfg: dict) -> symbols.ModelSpec:
    for key in ("gamma", "beta", "k", "eps"):
        if key in cfg and cfg[key] is not None and not math.isfinite(float(cfg[key])):
            raise ValidationError(f"{key} must be finite")
    return symbols.make_model(cfg["model"], gamma=float(cfg["gamma"]),
                              beta=float(cfg["beta"]),
                              alpha=cfg.get("alpha"))


# --- subcommands ---------------------------------------------------------------

def _cmd_wave(args) -> int:
    cfg = _merged(args)
    model = _model_from(cfg)
    k, eps = float(cfg["k"]), float(cfg["eps"])
    wave = stokes.build_wave(model, k, eps)
    record = {
        "model": cfg["model"], "gamma": model.gamma, "beta": model.beta,
        "k": k, "eps": eps,
        "eta2": wave.eta2, "eta3": wave.eta3, "c0": wave.c0, "c2": wave.c2,
        "residual": stokes.residual_norm(model, wave, N=int(cfg["N"])),
    }
    _write_text(getattr(args, "json", None), dumps(record))
    if args.csv:
        zs = np.linspace(0.0, 2 * np.pi, int(args.samples), endpoint=False)
        rows = [(z, stokes.wave_profile(wave, z)) for z in zs]
        _write_text(args.csv, _csv_lines(rows, "z,eta"))
    return 0


def _collide_table(model, theta_max: int) -> str:
    cols = ("theta", "periodic", "nonperiodic")
    rows = []
    for theta in range(1, theta_max + 1):
        cells = {"theta": str(theta)}
        for pert in ("periodic", "nonperiodic"):
            recs = collisions.enumerate_potentially_unstable(model, theta, pert)
            cells[pert] = " ".join(f"{{{r.n},{r.m}}}" for r in recs) or "none"
        rows.append(cells)
    widths = {c: max(len(c), *(len(r[c]) for r in rows)) for c in cols}
    lines = ["  ".join(c.ljust(widths[c]) for c in cols)]
    for r in rows:
        lines.append("  ".join(r[c].ljust(widths[c]) for c in cols))
    return "\n".join(lines) + "\n"


def _cmd_collide(args) -> int:
    cfg = _merged(args)
    model = _model_from(cfg)
    if args.table:
        sys.stdout.write(_collide_table(model, args.theta_max))
        return 0
    k = float(args.k) if args.k is not None else None
    records = collisions.enumerate_potentially_unstable(
        model, args.theta, args.perturbation, k=k)
    out = "\n".join(dumps_compact(r.as_dict()) for r in records)
    _write_text(getattr(args, "json", None), out)
    return 0


def _cmd_classify(args) -> int:
    cfg = _merged(args)
    model = _model_from(cfg)
    verdict = reduced.classify(model, float(cfg["k"]))
    record = {"model": cfg["model"], "gamma": model.gamma, "beta": model.beta,
              "k": float(cfg["k"])}
    record.update(verdict.as_dict())
    _write_text(getattr(args, "json", None), dumps(record))
    return 0


def _cmd_spectrum(args) -> int:
    cfg = _merged(args)
    model = _model_from(cfg)
    k, eps, N = float(cfg["k"]), float(cfg["eps"]), int(cfg["N"])
    rho, xi = float(args.rho), float(args.xi)
    wave = stokes.build_wave(model, k, eps, check=False)
    if args.shift is not None:
        try:
            re, im = (float(v) for v in args.shift.split(","))
        except ValueError as exc:
            raise ValidationError(f"--shift expects 're,im', got {args.shift!r}") from exc
        result = operator.shift_invert_eigs(model, wave, rho, xi, N,
                                            shift=complex(re, im), count=args.count)
    else:
        result = operator.eig_dense(operator.assemble_operator(model, wave, rho, xi, N))
    _write_text(getattr(args, "json", None), dumps(result.as_dict()))
    if args.csv:
        rows = [(ev.real, ev.imag) for ev in result.eigenvalues]
        _write_text(args.csv, _csv_lines(rows, "re,im"))
    if args.svg:
        _svg_plot(args.svg, [(float(ev.real), float(ev.imag)) for ev in result.eigenvalues],
                  "Re lambda", "Im lambda")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _merged(args)
    model = _model_from(cfg)
    k, eps, N = float(cfg["k"]), float(cfg["eps"]), int(cfg["N"])
    rho_grid = _parse_grid(args.rho_grid)
    xi_grid = _parse_grid(args.xi_grid)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = operator.sweep(model, k, eps, rho_grid, xi_grid, N)
    manifest = {"model": cfg["model"], "gamma": model.gamma, "beta": model.beta,
                "k": k, "eps": eps, "N": N, "points": []}
    for i, res in enumerate(results):
        name = f"point_{i:04d}.csv"
        rows = [(ev.real, ev.imag) for ev in res.eigenvalues]
        _write_text(str(out_dir / name), _csv_lines(rows, "re,im"))
        manifest["points"].append({
            "file": name, "rho": res.rho, "xi": res.xi,
            "max_real": res.max_real, "error": res.error,
        })
    bubbles = operator.detect_bubbles(results, threshold=args.bubble_threshold)
    manifest["bubbles"] = [b.as_dict() for b in bubbles]
    _write_text(str(out_dir / "manifest.json"), dumps(manifest))
    if args.svg:
        pts = sorted((res.xi, res.max_real) for res in results if res.error is None)
        _svg_plot(args.svg, pts, "xi", "max Re lambda", connect=True)
    return 0


def _cmd_atlas(args) -> int:
    cfg = _merged(args)
    table = reduced.atlas(gamma=float(cfg["gamma"]),
                          fkdv_alpha=float(args.fkdv_alpha))
    headers = ["model"] + list(reduced.ATLAS_COLUMNS)
    rows = []
    for mid, cells in table.items():
        rows.append([mid] + ["Unstable" if cells[c].outcome == "unstable" else "Stable"
                             for c in reduced.ATLAS_COLUMNS])
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    for r in rows:
        lines.append("  ".join(v.ljust(widths[i]) for i, v in enumerate(r)))
    sys.stdout.write("\n".join(lines) + "\n")
    if args.json:
        record = {mid: {c: cells[c].as_dict() for c in reduced.ATLAS_COLUMNS}
                  for mid, cells in table.items()}
        _write_text(args.json, dumps(record))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transpec",
        description="Transverse spectral stability of small periodic traveling waves",
    )
    parser.add_argument("--config", default=None, help="flat JSON config file; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wave", help="wave expansion coefficients and residual")
    _add_model_args(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--json", default=None, help="output path (default stdout)")
    p.add_argument("--csv", default=None, help="write (z, eta) samples here")
    p.add_argument("--samples", type=int, default=256)
    p.set_defaults(func=_cmd_wave)

    p = sub.add_parser("collide", help="potentially unstable collision records")
    _add_model_args(p)
    p.add_argument("--k", type=float, default=None,
                   help="evaluate records at this wavenumber (default: search a witness)")
    p.add_argument("--theta", type=int, default=2, help="mode separation")
    p.add_argument("--perturbation", choices=("periodic", "nonperiodic"),
                   default="periodic")
    p.add_argument("--table", action="store_true",
                   help="render the potentially-unstable-node table")
    p.add_argument("--theta-max", type=int, default=4)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_collide)

    p = sub.add_parser("classify", help="stability verdict at one wavenumber")
    _add_model_args(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("spectrum", help="eigenvalues at one (rho, xi)")
    _add_model_args(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--shift", default=None, help="shift-invert target 're,im'")
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--json", default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("sweep", help="spectra over a (rho, xi) grid")
    _add_model_args(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--rho-grid", required=True, help="'lo:hi:num' or comma list")
    p.add_argument("--xi-grid", required=True, help="'lo:hi:num' or comma list")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--bubble-threshold", type=float, default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("atlas", help="stability table over all named models")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--fkdv-alpha", type=float, default=1.5)
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_atlas)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, TranspecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

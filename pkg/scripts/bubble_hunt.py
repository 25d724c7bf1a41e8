#!/usr/bin/env python3
"""Locate and resolve a high-frequency instability bubble.

Walks the adjacent-pair collision curve rho_c(xi), finds the Floquet exponent
whose collision frequency magnitude matches --target, then resolves the
numeric spectrum there and writes eigenvalues plus a bubble summary.

    python3 scripts/bubble_hunt.py --k 2 --eps 0.01 --out-dir out/bubble
"""

import argparse
from pathlib import Path

import numpy as np

from transpec import (
    build_wave, collision_rho_squared, detect_bubbles, eig_dense,
    assemble_operator, make_model, omega, sweep,
)
from transpec.cli import _csv_lines, _svg_plot, dumps


def collision_frequency(model, k, xi):
    r2 = collision_rho_squared(model, -1, 0, xi, k)
    if r2 <= 0:
        return np.nan
    return omega(model, 0, np.sqrt(r2), xi, k)


def solve_xi(model, k, target, lo=0.40, hi=0.49999):
    f = lambda xi: abs(collision_frequency(model, k, xi)) - target
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--model", default="rmkp")
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--k", type=float, default=2.0)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--target", type=float, default=0.37916,
                    help="imaginary-axis height of the bubble to hunt")
    ap.add_argument("--out-dir", default="out/bubble")
    args = ap.parse_args()

    model = make_model(args.model, gamma=args.gamma, beta=args.beta)
    xi = solve_xi(model, args.k, args.target)
    rho = np.sqrt(collision_rho_squared(model, -1, 0, xi, args.k))
    print(f"collision curve hit: xi={xi:.6f} rho_c={rho:.6f}")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    wave = build_wave(model, args.k, args.eps, check=False)
    res = eig_dense(assemble_operator(model, wave, rho, xi, args.N))
    (out / "spectrum.csv").write_text(
        _csv_lines([(ev.real, ev.imag) for ev in res.eigenvalues], "re,im"))
    _svg_plot(str(out / "spectrum.svg"),
              [(float(ev.real), float(ev.imag)) for ev in res.eigenvalues],
              "Re lambda", "Im lambda")

    results = sweep(model, args.k, args.eps, [float(rho)], [-xi, xi], N=args.N)
    bubbles = detect_bubbles(results, threshold=1e-4)
    (out / "bubbles.json").write_text(dumps([b.as_dict() for b in bubbles]))
    for b in bubbles:
        print(f"bubble: center={b.center:.6f} max_growth={b.max_growth:.6f}")
    print(f"wrote {out}/spectrum.csv, spectrum.svg, bubbles.json")


if __name__ == "__main__":
    main()

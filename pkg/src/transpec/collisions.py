"""Unperturbed spectrum: mode frequencies, Krein signatures, collisions.

At zero amplitude the linearized flow is diagonal in Fourier space with purely
imaginary eigenvalues ``i * Omega(n, rho, xi)``.  Instability at small
amplitude can only emerge where two of these frequencies collide with opposite
Krein signatures, so everything here reduces to sign analysis of the closed
form for the colliding transverse wavenumber rho^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, ValidationError
from .symbols import ModelSpec

#: rho^2 values with magnitude below this (relative to gamma) count as zero.
_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class ModeIndex:
    """A Fourier/Floquet mode label with composite frequency index p = n + xi."""

    n: int
    xi: float = 0.0

    def __post_init__(self):
        if not (-0.5 < self.xi <= 0.5):
            raise DomainError(f"Floquet exponent must lie in (-1/2, 1/2], got {self.xi}")
        if self.p == 0.0:
            raise DomainError("mode with n + xi = 0 is excluded")

    @property
    def p(self) -> float:
        return self.n + self.xi


@dataclass(frozen=True)
class CollisionRecord:
    """One frequency collision of the modes n and m = n + theta at (k, xi)."""

    n: int
    m: int
    xi: float
    k: float
    rho_c: float
    omega_c: float
    krein_n: int
    krein_m: int
    opposite_krein: bool
    at_origin: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m, "xi": self.xi, "k": self.k,
            "rho_c": self.rho_c, "omega_c": self.omega_c,
            "krein_n": self.krein_n, "krein_m": self.krein_m,
            "opposite_krein": self.opposite_krein, "at_origin": self.at_origin,
        }


def omega(model: ModelSpec, n: int, rho: float, xi: float, k: float) -> float:
    """Frequency of mode n at transverse wavenumber rho and Floquet exponent xi.

    Odd under (n, xi) -> (-n, -xi).  The composite index p = n + xi must be
    nonzero.
    """
    p = n + xi
    if p == 0.0:
        raise DomainError("omega undefined at n + xi = 0")
    if not (np.isfinite(k) and k > 0):
        raise DomainError(f"wavenumber must be positive, got {k}")
    g = model.gamma
    return (g * (p - 1.0 / p)
            + k**2 * p * (model.j_eff(k) - model.j_eff(k * p))
            - rho**2 / p)


def _omega_at_zero_rho(model: ModelSpec, p: float, k: float) -> float:
    """Frequency at rho = 0 as a function of the composite index p."""
    g = model.gamma
    return g * (p - 1.0 / p) + k**2 * p * (model.j_eff(k) - model.j_eff(k * p))


def krein_signature(model: ModelSpec, n: int, rho: float, xi: float, k: float) -> int:
    """Sign of Omega / (n + xi); zero only for a zero frequency."""
    w = omega(model, n, rho, xi, k)
    return int(np.sign(w / (n + xi)))


def collision_rho_squared(model: ModelSpec, n: int, m: int, xi: float, k: float) -> float:
    """The unique rho^2 at which modes n and m share a frequency.

    A negative return value means the two frequencies never collide for real
    rho at this (k, xi).
    """
    p = n + xi
    q = m + xi
    if p == 0.0 or q == 0.0:
        raise DomainError("collision undefined when a composite index vanishes")
    if p == q:
        raise DomainError("collision needs two distinct modes")
    if not (np.isfinite(k) and k > 0):
        raise DomainError(f"wavenumber must be positive, got {k}")
    ap = _omega_at_zero_rho(model, p, k)
    aq = _omega_at_zero_rho(model, q, k)
    return p * q * (ap - aq) / (q - p)


def is_origin_collision(n: int, theta: int, xi: float) -> bool:
    """True exactly for the two patterns that collide at zero frequency."""
    if theta % 2 == 0 and n == -theta // 2 and abs(xi) < 1e-12:
        return True
    if theta % 2 == 1 and n == -(theta + 1) // 2 and abs(xi - 0.5) < 1e-12:
        return True
    return False


def _rho_sq_over_k(model: ModelSpec, n: int, m: int, xi: float,
                   karr: np.ndarray) -> np.ndarray:
    """Vectorized rho^2(k) at fixed mode pair and Floquet exponent."""
    p = n + xi
    q = m + xi
    g = model.gamma
    jk = model.j_eff(karr)
    ap = g * (p - 1.0 / p) + karr**2 * p * (jk - model.j_eff(karr * p))
    aq = g * (q - 1.0 / q) + karr**2 * q * (jk - model.j_eff(karr * q))
    return p * q * (ap - aq) / (q - p)


def _rho_sq_over_xi(model: ModelSpec, n: int, m: int, xiarr: np.ndarray,
                    k: float) -> np.ndarray:
    """Vectorized rho^2(xi) at fixed mode pair and wavenumber."""
    p = n + xiarr
    q = m + xiarr
    g = model.gamma
    jk = model.j_eff(k)
    ap = g * (p - 1.0 / p) + k**2 * p * (jk - model.j_eff(k * p))
    aq = g * (q - 1.0 / q) + k**2 * q * (jk - model.j_eff(k * q))
    return p * q * (ap - aq) / (q - p)


def _refine_root(f, a: float, b: float) -> float:
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return float(a)
    if fb == 0.0:
        return float(b)
    return float(brentq(f, a, b, xtol=1e-12))


def _positive_intervals(grid: np.ndarray, vals: np.ndarray, solve,
                        lo_open: float, hi_open: float) -> List[Tuple[float, float]]:
    """Maximal intervals where ``vals > 0``; sign flips refined by ``solve``.

    Intervals still positive at a scan edge are extended to ``lo_open`` or
    ``hi_open`` (typically 0 and inf) since the scan cannot bound them.
    """
    pos = vals > 0.0
    intervals: List[Tuple[float, float]] = []
    i = 0
    size = grid.size
    while i < size:
        if not pos[i]:
            i += 1
            continue
        start = lo_open if i == 0 else solve(grid[i - 1], grid[i])
        j = i
        while j + 1 < size and pos[j + 1]:
            j += 1
        end = hi_open if j == size - 1 else solve(grid[j], grid[j + 1])
        intervals.append((float(start), float(end)))
        i = j + 1
    return intervals


def collision_wavenumber_window(model: ModelSpec, n: int, theta: int, xi: float = 0.0,
                                k_range=(1e-3, 1e3), brackets: int = 512):
    """k-intervals on which the (n, n+theta) collision exists at this xi.

    Scans ``brackets`` log-spaced cells over ``k_range`` and bisects each sign
    change of rho^2(k) to locate boundaries.  Windows still open at the scan
    edges are reported as (0, .) or (., inf).  If rho^2 vanishes identically
    (the mirror pair), the collision exists at rho = 0 for every k and the
    full half line is returned.
    """
    if theta < 1:
        raise ValidationError("theta must be a positive integer")
    m = n + theta
    if n + xi == 0.0 or m + xi == 0.0:
        raise DomainError("collision undefined when a composite index vanishes")
    grid = np.geomspace(k_range[0], k_range[1], brackets + 1)
    vals = _rho_sq_over_k(model, n, m, xi, grid)
    scale = max(model.gamma, float(np.max(np.abs(vals))))
    if np.max(np.abs(vals)) <= _ZERO_TOL * scale:
        return [(0.0, math.inf)]

    def solve(a, b):
        return _refine_root(lambda k: collision_rho_squared(model, n, m, xi, k), a, b)

    return _positive_intervals(grid, vals, solve, 0.0, math.inf)


def collision_floquet_window(model: ModelSpec, n: int, theta: int, k: float,
                             samples: int = 4096):
    """xi-intervals in (0, 1/2] on which the (n, n+theta) collision exists at this k."""
    if theta < 1:
        raise ValidationError("theta must be a positive integer")
    if not k > 0:
        raise DomainError("wavenumber must be positive")
    m = n + theta
    grid = np.linspace(0.5 / samples, 0.5, samples)
    # composite indices must stay nonzero on the scan
    grid = grid[(np.abs(grid + n) > 1e-9) & (np.abs(grid + m) > 1e-9)]
    vals = _rho_sq_over_xi(model, n, m, grid, k)

    def solve(a, b):
        return _refine_root(lambda xi: collision_rho_squared(model, n, m, xi, k), a, b)

    return _positive_intervals(grid, vals, solve, 0.0, 0.5)


def _window_witness(window: Tuple[float, float]) -> float:
    """A representative interior point of a (possibly half-open) k-window."""
    lo, hi = window
    if lo == 0.0 and math.isinf(hi):
        return 1.0
    if lo == 0.0:
        return hi / 2.0
    if math.isinf(hi):
        return 2.0 * lo
    return math.sqrt(lo * hi)


def _make_record(model: ModelSpec, n: int, theta: int, xi: float, k: float,
                 rho_sq: float) -> CollisionRecord:
    m = n + theta
    rho_c = math.sqrt(max(rho_sq, 0.0))
    w = omega(model, n, rho_c, xi, k)
    at_origin = is_origin_collision(n, theta, xi) or abs(w) < 1e-10
    if at_origin:
        # the common frequency is exactly zero; do not let rounding pick a sign
        kn = km = 0
    else:
        kn = krein_signature(model, n, rho_c, xi, k)
        km = krein_signature(model, m, rho_c, xi, k)
    return CollisionRecord(
        n=n, m=m, xi=xi, k=float(k), rho_c=rho_c, omega_c=float(w),
        krein_n=kn, krein_m=km,
        opposite_krein=(n + xi) * (m + xi) < 0,
        at_origin=at_origin,
    )


def _collision_at(model: ModelSpec, n: int, theta: int, xi: float,
                  k: Optional[float]) -> Optional[Tuple[float, float]]:
    """Find a witness (k, rho^2 >= 0) for the pair (n, n+theta) at this xi."""
    m = n + theta
    if k is not None:
        rho_sq = collision_rho_squared(model, n, m, xi, k)
        if rho_sq >= -_ZERO_TOL * model.gamma:
            return float(k), max(rho_sq, 0.0)
        return None
    windows = collision_wavenumber_window(model, n, theta, xi)
    if not windows:
        return None
    kw = _window_witness(windows[0])
    return kw, max(collision_rho_squared(model, n, m, xi, kw), 0.0)


def enumerate_potentially_unstable(model: ModelSpec, theta: int, perturbation: str,
                                   k: Optional[float] = None,
                                   xi_grid: Optional[Sequence[float]] = None,
                                   ) -> List[CollisionRecord]:
    """Collision records that pass the opposite-Krein-signature filter.

    ``perturbation`` selects the mode space: ``"periodic"`` restricts to
    integer modes with xi = 0 (mean-zero space, so neither index may vanish);
    ``"nonperiodic"`` sweeps xi over (0, 1/2] and admits the zero mode.  When
    ``k`` is omitted, a witness wavenumber inside the first collision window
    is chosen per pair; pairs with no collision anywhere are dropped.
    """
    if theta < 1:
        raise ValidationError("theta must be a positive integer")
    if perturbation not in ("periodic", "nonperiodic"):
        raise ValidationError("perturbation must be 'periodic' or 'nonperiodic'")

    records: List[CollisionRecord] = []
    if perturbation == "periodic":
        for n in range(-theta + 1, 0):
            hit = _collision_at(model, n, theta, 0.0, k)
            if hit is not None:
                kw, rho_sq = hit
                records.append(_make_record(model, n, theta, 0.0, kw, rho_sq))
    else:
        if xi_grid is None:
            xi_grid = [0.5 * j / 64 for j in range(64, 0, -1)]
        for n in range(-theta, 0):
            for xi in xi_grid:
                if abs(n + xi) < 1e-9 or abs(n + theta + xi) < 1e-9:
                    continue
                if (n + xi) * (n + theta + xi) >= 0:
                    continue
                hit = _collision_at(model, n, theta, xi, k)
                if hit is not None:
                    kw, rho_sq = hit
                    records.append(_make_record(model, n, theta, xi, kw, rho_sq))
                    break
    return sorted(records, key=lambda r: r.n)

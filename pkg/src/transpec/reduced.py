"""Finite-dimensional bifurcation analysis and stability verdicts.

Two instability channels exist at small amplitude: the long-wavelength double
zero eigenvalue (co-periodic perturbations, transverse wavenumber near 0) and
the adjacent-mode collision band (non-periodic perturbations, finite
transverse wavenumber).  Wider mode separations never bifurcate, so verdicts
reduce to the sign of one margin function per channel.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .collisions import collision_rho_squared, omega
from .errors import DomainError, ValidationError
from .stokes import check_resonance, stokes_coefficients
from .symbols import ModelSpec, make_model

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

#: Column keys of the stability atlas, in presentation order.
ATLAS_COLUMNS = (
    "lw_periodic_beta_pos",
    "lw_periodic_beta_nonpos",
    "lw_nonperiodic",
    "fsw_periodic",
    "fsw_nonperiodic_beta_pos",
    "fsw_nonperiodic_beta_nonpos",
)

ATLAS_MODELS = (
    "rmbo-kp",
    "rm-fkdv-kp",
    "rmg-kp",
    "rm-mkdv-kp",
    "rm-whitham-kp",
    "rmilw-kp",
)


@dataclass(frozen=True)
class Verdict:
    """A stability decision with the analysis tag and thresholds behind it."""

    outcome: str                       # "unstable" | "stable" | "inconclusive"
    theorem: str                       # analysis tag, e.g. "t1".."t8"
    thresholds: Dict[str, float] = field(default_factory=dict)
    conditions: List[Tuple[str, bool]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "theorem": self.theorem,
            "thresholds": dict(self.thresholds),
            "conditions": [list(c) for c in self.conditions],
        }


@dataclass(frozen=True)
class Theta1Band:
    """The adjacent-pair instability band at one Floquet exponent."""

    xi: float
    rho_c_sq: float
    halfwidth: float
    omega_c: float
    growth_peak: float

    @property
    def exists(self) -> bool:
        return self.rho_c_sq > 0


def _is_kdv_quadratic(model: ModelSpec) -> bool:
    """True for the plain quadratic kdv-symbol family (dedicated verdict tags)."""
    return model.symbol.id == "kdv" and model.alpha1 == 1 and model.alpha2 == 0


def golden_max(f, lo: float, hi: float, tol: float = 1e-8) -> Tuple[float, float]:
    """Golden-section maximizer of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _sign_flip_points(f, k_range=(1e-3, 1e3), brackets: int = 512,
                      xtol: float = 1e-12) -> List[float]:
    """Locations where sign(f(k)) flips, found by bisection on the sign.

    Bisection on the sign converges on both roots and poles of f, which is
    what a verdict boundary can be.
    """
    grid = np.geomspace(k_range[0], k_range[1], brackets + 1)
    signs = []
    for k in grid:
        try:
            v = f(k)
            signs.append(0.0 if not np.isfinite(v) else np.sign(v))
        except ValidationError:
            signs.append(0.0)
    flips = []
    for i in range(len(signs) - 1):
        s0, s1 = signs[i], signs[i + 1]
        if s0 == 0.0 or s1 == 0.0 or s0 == s1:
            continue
        a, b = grid[i], grid[i + 1]
        while b - a > xtol:
            mid = 0.5 * (a + b)
            try:
                sm = np.sign(f(mid))
            except ValidationError:
                sm = 0.0
            if sm == s0:
                a = mid
            else:
                b = mid
        flips.append(0.5 * (a + b))
    return flips


# --- long-wavelength channel ------------------------------------------------

def _lw_margin_raw(model: ModelSpec, k: float) -> float:
    """Unguarded margin; +-inf exactly at the first resonance (a verdict pole)."""
    eta2 = 2.0 * model.alpha1 * k**2 / (
        3.0 * model.gamma + 4.0 * k**2 * (model.j_eff(k) - model.j_eff(2 * k)))
    return 1.5 * model.alpha2 + 2.0 * model.alpha1 * eta2


def lw_margin(model: ModelSpec, k: float) -> float:
    """Margin (3/2) alpha2 + 2 alpha1 eta2(k); negative means unstable."""
    eta2, _, _ = stokes_coefficients(model, k)
    return 1.5 * model.alpha2 + 2.0 * model.alpha1 * eta2


def long_wavelength_lambda2(model: ModelSpec, k: float, eps: float, rho: float) -> float:
    """Leading-order squared growth rate of the pair bifurcating from zero.

    Positive values predict a real eigenvalue pair +/- sqrt(lambda^2); a
    negative value keeps the pair on the imaginary axis.
    """
    check_resonance(model, k)
    if abs(rho) > 0.1 or abs(eps) > 0.1:
        warnings.warn("long-wavelength reduction assumes |rho|, |eps| small",
                      stacklevel=2)
    return -(rho**2) * (rho**2 + k**2 * eps**2 * lw_margin(model, k))


def long_wavelength_verdict(model: ModelSpec, k: float,
                            k_range=(1e-3, 1e3)) -> Verdict:
    """Verdict for co-periodic perturbations with long transverse wavelength."""
    margin = lw_margin(model, k)
    unstable = margin < 0
    flips = _sign_flip_points(lambda kk: _lw_margin_raw(model, kk), k_range)
    thresholds: Dict[str, float] = {"lw_margin": float(margin)}
    for i, kf in enumerate(flips):
        thresholds["k_lw" if i == 0 else f"k_lw_{i + 1}"] = float(kf)
    kdv_family = _is_kdv_quadratic(model)
    if unstable:
        tag = "t1" if kdv_family else "t5"
    elif not flips:
        tag = "t3" if kdv_family else "t7"
    else:
        tag = "t1" if kdv_family else "t5"
    return Verdict(
        outcome="unstable" if unstable else "stable",
        theorem=tag,
        thresholds=thresholds,
        conditions=[("(3/2) alpha2 + 2 alpha1 eta2 < 0", bool(unstable))],
    )


# --- adjacent-pair band channel ----------------------------------------------

def theta1_band(model: ModelSpec, k: float, eps: float, xi: float) -> Theta1Band:
    """Instability band data for the adjacent pair (-1, 0) at this xi.

    The band exists when the collision wavenumber rho_c^2 is positive; its
    half-width is measured in rho^2 units.
    """
    if not (0 < xi <= 0.5):
        raise DomainError(f"xi must lie in (0, 1/2], got {xi}")
    if not k > 0:
        raise DomainError("wavenumber must be positive")
    rho_c_sq = collision_rho_squared(model, -1, 0, xi, k)
    halfwidth = 2.0 * model.alpha1 * k**2 * (xi * (1 - xi)) ** 1.5 * abs(eps)
    growth = model.alpha1 * k**2 * abs(eps) * math.sqrt(xi * (1 - xi))
    if rho_c_sq > 0:
        w = omega(model, 0, math.sqrt(rho_c_sq), xi, k)
    else:
        w = math.nan
    return Theta1Band(xi=float(xi), rho_c_sq=float(rho_c_sq),
                      halfwidth=float(halfwidth), omega_c=float(w),
                      growth_peak=float(growth))


def _max_band_rho_sq(model: ModelSpec, k: float) -> Tuple[float, float]:
    """Maximize rho_c^2 over xi in (0, 1/2]; returns (xi_star, value)."""
    return golden_max(lambda xi: collision_rho_squared(model, -1, 0, xi, k),
                      1e-4, 0.5, tol=1e-8)


def theta1_verdict(model: ModelSpec, k: float, k_range=(1e-3, 1e3)) -> Verdict:
    """Verdict for non-periodic perturbations with finite transverse wavelength."""
    if not k > 0:
        raise DomainError("wavenumber must be positive")
    xi_star, best = _max_band_rho_sq(model, k)
    unstable = best > 0
    thresholds: Dict[str, float] = {"xi_star": float(xi_star),
                                    "rho_c_sq_max": float(best)}
    if unstable:
        thresholds["rho_c"] = math.sqrt(best)
    flips = _sign_flip_points(lambda kk: _max_band_rho_sq(model, kk)[1], k_range,
                              brackets=160)
    for i, kf in enumerate(flips):
        thresholds["k_t1b" if i == 0 else f"k_t1b_{i + 1}"] = float(kf)
    kdv_family = _is_kdv_quadratic(model)
    if unstable:
        tag = "t2" if kdv_family else "t6"
    elif not flips:
        tag = "t3" if kdv_family else "t7"
    else:
        tag = "t2" if kdv_family else "t6"
    return Verdict(
        outcome="unstable" if unstable else "stable",
        theorem=tag,
        thresholds=thresholds,
        conditions=[("rho_c^2(xi) > 0 for some xi in (0, 1/2]", bool(unstable))],
    )


def theta_ge2_disc(model: ModelSpec, n: int, theta: int, xi: float,
                   varsigma: float, eps: float, beta2: float, k: float) -> float:
    """Leading two terms of the separation discriminant for theta >= 2 pairs.

    ``beta2`` is the unknown quadratic expansion coefficient of the operator;
    the stability conclusion needs only that the result is a sum of squares.
    """
    if theta < 2:
        raise ValidationError("this discriminant applies to theta >= 2")
    p = n + xi
    q = n + xi + theta
    if p == 0.0 or q == 0.0:
        raise DomainError("degenerate composite index in discriminant")
    return (theta**2 * varsigma**2 / (p**2 * q**2)
            + k**4 * theta**2 * beta2**2 * eps**4)


def classify(model: ModelSpec, k: float) -> Verdict:
    """Merged per-wavenumber verdict over both instability channels."""
    lw = long_wavelength_verdict(model, k)
    t1 = theta1_verdict(model, k)
    unstable = lw.outcome == "unstable" or t1.outcome == "unstable"
    thresholds = dict(lw.thresholds)
    thresholds.update(t1.thresholds)
    if lw.outcome == "unstable":
        tag = lw.theorem
    elif t1.outcome == "unstable":
        tag = t1.theorem
    else:
        tag = lw.theorem
    conditions = [("long-wavelength channel unstable", lw.outcome == "unstable"),
                  ("finite-wavelength band channel unstable", t1.outcome == "unstable")]
    return Verdict(outcome="unstable" if unstable else "stable", theorem=tag,
                   thresholds=thresholds, conditions=conditions)


# --- existence-over-k atlas ---------------------------------------------------

def _exists_lw_unstable(model: ModelSpec, k_grid: np.ndarray) -> Tuple[bool, Optional[float]]:
    for k in k_grid:
        if _lw_margin_raw(model, k) < 0:
            return True, float(k)
    return False, None


def _exists_band_unstable(model: ModelSpec, k_grid: np.ndarray) -> Tuple[bool, Optional[float]]:
    for k in k_grid:
        try:
            _, best = _max_band_rho_sq(model, k)
        except ValidationError:
            continue
        if best > 0:
            return True, float(k)
    return False, None


def _atlas_cell(model: ModelSpec, column: str, k_grid: np.ndarray) -> Verdict:
    general = not _is_kdv_quadratic(model)
    if column.startswith("lw_periodic"):
        hit, k_wit = _exists_lw_unstable(model, k_grid)
        thresholds = {"k_witness": k_wit} if hit else {}
        tag = ("t5" if general else "t1") if hit else "t7"
        return Verdict("unstable" if hit else "stable", tag, thresholds,
                       [("exists k with negative long-wavelength margin", hit)])
    if column == "lw_nonperiodic":
        # no opposite-signature collisions reach rho = 0 away from xi = 0
        return Verdict("stable", "lk1", {},
                       [("no potentially unstable node at long wavelength", False)])
    if column == "fsw_periodic":
        # separated pairs have a positive separation discriminant
        return Verdict("stable", "t8" if general else "t4", {},
                       [("mode-pair separation discriminant stays positive", False)])
    if column.startswith("fsw_nonperiodic"):
        hit, k_wit = _exists_band_unstable(model, k_grid)
        thresholds = {"k_witness": k_wit} if hit else {}
        tag = ("t6" if general else "t2") if hit else "t7"
        return Verdict("unstable" if hit else "stable", tag, thresholds,
                       [("exists (k, xi) with positive band rho_c^2", hit)])
    raise ValidationError(f"unknown atlas column {column!r}")


def atlas(model_ids: Sequence[str] = ATLAS_MODELS, gamma: float = 1.0,
          fkdv_alpha: float = 1.5, k_grid: Optional[np.ndarray] = None,
          ) -> Dict[str, Dict[str, Verdict]]:
    """Existence verdicts ('unstable for some k > 0') per model and perturbation class.

    Each named model is instantiated at beta = +1 and beta = -1 with the given
    gamma; columns pin the beta sign they quantify over.
    """
    if k_grid is None:
        k_grid = np.geomspace(1e-3, 1e3, 61)
    table: Dict[str, Dict[str, Verdict]] = {}
    for mid in model_ids:
        alpha = fkdv_alpha if mid == "rm-fkdv-kp" else None
        pos = make_model(mid, gamma=gamma, beta=1.0, alpha=alpha)
        neg = make_model(mid, gamma=gamma, beta=-1.0, alpha=alpha)
        table[mid] = {
            "lw_periodic_beta_pos": _atlas_cell(pos, "lw_periodic_beta_pos", k_grid),
            "lw_periodic_beta_nonpos": _atlas_cell(neg, "lw_periodic_beta_nonpos", k_grid),
            "lw_nonperiodic": _atlas_cell(pos, "lw_nonperiodic", k_grid),
            "fsw_periodic": _atlas_cell(pos, "fsw_periodic", k_grid),
            "fsw_nonperiodic_beta_pos": _atlas_cell(pos, "fsw_nonperiodic_beta_pos", k_grid),
            "fsw_nonperiodic_beta_nonpos": _atlas_cell(neg, "fsw_nonperiodic_beta_nonpos", k_grid),
        }
    return table

"""Small-amplitude periodic traveling waves of the one-dimensional reduction.

The wave is the three-harmonic expansion

    eta(z) = eps cos z + eps^2 eta2 cos 2z + eps^3 eta3 cos 3z,
    c(eps) = c0 + eps^2 c2,

valid away from resonant wavenumbers, with a Fourier-space residual norm
serving as the a-posteriori existence check (the residual decays like eps^4).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import AmplitudeValidityWarning, DomainError, ResonanceError, ValidationError
from .symbols import ModelSpec

#: Default half-distance in k below which a wavenumber counts as resonant.
RESONANCE_TOL = 1e-6

#: Highest harmonic checked by the resonance guard.
RESONANCE_GUARD_NMAX = 16


@dataclass(frozen=True)
class StokesWave:
    """A small-amplitude wave: wavenumber, amplitude and expansion coefficients."""

    model: ModelSpec
    k: float
    eps: float
    eta2: float
    eta3: float
    c0: float
    c2: float

    @property
    def speed(self) -> float:
        return self.c0 + self.eps**2 * self.c2

    def profile(self, z):
        return wave_profile(self, z)


def phase_speed_c0(model: ModelSpec, k: float) -> float:
    """Bifurcation speed of the fundamental mode: beta*j(k) + gamma/k^2."""
    if not (np.isfinite(k) and k > 0):
        raise DomainError(f"wavenumber must be positive, got {k}")
    return model.j_eff(k) + model.gamma / k**2


def _resonance_mismatch(model: ModelSpec, k: float, n: int) -> float:
    """Zero exactly when the fundamental and the n-th harmonic co-propagate."""
    return k**2 * (model.j_eff(k * n) - model.j_eff(k)) - model.gamma * (n**2 - 1) / n**2


def resonant_wavenumbers(model: ModelSpec, k_range=(1e-3, 1e3), n_max: int = 8,
                         brackets: int = 512):
    """All resonant wavenumbers in ``k_range`` for harmonics 2..n_max.

    Returns a list of (k, n) pairs sorted by k.  Each root is polished so the
    mismatch residual is below 1e-10.  Models whose effective symbol decreases
    have no resonances and yield an empty list.
    """
    lo, hi = k_range
    if not (0 < lo < hi):
        raise ValidationError(f"k_range must satisfy 0 < lo < hi, got {k_range}")
    if n_max < 2:
        raise ValidationError("n_max must be at least 2")
    grid = np.geomspace(lo, hi, brackets + 1)
    found = []
    for n in range(2, n_max + 1):
        vals = np.array([_resonance_mismatch(model, k, n) for k in grid])
        sign = np.sign(vals)
        for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
            root = brentq(lambda k: _resonance_mismatch(model, k, n),
                          grid[i], grid[i + 1], xtol=1e-14)
            found.append((float(root), n))
        for i in np.nonzero(vals == 0.0)[0]:
            found.append((float(grid[i]), n))
    return sorted(set(found))


def check_resonance(model: ModelSpec, k: float, tol: float = RESONANCE_TOL,
                    n_max: int = RESONANCE_GUARD_NMAX) -> None:
    """Raise ResonanceError when k is within ``tol`` of a resonant wavenumber."""
    if not (np.isfinite(k) and k > 0):
        raise DomainError(f"wavenumber must be positive, got {k}")
    lo = max(k - tol, 1e-30)
    hi = k + tol
    for n in range(2, n_max + 1):
        f_lo = _resonance_mismatch(model, lo, n)
        f_hi = _resonance_mismatch(model, hi, n)
        if f_lo == 0.0 or f_hi == 0.0 or (f_lo < 0) != (f_hi < 0):
            root = brentq(lambda kk: _resonance_mismatch(model, kk, n), lo, hi,
                          xtol=1e-14) if f_lo * f_hi < 0 else k
            raise ResonanceError(k, n, float(root))


def stokes_coefficients(model: ModelSpec, k: float,
                        resonance_tol: float = RESONANCE_TOL):
    """Harmonic coefficients (eta2, eta3) and speed correction c2 at wavenumber k."""
    check_resonance(model, k, tol=resonance_tol)
    g, a1, a2 = model.gamma, model.alpha1, model.alpha2
    jk = model.j_eff(k)
    d2 = 3 * g + 4 * k**2 * (jk - model.j_eff(2 * k))
    d3 = 8 * g + 9 * k**2 * (jk - model.j_eff(3 * k))
    eta2 = 2 * a1 * k**2 / d2
    eta3 = (9 * a1 * k**2 * eta2 + 2.25 * a2 * k**2) / d3
    c2 = a1 * eta2 + 0.75 * a2
    return float(eta2), float(eta3), float(c2)


def build_wave(model: ModelSpec, k: float, eps: float = 0.01,
               resonance_tol: float = RESONANCE_TOL, check: bool = True) -> StokesWave:
    """Construct the wave at (k, eps), warning when the truncation is strained."""
    eta2, eta3, c2 = stokes_coefficients(model, k, resonance_tol=resonance_tol)
    wave = StokesWave(model, float(k), float(eps), eta2, eta3,
                      phase_speed_c0(model, k), c2)
    if check and eps != 0.0:
        res = residual_norm(model, wave, N=32)
        norm = abs(eps) / np.sqrt(2.0)
        if res > 1e-6 * norm:
            warnings.warn(
                f"truncated expansion residual {res:.3g} exceeds 1e-6*|eta| at "
                f"eps={eps}; treat results as qualitative",
                AmplitudeValidityWarning,
                stacklevel=2,
            )
    return wave


def wave_profile(wave: StokesWave, z):
    """Profile eta(z); even and mean-free by construction."""
    z = np.asarray(z, dtype=float)
    e = wave.eps
    out = (e * np.cos(z)
           + e**2 * wave.eta2 * np.cos(2 * z)
           + e**3 * wave.eta3 * np.cos(3 * z))
    return out if out.ndim else float(out)


def profile_coefficients(wave: StokesWave) -> np.ndarray:
    """Complex Fourier coefficients of the profile, index offset 3 (j = -3..3)."""
    e = wave.eps
    half = np.array([e / 2, e**2 * wave.eta2 / 2, e**3 * wave.eta3 / 2])
    coeff = np.zeros(7)
    coeff[4:7] = half
    coeff[0:3] = half[::-1]
    return coeff


def residual_norm(model: ModelSpec, wave: StokesWave, N: int = 64) -> float:
    """L2 norm of the traveling-wave equation applied to the truncated wave.

    Evaluates k^2(-c eta'' + J_k eta'' + a1 (eta^2)'' + a2 (eta^3)'') - gamma eta
    on Fourier modes |j| <= N and returns the norm of the coefficient vector.
    Decays as O(eps^4) for fixed admissible k.
    """
    if N < 16:
        raise ValidationError("residual needs N >= 16 modes")
    check_resonance(model, wave.k)
    eta_hat = profile_coefficients(wave)          # j = -3..3
    sq_hat = np.convolve(eta_hat, eta_hat)        # j = -6..6
    cu_hat = np.convolve(sq_hat, eta_hat)         # j = -9..9
    k, g = wave.k, model.gamma
    c = wave.speed
    js = np.arange(-N, N + 1)
    eh = np.zeros(js.size)
    eh[(js >= -3) & (js <= 3)] = eta_hat
    sh = np.zeros(js.size)
    sh[(js >= -6) & (js <= 6)] = sq_hat
    ch = np.zeros(js.size)
    ch[(js >= -9) & (js <= 9)] = cu_hat
    jeff = model.j_eff(k * js.astype(float))
    F = k**2 * js**2 * (c * eh - jeff * eh - model.alpha1 * sh - model.alpha2 * ch) - g * eh
    return float(np.sqrt(np.sum(np.abs(F) ** 2)))

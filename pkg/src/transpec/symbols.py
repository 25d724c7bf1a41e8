"""Dispersion symbols and concrete model instances.

A model couples a scalar Fourier multiplier ``j(kappa)`` (even, real, strictly
monotone on ``kappa > 0``) with a dispersion scale ``beta``, quadratic/cubic
nonlinearity switches ``alpha1``/``alpha2`` and a rotation parameter
``gamma > 0``.  Every downstream formula consumes the effective symbol
``beta * j(kappa)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, ValidationError

# Threshold below which the removable singularities at kappa = 0 are replaced
# by their series limits (whitham and ilw).
_SERIES_CUTOFF = 1e-4

# Documented large-kappa growth exponents of the built-in symbols.
_GROWTH_EXPONENTS = {
    "kdv": 2.0,
    "bo": 1.0,
    "whitham": -0.5,
    "ilw": 1.0,
    "reduced": 0.0,
}


def _whitham_rule(x: np.ndarray) -> np.ndarray:
    # sqrt(tanh x / x) with the series 1 - x^2/6 near x = 0
    out = np.empty_like(x)
    small = x < _SERIES_CUTOFF
    out[small] = 1.0 - x[small] ** 2 / 6.0
    xs = x[~small]
    out[~small] = np.sqrt(np.tanh(xs) / xs)
    return out


def _ilw_rule(x: np.ndarray) -> np.ndarray:
    # x * coth(x) with the series 1 + x^2/3 near x = 0
    out = np.empty_like(x)
    small = x < _SERIES_CUTOFF
    out[small] = 1.0 + x[small] ** 2 / 3.0
    xs = x[~small]
    out[~small] = xs / np.tanh(xs)
    return out


@dataclass(frozen=True)
class DispersionSymbol:
    """An even, real-valued Fourier multiplier rule ``kappa -> j(kappa)``.

    ``id`` selects the evaluation rule: one of ``kdv``, ``bo``, ``fkdv``
    (needs ``alpha > 1/2``), ``whitham``, ``ilw``, ``reduced`` (constant) or
    ``custom`` (callable ``fn``).
    """

    id: str
    alpha: Optional[float] = None
    constant: float = 1.0
    fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.id == "fkdv":
            if self.alpha is None or not self.alpha > 0.5:
                raise ValidationError("fkdv symbol needs an exponent alpha > 1/2")
        elif self.id == "custom":
            if self.fn is None:
                raise ValidationError("custom symbol needs a callable")
        elif self.id not in ("kdv", "bo", "whitham", "ilw", "reduced"):
            raise ValidationError(f"unknown dispersion symbol id {self.id!r}")

    def evaluate(self, kappa):
        """Evaluate j(kappa); even in kappa by construction for built-ins."""
        kappa = np.asarray(kappa, dtype=float)
        if not np.all(np.isfinite(kappa)):
            raise DomainError("dispersion symbol evaluated at non-finite kappa")
        x = np.abs(kappa)
        if self.id == "kdv":
            out = x * x
        elif self.id == "bo":
            out = x.copy()
        elif self.id == "fkdv":
            out = 1.0 + x**self.alpha
        elif self.id == "whitham":
            out = _whitham_rule(np.atleast_1d(x))
        elif self.id == "ilw":
            out = _ilw_rule(np.atleast_1d(x))
        elif self.id == "reduced":
            out = np.full_like(x, self.constant)
        else:
            out = np.asarray(self.fn(kappa), dtype=float)
        out = np.reshape(out, kappa.shape)
        return out if out.ndim else float(out)

    @property
    def growth_exponent(self) -> Optional[float]:
        """Documented large-kappa exponent b with j ~ kappa^b, when known."""
        if self.id == "fkdv":
            return self.alpha
        return _GROWTH_EXPONENTS.get(self.id)


def kdv() -> DispersionSymbol:
    return DispersionSymbol("kdv")


def bo() -> DispersionSymbol:
    return DispersionSymbol("bo")


def fkdv(alpha: float) -> DispersionSymbol:
    return DispersionSymbol("fkdv", alpha=alpha)


def whitham() -> DispersionSymbol:
    return DispersionSymbol("whitham")


def ilw() -> DispersionSymbol:
    return DispersionSymbol("ilw")


def reduced(constant: float = 1.0) -> DispersionSymbol:
    return DispersionSymbol("reduced", constant=constant)


def custom(fn: Callable) -> DispersionSymbol:
    return DispersionSymbol("custom", fn=fn)


@dataclass(frozen=True)
class ModelSpec:
    """A concrete equation instance.

    Parameters
    ----------
    symbol : DispersionSymbol
        The raw multiplier rule j(kappa).
    beta : float
        Dispersion scale; the effective symbol is ``beta * j``.
    alpha1 : int
        Quadratic nonlinearity switch, 0 or 1.
    alpha2 : int
        Cubic nonlinearity switch, -1 or 0.
    gamma : float
        Rotation parameter, strictly positive.
    """

    symbol: DispersionSymbol
    beta: float
    alpha1: int
    alpha2: int
    gamma: float
    name: str = "custom"

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValidationError(f"gamma must be > 0, got {self.gamma}")
        if not np.isfinite(self.beta):
            raise ValidationError("beta must be finite")
        if self.alpha1 not in (0, 1):
            raise ValidationError(f"alpha1 must be 0 or 1, got {self.alpha1}")
        if self.alpha2 not in (-1, 0):
            raise ValidationError(f"alpha2 must be -1 or 0, got {self.alpha2}")

    def j_eff(self, kappa):
        """Effective symbol beta * j(kappa)."""
        return self.beta * self.symbol.evaluate(kappa)


def eval_symbol(model: ModelSpec, kappa) -> float:
    """Evaluate the effective symbol beta * j at kappa (scalar or array)."""
    return model.j_eff(kappa)


# --- named model registry -------------------------------------------------

MODEL_IDS = (
    "rmkp",
    "rmbo-kp",
    "rm-fkdv-kp",
    "rmg-kp",
    "rm-mkdv-kp",
    "rm-whitham-kp",
    "rmilw-kp",
    "reduced-rmkp",
)


def make_model(model_id: str, gamma: float = 1.0, beta: float = 1.0,
               alpha: Optional[float] = None) -> ModelSpec:
    """Build a named model instance.

    ``alpha`` is consumed only by ``rm-fkdv-kp``.  ``reduced-rmkp`` carries a
    constant symbol, so its dynamics do not depend on ``beta``.
    """
    if model_id == "rmkp":
        return ModelSpec(kdv(), beta, 1, 0, gamma, name=model_id)
    if model_id == "rmbo-kp":
        return ModelSpec(bo(), beta, 1, 0, gamma, name=model_id)
    if model_id == "rm-fkdv-kp":
        if alpha is None:
            raise ValidationError("rm-fkdv-kp needs an exponent alpha > 1/2")
        return ModelSpec(fkdv(alpha), beta, 1, 0, gamma, name=model_id)
    if model_id == "rmg-kp":
        return ModelSpec(fkdv(2.0), beta, 1, -1, gamma, name=model_id)
    if model_id == "rm-mkdv-kp":
        return ModelSpec(fkdv(2.0), beta, 0, -1, gamma, name=model_id)
    if model_id == "rm-whitham-kp":
        return ModelSpec(whitham(), beta, 1, 0, gamma, name=model_id)
    if model_id == "rmilw-kp":
        return ModelSpec(ilw(), beta, 1, 0, gamma, name=model_id)
    if model_id == "reduced-rmkp":
        return ModelSpec(reduced(1.0), beta, 1, 0, gamma, name=model_id)
    raise ValidationError(f"unknown model id {model_id!r}; known: {', '.join(MODEL_IDS)}")


# --- hypothesis checks ----------------------------------------------------

def _classify_values(grid: np.ndarray, vals: np.ndarray) -> str:
    """Sign class of a sampled function, or raise naming a violating pair."""
    d = np.diff(vals)
    tol = 1e-13 * max(1.0, float(np.max(np.abs(vals))))
    pos = d > tol
    neg = d < -tol
    if pos.any() and neg.any():
        flip = int(np.argmax(neg)) if pos.sum() >= neg.sum() else int(np.argmax(pos))
        raise ValidationError(
            "not monotone: opposite slopes around kappa in "
            f"({grid[flip]:.6g}, {grid[flip + 1]:.6g})"
        )
    if pos.any():
        return "increasing"
    if neg.any():
        return "decreasing"
    raise ValidationError(
        f"not strictly monotone: constant on the sampled grid ({grid[0]:.6g}, {grid[-1]:.6g})"
    )


def classify_monotonicity(model: ModelSpec, kappa_max: float = 10.0,
                          samples: int = 4096) -> str:
    """Classify the effective symbol beta*j as increasing or decreasing on (0, kappa_max]."""
    if not kappa_max > 0:
        raise ValidationError("kappa_max must be positive")
    if samples < 16:
        raise ValidationError("need at least 16 samples")
    grid = np.linspace(kappa_max / samples, kappa_max, samples)
    return _classify_values(grid, np.asarray(model.j_eff(grid)))


@dataclass(frozen=True)
class HypothesisReport:
    """Pass/fail record for the three multiplier requirements."""

    j1_even_real: bool
    j2_growth: bool
    j3_monotone: bool
    growth_exponent: float
    monotonicity: Optional[str]
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.j1_even_real and self.j2_growth and self.j3_monotone


def validate_hypotheses(model: ModelSpec) -> HypothesisReport:
    """Check the raw symbol against the multiplier requirements.

    J1: even, real-valued, finite away from 0.  J2: power-law growth bound
    at large kappa with fitted exponent b >= -1.  J3: strictly monotone on
    kappa > 0.  Failures are reported, never raised.
    """
    sym = model.symbol
    grid = np.linspace(1e-3, 20.0, 1000)
    try:
        right = np.asarray(sym.evaluate(grid), dtype=float)
        left = np.asarray(sym.evaluate(-grid), dtype=float)
        j1 = bool(np.all(np.isfinite(right)) and np.max(np.abs(right - left)) == 0.0)
    except Exception:
        j1 = False

    b = float("nan")
    j2 = False
    try:
        big = np.logspace(2, 4, 64)
        vals = np.asarray(sym.evaluate(big), dtype=float)
        if np.all(vals > 0):
            logk = np.log(big)
            logj = np.log(vals)
            b, intercept = np.polyfit(logk, logj, 1)
            resid = logj - (b * logk + intercept)
            j2 = bool(np.max(np.abs(resid)) < 0.1 and b >= -1.0 - 1e-9)
    except Exception:
        pass

    mono: Optional[str] = None
    notes = ""
    try:
        mono = _classify_values(grid, np.asarray(sym.evaluate(grid), dtype=float))
        j3 = True
    except ValidationError as exc:
        j3 = False
        notes = str(exc)

    return HypothesisReport(j1, j2, j3, float(b), mono, notes)

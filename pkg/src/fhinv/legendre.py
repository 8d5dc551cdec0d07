"""Legendre polynomial basis and the vertical reflectivity profile.

The profile is a truncated Legendre series on a normalized height axis
u = z / h_v in [0, 1], evaluated with the shifted argument x = 2u - 1.
The constant term is pinned to 1 because the coherence forward model is
invariant to an overall profile scale; the free coefficients are a_1..a_N.
Positivity is enforced by a smooth rectifier rather than by constraining
the coefficients, which keeps everything differentiable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

DEFAULT_ORDER = 7

# Tolerance on the recurrence argument; values this far outside [-1, 1]
# are treated as rounding noise and clamped.
_X_EPS = 1e-12


@dataclass
class ProfileCoefficients:
    """Free Legendre coefficients a_1..a_N of the reflectivity profile."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if self.values.ndim != 1 or self.values.size < 1:
            raise ConfigError("profile coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(self.values)):
            raise ConfigError("profile coefficients must be finite")

    @property
    def order(self) -> int:
        return int(self.values.size)

    @classmethod
    def zeros(cls, order: int = DEFAULT_ORDER) -> "ProfileCoefficients":
        if order < 1:
            raise ConfigError(f"order must be >= 1, got {order}")
        return cls(np.zeros(order))


@dataclass
class RectifierConfig:
    """Smooth positivity rectifier; delta sets the softening scale."""

    delta: float = 0.01

    def __post_init__(self):
        if not self.delta > 0:
            raise ConfigError(f"rectifier delta must be > 0, got {self.delta}")


def eval_legendre(n: int, x: float) -> float:
    """Evaluate the Legendre polynomial P_n(x) by the Bonnet recurrence.

    Args:
        n: polynomial degree, >= 0.
        x: argument in [-1, 1] (a slack of 1e-12 is tolerated).

    Returns:
        P_n(x).
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if abs(x) > 1.0 + _X_EPS:
        raise DomainError(f"Legendre argument {x} outside [-1, 1]")
    x = min(1.0, max(-1.0, x))
    if n == 0:
        return 1.0
    p_prev, p = 1.0, x
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


def legendre_basis(order: int, x: np.ndarray) -> np.ndarray:
    """Matrix of P_1(x)..P_order(x) columns for a vector of arguments.

    Vectorized Bonnet recurrence used by the quadrature forward model; the
    constant P_0 column is omitted since the profile pins it to 1.
    """
    if order < 1:
        raise ConfigError(f"order must be >= 1, got {order}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _X_EPS):
        raise DomainError("Legendre argument outside [-1, 1]")
    x = np.clip(x, -1.0, 1.0)
    cols = np.empty(x.shape + (order,))
    p_prev = np.ones_like(x)
    p = x.copy()
    cols[..., 0] = p
    for k in range(1, order):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
        cols[..., k] = p
    return cols


def eval_profile_raw(coeffs: ProfileCoefficients, u: float) -> float:
    """Raw (pre-rectifier) profile 1 + sum a_n P_n(2u - 1) at normalized height u."""
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"normalized height {u} outside [0, 1]")
    x = 2.0 * u - 1.0
    basis = legendre_basis(coeffs.order, np.array([x]))[0]
    return 1.0 + float(basis @ coeffs.values)


def rectify(f_raw, cfg: RectifierConfig):
    """Smoothly map a raw profile value onto (0, inf).

    Returns (f_pos, df) with f_pos = (f + sqrt(f^2 + delta^2)) / 2 and df its
    derivative with respect to f. f_pos -> f for f >> delta and stays strictly
    positive for arbitrarily negative f. Accepts scalars or arrays.
    """
    f = np.asarray(f_raw, dtype=float)
    root = np.sqrt(f * f + cfg.delta * cfg.delta)
    f_pos = 0.5 * (f + root)
    df = 0.5 * (1.0 + f / root)
    if np.isscalar(f_raw):
        return float(f_pos), float(df)
    return f_pos, df

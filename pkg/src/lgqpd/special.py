"""Error functions, harmonic-oscillator eigenfunctions, and Gauss-Legendre rules.

Conventions (used throughout the package): hbar = m = 1 and positions are
dimensionless, so the oscillator eigenfunctions are

    psi_n(x) = (2^n n! sqrt(pi))^(-1/2) H_n(x) exp(-x^2/2),

orthonormal on the real line.  The eigenfunctions are evaluated by upward
three-term recurrence on the normalized functions themselves (never on raw
Hermite polynomials), which is stable in the classically allowed region and
free of factorial overflow up to very high order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as _sp

from .errors import CapabilityError

#: Default order cap for the scalar eigenfunction helpers.  Callers that need
#: higher orders may raise it; the vector helpers enforce only the hard cap.
N_MAX = 512

#: Hard ceiling on eigenfunction order, to bound memory in the vector helpers.
HARD_N_CAP = 1 << 17

_QUARTER_PI = np.pi ** -0.25


def erf_real(x: float) -> float:
    """Error function of a real argument (odd, strictly inside (-1, 1))."""
    if not math.isfinite(x):
        raise ValueError(f"erf_real requires finite x, got {x!r}")
    return float(_sp.erf(x))


def erfc_complex(z: complex) -> complex:
    """Complementary error function for a complex argument.

    Evaluated through the Faddeeva function, accurate on all quadrants.
    Raises OverflowError instead of returning a non-finite value when
    |Im z| >> |Re z| makes exp(-z^2) overflow; use :func:`erfcx_complex`
    in that regime.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"erfc_complex requires finite z, got {z!r}")
    w = complex(_sp.erfc(z))
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise OverflowError(
            f"erfc overflows at z={z!r}; the scaled erfcx_complex stays finite there"
        )
    return w


def erfcx_complex(z: complex) -> complex:
    """Scaled complementary error function exp(z^2) erfc(z) for complex z."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"erfcx_complex requires finite z, got {z!r}")
    w = complex(_sp.erfcx(z))
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise OverflowError(f"erfcx overflows at z={z!r}")
    return w


def psi_rows(x, n_max: int):
    """Eigenfunctions psi_0..psi_n_max and their derivatives on a grid.

    Parameters
    ----------
    x : float or ndarray
        Evaluation points (dimensionless).
    n_max : int
        Highest order to compute; capped only by the hard ceiling.

    Returns
    -------
    psi, dpsi : ndarray
        Arrays of shape ``(n_max + 1,) + x.shape`` with psi_n(x) in row n and
        psi_n'(x) = sqrt(2n) psi_{n-1}(x) - x psi_n(x) in ``dpsi``.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max > HARD_N_CAP:
        raise CapabilityError(f"n_max={n_max} exceeds hard cap {HARD_N_CAP}")
    x = np.asarray(x, dtype=float)
    psi = np.zeros((n_max + 1,) + x.shape)
    psi[0] = _QUARTER_PI * np.exp(-0.5 * x * x)
    if n_max >= 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(1, n_max):
        psi[n + 1] = np.sqrt(2.0 / (n + 1)) * x * psi[n] - np.sqrt(n / (n + 1.0)) * psi[n - 1]
    dpsi = np.empty_like(psi)
    dpsi[0] = -x * psi[0]
    for n in range(1, n_max + 1):
        dpsi[n] = np.sqrt(2.0 * n) * psi[n - 1] - x * psi[n]
    return psi, dpsi


def hermite_psi(n: int, x: float) -> float:
    """Normalized oscillator eigenfunction psi_n(x)."""
    _check_order(n)
    if not math.isfinite(x):
        raise ValueError(f"hermite_psi requires finite x, got {x!r}")
    psi, _ = psi_rows(np.asarray(float(x)), n)
    return float(psi[n])


def hermite_psi_prime(n: int, x: float) -> float:
    """Derivative psi_n'(x), consistent with :func:`hermite_psi` by recurrence."""
    _check_order(n)
    if not math.isfinite(x):
        raise ValueError(f"hermite_psi_prime requires finite x, got {x!r}")
    _, dpsi = psi_rows(np.asarray(float(x)), n)
    return float(dpsi[n])


def _check_order(n: int) -> None:
    if n < 0 or int(n) != n:
        raise ValueError(f"order must be a non-negative integer, got {n!r}")
    if n > N_MAX:
        raise CapabilityError(f"order n={n} exceeds N_MAX={N_MAX}")


def averaged_partial_sum(terms: np.ndarray, window: int | None = None):
    """Sum of a truncated series, stabilized by iterated pairwise averaging of
    the trailing partial sums (along axis 0 for multi-dimensional terms).

    Oscillating tails with slowly decaying envelopes leave a plain truncated
    sum carrying its last uncancelled oscillation; repeatedly averaging the
    final ``window`` partial sums damps every nonzero oscillation frequency
    (each pass multiplies a frequency-w component by cos(w/2)) and recovers
    the limit to roughly the envelope's value at the truncation point times
    the achieved damping.  Non-oscillating (already converged or degenerate)
    tails pass through unchanged up to the envelope scale.
    """
    terms = np.asarray(terms)
    if terms.shape[0] == 0:
        return terms.sum(axis=0)
    cum = np.cumsum(terms, axis=0)
    if window is None:
        window = min(256, max(2, 3 * terms.shape[0] // 4))
    window = max(1, min(window, cum.shape[0]))
    s = cum[-window:]
    while s.shape[0] > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return s[0]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for quadrature on a finite interval."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        a, b = self.interval
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("interval endpoints must be finite")
        length = b - a
        if abs(float(weights.sum()) - length) > 1e-12 * max(1.0, abs(length)):
            raise ValueError("weights must sum to the interval length")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def integrate(self, func) -> float | complex:
        """Apply the rule to a callable vectorized over the nodes."""
        return (self.weights * func(self.nodes)).sum()


def gauss_legendre(order: int, a: float, b: float) -> QuadratureRule:
    """Gauss-Legendre rule on [a, b], exact for polynomials of degree 2*order - 1."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("endpoints must be finite")
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    x, w = np.polynomial.legendre.leggauss(int(order))
    half = 0.5 * (b - a)
    return QuadratureRule(nodes=half * (x + 1.0) + a, weights=w * half, interval=(a, b))


def composite_gauss_legendre(a: float, b: float, panel_width: float = 0.5,
                             order: int = 16) -> QuadratureRule:
    """Composite Gauss-Legendre rule with uniform panels of at most panel_width."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    n_panels = max(1, int(math.ceil((b - a) / panel_width)))
    edges = np.linspace(a, b, n_panels + 1)
    x, w = np.polynomial.legendre.leggauss(int(order))
    half = 0.5 * np.diff(edges)
    nodes = (half[:, None] * (x[None, :] + 1.0) + edges[:-1, None]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureRule(nodes=nodes, weights=weights, interval=(a, b))

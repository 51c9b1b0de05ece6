"""Eigenbasis matrix elements J_mn of position-interval indicator operators.

``J_mn(x1, x2)`` is the integral of ``psi_m psi_n`` over ``[x1, x2]``.  For
m != n it has a closed Wronskian form through the eigenvalue difference
(n - m); on the diagonal it is computed by composite Gauss-Legendre
quadrature, truncated where the Gaussian envelope of ``psi_n**2`` is
negligible.  Half-line tables at a fixed lower cut are cached because scans
re-query the same cut for many time arguments.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .special import N_MAX, composite_gauss_legendre, erf_real, psi_rows

#: Pad past the classical turning point sqrt(2n+1) where psi_n**2 is treated
#: as zero; the envelope there is below exp(-60), far under the 1e-12 targets.
_SUPPORT_PAD = 8.0


def _support(n_max: int) -> float:
    return math.sqrt(2.0 * n_max + 1.0) + _SUPPORT_PAD


def _diag_rule(lo: float, hi: float, n_max: int):
    # Panel width shrinks with order so the ~2*sqrt(2n+1) oscillation of
    # psi_n**2 stays resolved at 16 nodes per panel.
    width = min(0.5, 8.0 / math.sqrt(2.0 * n_max + 1.0))
    return composite_gauss_legendre(lo, hi, panel_width=width, order=16)


def j_diag_row(x: float, n_max: int) -> np.ndarray:
    """J_nn(x, inf) for all n = 0..n_max at a single lower cut."""
    if math.isinf(x):
        return np.ones(n_max + 1) if x < 0 else np.zeros(n_max + 1)
    supp = _support(n_max)
    lo = max(x, -supp)
    if lo >= supp:
        return np.zeros(n_max + 1)
    rule = _diag_rule(lo, supp, n_max)
    psi, _ = psi_rows(rule.nodes, n_max)
    return (psi * psi) @ rule.weights


def j_diag(n: int, x: float) -> float:
    """Diagonal half-line element J_nn(x, inf), in [0, 1] and decreasing in x."""
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    if n == 0 and math.isfinite(x):
        return 0.5 * (1.0 - erf_real(x))
    return float(j_diag_row(float(x), n)[n])


def j_offdiag(m: int, n: int, x1: float, x2: float = math.inf) -> float:
    """Off-diagonal element J_mn(x1, x2) in Wronskian closed form.

    Either endpoint may be infinite; the eigenfunctions vanish there and the
    corresponding boundary term drops out.
    """
    if m == n:
        raise ValueError("j_offdiag requires m != n; use j_diag for the diagonal")
    for k in (m, n):
        if k < 0 or int(k) != k:
            raise ValueError(f"indices must be non-negative integers, got {k!r}")
    if not x1 < x2:
        raise ValueError(f"need x1 < x2, got x1={x1}, x2={x2}")
    return float(_boundary_term(m, n, x2) - _boundary_term(m, n, x1))


def _boundary_term(m: int, n: int, x: float) -> float:
    # [psi'_m(x) psi_n(x) - psi'_n(x) psi_m(x)] / (2 (n - m))
    if math.isinf(x):
        return 0.0
    k = max(m, n)
    psi, dpsi = psi_rows(np.asarray(float(x)), k)
    return float((dpsi[m] * psi[n] - dpsi[n] * psi[m]) / (2.0 * (n - m)))


def j_row(cut: float, n_max: int) -> np.ndarray:
    """Half-line row J_0n(cut, inf) for n = 0..n_max.

    The n = 0 entry is the exact (1 - erf(cut))/2; the rest use the Wronskian
    form, vectorized over n.  ``cut`` may be an array, in which case the
    result has shape (n_max + 1,) + cut.shape.
    """
    cut_arr = np.asarray(cut, dtype=float)
    psi, dpsi = psi_rows(cut_arr, n_max)
    out = np.empty_like(psi)
    from scipy.special import erf as _erf

    out[0] = 0.5 * (1.0 - _erf(cut_arr))
    if n_max >= 1:
        n = np.arange(1, n_max + 1).reshape((-1,) + (1,) * cut_arr.ndim)
        out[1:] = (dpsi[1:] * psi[0] - dpsi[0] * psi[1:]) / (2.0 * n)
    return out


def j_block(cut: float, m_max: int, n_max: int) -> np.ndarray:
    """Half-line block J_mn(cut, inf) for 0 <= m <= m_max, 0 <= n <= n_max."""
    k = max(m_max, n_max)
    psi, dpsi = psi_rows(np.asarray(float(cut)), k)
    m = np.arange(m_max + 1)[:, None]
    n = np.arange(n_max + 1)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        block = (dpsi[None, :n_max + 1] * psi[:m_max + 1, None]
                 - dpsi[:m_max + 1, None] * psi[None, :n_max + 1]) / (2.0 * (n - m))
    diag = j_diag_row(float(cut), min(m_max, n_max))
    idx = np.arange(min(m_max, n_max) + 1)
    block[idx, idx] = diag
    return block


@dataclass(frozen=True)
class JTable:
    """Cached symmetric table of half-line elements J_mn(lower_cut, inf)."""

    lower_cut: float
    max_index: int
    entries: np.ndarray

    def __getitem__(self, mn: tuple[int, int]) -> float:
        m, n = mn
        return float(self.entries[m, n])


def build_jtable(lower_cut: float, max_index: int) -> JTable:
    """Build (or fetch from cache) the complete J table at one lower cut.

    ``lower_cut`` may be -inf, which yields the identity table by
    orthonormality.  Raises ResourceLimitError above the configured order cap.
    """
    if max_index < 0 or int(max_index) != max_index:
        raise ValueError(f"max_index must be a non-negative integer, got {max_index!r}")
    if max_index > N_MAX:
        raise ResourceLimitError(f"max_index={max_index} exceeds cap {N_MAX}")
    return _build_jtable_cached(float(lower_cut), int(max_index))


@functools.lru_cache(maxsize=64)
def _build_jtable_cached(lower_cut: float, max_index: int) -> JTable:
    if math.isinf(lower_cut):
        entries = (np.eye(max_index + 1) if lower_cut < 0
                   else np.zeros((max_index + 1, max_index + 1)))
    else:
        entries = j_block(lower_cut, max_index, max_index)
        entries = 0.5 * (entries + entries.T)  # symmetrize away roundoff
    entries.flags.writeable = False
    return JTable(lower_cut=lower_cut, max_index=max_index, entries=entries)

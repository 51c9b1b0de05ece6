"""Parameter sweeps and minimization of the quasi-probability.

A scan evaluates the minimum over t2 of q_{s1,s2}(t1, t2) on a 2-D parameter
grid: either the displacement plane (x0, p0) at fixed squeezing, or the
(r, L) plane of the window projector for squeezed vacuum.  Cells are
independent, so grids may be evaluated by a worker pool; results are written
into preallocated arrays indexed by grid coordinates and reduced in a fixed
row-major order, which makes output byte-identical for any worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np
from scipy.optimize import minimize as _nm_minimize

from .integral import qpd_integral
from .fock import qpd_oracle
from .series import (MeasurementSpec, TruncationConfig, q_sign_series_curve,
                     q_window_series_curve, qpd_series_squeezed,
                     qpd_series_thermal, qpd_series_window)
from .states import DEFAULT_UNITS, OffsetFunction, StateSpec, UnitsConfig

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

LUDERS_FLOOR = -0.125 - 1e-6

PLANES = ("x0p0", "rL")
ROUTES = ("integral", "series", "oracle")


@dataclass(frozen=True)
class T2Search:
    """Search window and refinement budget for the inner t2 minimization."""

    t2_min: float = 0.0
    t2_max: float = 2.0 * math.pi
    coarse_steps: int = 200
    refine_iters: int = 40

    def __post_init__(self):
        if not self.t2_max > self.t2_min:
            raise ValueError("t2_max must exceed t2_min")
        if self.coarse_steps < 2:
            raise ValueError("coarse_steps must be >= 2")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")


def minimize_over_t2(evaluator, search: T2Search, coarse_values=None):
    """Minimum of a continuous evaluator over t2: coarse grid followed by
    golden-section refinement of the best bracket.

    ``coarse_values`` may supply precomputed evaluator values on the coarse
    grid (used by the vectorized scan paths); otherwise the evaluator is
    called pointwise.  Returns ``(q_min, t2_argmin)``.
    """
    grid = np.linspace(search.t2_min, search.t2_max, search.coarse_steps)
    if coarse_values is None:
        values = np.array([evaluator(t) for t in grid])
    else:
        values = np.asarray(coarse_values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError("coarse_values must match the coarse grid")
    i = int(np.nanargmin(values))
    best_q, best_t = float(values[i]), float(grid[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if search.refine_iters > 0 and hi > lo:
        q, t = _golden_section(evaluator, float(lo), float(hi), search.refine_iters)
        if q < best_q:
            best_q, best_t = q, t
    return best_q, best_t


def _golden_section(f, a: float, b: float, iters: int):
    h = b - a
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            h *= _INV_PHI
            c = a + _INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            fd = f(d)
    return (fc, c) if fc < fd else (fd, d)


@dataclass(frozen=True)
class ScanConfig:
    """Flat configuration of one plane scan (field names double as the
    key-value config file keys)."""

    plane: str
    route: str
    s1: int
    s2: int
    t1: float = 0.0
    r: float = 0.0
    theta0: float = 0.0
    n_th: float = 0.0
    x0: float = 0.0
    p0: float = 0.0
    projector: str = "sign"
    offset_amp: float = 0.0
    offset_phase: float = 0.0
    offset_const: float = 0.0
    axis1_min: float = -2.0
    axis1_max: float = 2.0
    axis1_steps: int = 2
    axis2_min: float = -2.0
    axis2_max: float = 2.0
    axis2_steps: int = 2
    t2_min: float = 0.0
    t2_max: float = 2.0 * math.pi
    t2_coarse_steps: int = 200
    t2_refine_iters: int = 40
    n_max: int = 200
    quad_order: int = 32
    oracle_dim: int = 300
    omega: float = 1.0

    def __post_init__(self):
        if self.plane not in PLANES:
            raise ValueError(f"plane must be one of {PLANES}, got {self.plane!r}")
        if self.route not in ROUTES:
            raise ValueError(f"route must be one of {ROUTES}, got {self.route!r}")
        if self.s1 not in (1, -1) or self.s2 not in (1, -1):
            raise ValueError("s1 and s2 must be +1 or -1")
        if self.projector not in ("sign", "window"):
            raise ValueError("projector must be 'sign' or 'window'")
        # A single-step axis pins that coordinate, giving a 1-cell (or 1-row) scan.
        if self.axis1_steps < 1 or self.axis2_steps < 1:
            raise ValueError("axis steps must be >= 1")
        if not self.t2_max > self.t2_min:
            raise ValueError("t2_max must exceed t2_min")
        if self.plane == "rL":
            if self.projector != "window":
                raise ValueError("the rL plane scans the window projector")
            if self.x0 != 0.0 or self.p0 != 0.0 or self.n_th != 0.0:
                raise ValueError("window scans require squeezed vacuum (x0 = p0 = n_th = 0)")
            if self.axis1_min < 0:
                raise ValueError("r axis must be non-negative")
            if self.axis2_min <= 0:
                raise ValueError("L axis must be positive")
        if self.projector == "window" and self.route == "integral":
            raise ValueError("the integral route does not cover window projectors")
        if self.route == "integral" and self.n_th != 0.0:
            raise ValueError("the integral route covers pure states only")

    @property
    def axis1_name(self) -> str:
        return "x0" if self.plane == "x0p0" else "r"

    @property
    def axis2_name(self) -> str:
        return "p0" if self.plane == "x0p0" else "L"

    def axis1_values(self) -> np.ndarray:
        return _axis(self.axis1_min, self.axis1_max, self.axis1_steps)

    def axis2_values(self) -> np.ndarray:
        return _axis(self.axis2_min, self.axis2_max, self.axis2_steps)

    def t2_search(self) -> T2Search:
        return T2Search(self.t2_min, self.t2_max, self.t2_coarse_steps,
                        self.t2_refine_iters)

    def offset(self) -> OffsetFunction:
        return OffsetFunction(self.offset_amp, self.offset_phase, self.offset_const)

    def units(self) -> UnitsConfig:
        return UnitsConfig(self.omega)


def _axis(lo: float, hi: float, steps: int) -> np.ndarray:
    return np.array([lo], dtype=float) if steps == 1 else np.linspace(lo, hi, steps)


@dataclass(frozen=True)
class ScanResult:
    """Grid of t2-minimized quasi-probabilities with the global minimum."""

    config: ScanConfig
    axis1: np.ndarray
    axis2: np.ndarray
    q_min: np.ndarray
    t2_argmin: np.ndarray
    n_failed: int
    global_min: float
    global_argmin: tuple[float, float, float]  # (axis1, axis2, t2)


def _cell_state(config: ScanConfig, a1: float, a2: float) -> StateSpec:
    if config.plane == "x0p0":
        return StateSpec.from_phase_space(a1, a2, config.r, config.theta0, config.n_th)
    return StateSpec(xi=0j, r=a1, theta0=config.theta0, n_th=0.0)


def _cell_evaluator(config: ScanConfig, a1: float, a2: float):
    """Scalar t2 -> q evaluator for one grid cell."""
    state = _cell_state(config, a1, a2)
    units = config.units()
    trunc = TruncationConfig(n_max=config.n_max)
    if config.plane == "rL":
        half = a2
        if config.route == "series":
            return lambda t2: qpd_series_window(state, half, config.s1, config.s2,
                                                config.t1, t2, trunc, units)
        meas = MeasurementSpec.window(half)
        return lambda t2: qpd_oracle(state, meas, config.s1, config.s2,
                                     config.t1, t2, config.oracle_dim, units)
    offset = config.offset()
    if config.route == "series":
        if config.n_th > 0:
            if not offset.is_zero:
                raise ValueError("the series route does not take a measurement offset")
            return lambda t2: qpd_series_thermal(state, config.s1, config.s2,
                                                 config.t1, t2, trunc, units)
        if not offset.is_zero:
            raise ValueError("the series route does not take a measurement offset")
        return lambda t2: qpd_series_squeezed(state, config.s1, config.s2,
                                              config.t1, t2, trunc, units)
    if config.route == "integral":
        return lambda t2: qpd_integral(state, offset, config.s1, config.s2,
                                       config.t1, t2, config.quad_order, units)
    meas = MeasurementSpec.sign(offset)
    return lambda t2: qpd_oracle(state, meas, config.s1, config.s2,
                                 config.t1, t2, config.oracle_dim, units)


def _cell_coarse_values(config: ScanConfig, a1: float, a2: float,
                        grid: np.ndarray):
    """Vectorized coarse-stage values where the route supports it."""
    if config.route != "series":
        return None
    state = _cell_state(config, a1, a2)
    units = config.units()
    if config.plane == "rL":
        return q_window_series_curve(state, a2, config.s1, config.s2, config.t1,
                                     grid, config.n_max, units)
    if config.n_th > 0:
        return None
    return q_sign_series_curve(state, config.s1, config.s2, config.t1, grid,
                               config.n_max, units)


def _scan_cell(args):
    config, i, j, a1, a2 = args
    search = config.t2_search()
    try:
        evaluator = _cell_evaluator(config, a1, a2)
        grid = np.linspace(search.t2_min, search.t2_max, search.coarse_steps)
        coarse = _cell_coarse_values(config, a1, a2, grid)
        q, t2 = minimize_over_t2(evaluator, search, coarse_values=coarse)
        return i, j, q, t2, False
    except Exception:
        return i, j, math.nan, math.nan, True


def scan_plane(config: ScanConfig, workers: int = 1) -> ScanResult:
    """Evaluate the t2-minimized quasi-probability on the configured grid.

    Per-cell failures are recorded as NaN cells, not raised.  The reduction
    to the global minimum runs single-threaded in row-major order, so the
    result does not depend on ``workers``.
    """
    ax1 = config.axis1_values()
    ax2 = config.axis2_values()
    tasks = [(config, i, j, float(a1), float(a2))
             for i, a1 in enumerate(ax1) for j, a2 in enumerate(ax2)]
    q_min = np.full((len(ax1), len(ax2)), math.nan)
    t2_arg = np.full_like(q_min, math.nan)
    n_failed = 0
    if workers > 1:
        with get_context("fork").Pool(workers) as pool:
            results = pool.map(_scan_cell, tasks, chunksize=max(1, len(tasks) // (4 * workers)))
    else:
        results = map(_scan_cell, tasks)
    for i, j, q, t2, failed in results:
        q_min[i, j] = q
        t2_arg[i, j] = t2
        n_failed += int(failed)

    finite = q_min[np.isfinite(q_min)]
    if finite.size and finite.min() < LUDERS_FLOOR:
        raise ArithmeticError(
            f"scan produced q={finite.min():.6f} below the attainable floor -1/8")
    if finite.size:
        flat = np.where(np.isfinite(q_min), q_min, np.inf).ravel()
        k = int(np.argmin(flat))
        i, j = divmod(k, len(ax2))
        gmin = float(q_min[i, j])
        garg = (float(ax1[i]), float(ax2[j]), float(t2_arg[i, j]))
    else:
        gmin, garg = math.nan, (math.nan, math.nan, math.nan)
    return ScanResult(config=config, axis1=ax1, axis2=ax2, q_min=q_min,
                      t2_argmin=t2_arg, n_failed=n_failed,
                      global_min=gmin, global_argmin=garg)


# ---------------------------------------------------------------------------
# box-constrained global minimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StartOutcome:
    start: dict
    value: float
    argmin: dict


@dataclass(frozen=True)
class GlobalMinimum:
    value: float
    argmin: dict
    starts: tuple[StartOutcome, ...]


def global_minimize(free: dict, route: str = "series", fixed: dict | None = None,
                    projector: str = "sign", coarse_steps: int = 7,
                    n_starts: int = 4, t2_coarse: int = 96, t2_refine: int = 32,
                    n_max: int = 300, nm_maxiter: int = 120,
                    units: UnitsConfig = DEFAULT_UNITS) -> GlobalMinimum:
    """Deterministic multi-start minimization over named free parameters.

    ``free`` maps parameter names from {x0, p0, r, L, t2} to (lo, hi) bounds;
    a degenerate bound (lo == hi) pins the parameter.  t2 is always minimized
    by the inner coarse-plus-golden search; the remaining parameters go
    through a coarse grid followed by Nelder-Mead polish from the best
    ``n_starts`` grid points.  All start outcomes are reported.
    """
    fixed = dict(fixed or {})
    free = dict(free)
    t2_bounds = free.pop("t2", None)
    outer_names = sorted(free)
    search = None
    if t2_bounds is not None:
        lo, hi = t2_bounds
        if hi > lo:
            search = T2Search(lo, hi, t2_coarse, t2_refine)
        else:
            fixed["t2"] = lo

    lows = np.array([free[n][0] for n in outer_names])
    highs = np.array([free[n][1] for n in outer_names])

    def named(vec) -> dict:
        params = dict(fixed)
        # clamp: the simplex may probe just outside the box mid-iteration
        params.update({name: float(np.clip(v, lo, hi))
                       for name, v, lo, hi in zip(outer_names, vec, lows, highs)})
        return params

    def objective(vec) -> float:
        params = named(vec)
        evaluator, curve = _named_evaluator(params, route, projector, n_max, units)
        if search is not None:
            grid = np.linspace(search.t2_min, search.t2_max, search.coarse_steps)
            coarse = curve(grid) if curve is not None else None
            return minimize_over_t2(evaluator, search, coarse_values=coarse)[0]
        return evaluator(params["t2"])

    def full_argmin(vec) -> dict:
        params = named(vec)
        if search is not None:
            evaluator, curve = _named_evaluator(params, route, projector, n_max, units)
            grid = np.linspace(search.t2_min, search.t2_max, search.coarse_steps)
            coarse = curve(grid) if curve is not None else None
            _, t2 = minimize_over_t2(evaluator, search, coarse_values=coarse)
            params["t2"] = t2
        return params

    if not outer_names:
        value = objective(np.empty(0))
        return GlobalMinimum(value=value, argmin=full_argmin(np.empty(0)), starts=())
    axes = [np.linspace(lo, hi, coarse_steps) if hi > lo else np.array([lo])
            for lo, hi in zip(lows, highs)]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    values = np.array([objective(p) for p in points])
    order = np.argsort(values, kind="stable")[:max(1, n_starts)]

    starts = []
    best_vec, best_val = points[order[0]], float(values[order[0]])
    for k in order:
        x0 = points[k]
        if np.any(highs > lows):
            res = _nm_minimize(objective, x0, method="Nelder-Mead",
                               options={"maxiter": nm_maxiter, "xatol": 1e-5,
                                        "fatol": 1e-10})
            xk = np.clip(res.x, lows, highs)
            vk = objective(xk)
        else:
            xk, vk = x0, float(values[k])
        starts.append(StartOutcome(
            start={n: float(v) for n, v in zip(outer_names, x0)},
            value=float(vk),
            argmin=full_argmin(xk)))
        if vk < best_val:
            best_val, best_vec = float(vk), xk
    return GlobalMinimum(value=best_val, argmin=full_argmin(best_vec),
                         starts=tuple(starts))


def _named_evaluator(params: dict, route: str, projector: str, n_max: int,
                     units: UnitsConfig):
    """(scalar evaluator, optional vectorized t2-curve) from named parameters."""
    s1, s2 = int(params.get("s1", 1)), int(params.get("s2", 1))
    t1 = float(params.get("t1", 0.0))
    theta0 = float(params.get("theta0", 0.0))
    n_th = float(params.get("n_th", 0.0))
    trunc = TruncationConfig(n_max=n_max)
    if projector == "window":
        state = StateSpec(xi=0j, r=float(params.get("r", 0.0)), theta0=theta0, n_th=0.0)
        half = float(params["L"])
        if route == "series":
            return (lambda t2: qpd_series_window(state, half, s1, s2, t1, t2, trunc, units),
                    lambda grid: q_window_series_curve(state, half, s1, s2, t1, grid,
                                                       n_max, units))
        meas = MeasurementSpec.window(half)
        dim = int(params.get("oracle_dim", 300))
        return (lambda t2: qpd_oracle(state, meas, s1, s2, t1, t2, dim, units), None)

    state = StateSpec.from_phase_space(float(params.get("x0", 0.0)),
                                       float(params.get("p0", 0.0)),
                                       float(params.get("r", 0.0)), theta0, n_th)
    if route == "series":
        if n_th > 0:
            return (lambda t2: qpd_series_thermal(state, s1, s2, t1, t2, trunc, units),
                    None)
        return (lambda t2: qpd_series_squeezed(state, s1, s2, t1, t2, trunc, units),
                lambda grid: q_sign_series_curve(state, s1, s2, t1, grid, n_max, units))
    if route == "integral":
        return (lambda t2: qpd_integral(state, None, s1, s2, t1, t2,
                                        int(params.get("quad_order", 32)), units), None)
    meas = MeasurementSpec.sign()
    dim = int(params.get("oracle_dim", 300))
    return (lambda t2: qpd_oracle(state, meas, s1, s2, t1, t2, dim, units), None)

r"""Global solver for ``D^alpha_a f(t) = phi(t, f(t))``, ``f(a) = a0``.

Locally the problem is equivalent to the integral equation

.. math::

    f(t) = a_0 + (1-\alpha)\,\varphi(t, f(t)) + \alpha \int_a^t \varphi(\tau, f(\tau))\,d\tau,

whose Picard map contracts with factor
:math:`q = (1-\alpha)L + \alpha L (T-a) < 1` as long as ``T - a`` stays
inside the window :math:`(1-(1-\alpha)L)/(\alpha L)`. Longer horizons are
covered by restarting at ``T_k`` with the corrected right-hand side
:math:`\Phi_k(t,x) = \varphi(t,x) - e^{-\lambda(t-T_k)}\varphi(T_k, f(T_k))`,
which carries the memory of ``[a, T_k]`` into the new segment.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import CompatibilityViolation, NonConvergence, WindowViolation
from .operators import FracOrder, SampledFunction, UniformGrid, _as_order, cf_derivative

__all__ = [
    "IVP",
    "SolverConfig",
    "Trajectory",
    "contraction_window",
    "contraction_factor",
    "solve_local",
    "solve_global",
    "segment_join_check",
]

logger = logging.getLogger(__name__)

# Relative slack when deciding whether dt divides a segment length.
_STEP_RTOL = 1e-9


@dataclass(frozen=True)
class IVP:
    """``D^alpha_a f = rhs(t, f)``, ``f(a) = a0``, with ``rhs`` Lipschitz in x with constant ``L``.

    ``rhs`` is called with numpy arrays and must broadcast.
    """

    rhs: Callable
    a: float
    a0: float
    L: float
    order: FracOrder

    def __post_init__(self):
        if not (self.L >= 0.0 and math.isfinite(self.L)):
            raise ValueError(f"Lipschitz constant must be finite and >= 0, got {self.L!r}")
        object.__setattr__(self, "order", _as_order(self.order))


@dataclass(frozen=True)
class SolverConfig:
    dt_grid: float = 1e-3
    segment_fraction: float = 0.5
    picard_tol: float = 1e-12
    max_picard_iters: int = 500
    compat_tol: float = 1e-12
    auto_correct: bool = False

    def __post_init__(self):
        if not self.dt_grid > 0.0:
            raise ValueError("dt_grid must be > 0")
        if not 0.0 < self.segment_fraction < 1.0:
            raise ValueError("segment_fraction must lie strictly between 0 and 1")
        if not self.picard_tol > 0.0:
            raise ValueError("picard_tol must be > 0")
        if self.max_picard_iters < 1:
            raise ValueError("max_picard_iters must be >= 1")
        if self.compat_tol < 0.0:
            raise ValueError("compat_tol must be >= 0")


@dataclass
class Trajectory:
    """Solution samples plus per-segment diagnostics.

    ``segment_boundaries`` holds the interior restart times ``T_1 < T_2 < ...``
    (empty for a single segment). ``segment`` gives, for each node, the index
    of the segment that computed it; a join node belongs to the segment it
    closes. When the compatibility correction was applied,
    ``compat_shift = phi(a, a0)`` and ``note`` spells out the equation that was
    actually solved.
    """

    grid: UniformGrid
    values: np.ndarray
    segment_boundaries: np.ndarray
    segment: np.ndarray
    picard_iters: list[int]
    contraction_factors: list[float]
    picard_changes: list[list[float]] = field(repr=False)
    max_residual: float = float("nan")
    compat_shift: float = 0.0
    note: str = ""

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def n_segments(self) -> int:
        return len(self.picard_iters)


def contraction_window(order, L: float) -> float:
    """Longest admissible local horizon ``(1 - (1-alpha) L) / (alpha L)``.

    Returns ``inf`` for ``L = 0``.

    Raises
    ------
    WindowViolation
        if ``L >= 1/(1-alpha)``, where no positive horizon exists.
    """
    order = _as_order(order)
    alpha = order.alpha
    if L < 0.0:
        raise ValueError(f"Lipschitz constant must be >= 0, got {L!r}")
    if L == 0.0:
        return math.inf
    if L * (1.0 - alpha) >= 1.0:
        raise WindowViolation(
            f"hypothesis L < 1/(1-alpha) violated: L = {L:g}, 1/(1-alpha) = {1.0 / (1.0 - alpha):g}"
        )
    return (1.0 - (1.0 - alpha) * L) / (alpha * L)


def contraction_factor(order, L: float, span: float) -> float:
    """Lipschitz constant ``(1-alpha) L + alpha L span`` of the Picard map."""
    order = _as_order(order)
    return (1.0 - order.alpha) * L + order.alpha * L * span


def _effective_rhs(rhs: Callable, order: FracOrder, a: float, shift: float) -> Callable:
    if shift == 0.0:
        return rhs

    def corrected(t, x):
        return rhs(t, x) - np.exp(-order.lam * (np.asarray(t) - a)) * shift

    return corrected


def _rhs_values(rhs: Callable, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(rhs(t, x), dtype=float), t.shape)


def _compat(ivp: IVP, cfg: SolverConfig) -> tuple[Callable, float, str]:
    """Return the right-hand side to solve, the applied shift and a note."""
    r0 = float(_rhs_values(ivp.rhs, np.array([ivp.a]), np.array([ivp.a0]))[0])
    if abs(r0) <= cfg.compat_tol:
        return ivp.rhs, 0.0, ""
    if not cfg.auto_correct:
        raise CompatibilityViolation(
            f"hypothesis phi(a, a0) = 0 violated: phi({ivp.a:g}, {ivp.a0:g}) = {r0:.17g}"
        )
    note = (
        f"phi(a, a0) = {r0:.17g} != 0; solved the corrected equation "
        f"D^alpha f(t) = phi(t, f(t)) - exp(-{ivp.order.lam:.17g} (t - {ivp.a:.17g})) * {r0:.17g}"
    )
    logger.info(note)
    return _effective_rhs(ivp.rhs, ivp.order, ivp.a, r0), r0, note


def _steps(span: float, dt: float) -> int:
    n = round(span / dt)
    if n < 1 or abs(n * dt - span) > _STEP_RTOL * max(span, dt):
        raise ValueError(f"dt_grid={dt!r} does not divide the interval length {span!r}")
    return n


def _picard(rhs, t, x0, order, L, cfg, q):
    """Fixed point of ``P[f] = x0 + (1-alpha) rhs(t, f) + alpha * int rhs`` on nodes ``t``."""
    alpha = order.alpha
    dt = t[1] - t[0]
    f = np.full(t.shape, float(x0))
    changes = []
    for it in range(1, cfg.max_picard_iters + 1):
        phi = _rhs_values(rhs, t, f)
        new = x0 + (1.0 - alpha) * phi + alpha * cumulative_trapezoid(phi, dx=dt, initial=0.0)
        # phi vanishes at the segment start, so the fixed point keeps f = x0 there
        new[0] = x0
        change = float(np.max(np.abs(new - f)))
        changes.append(change)
        f = new
        if L == 0.0 or change <= cfg.picard_tol:
            return f, it, changes
    raise NonConvergence(
        f"Picard iteration did not reach tol={cfg.picard_tol:g} in {cfg.max_picard_iters} "
        f"iterations (last change {changes[-1]:.3g}, contraction factor {q:.3g}); "
        "the Lipschitz constant may be underestimated"
    )


def _segment_span(ivp: IVP, cfg: SolverConfig, horizon: float) -> float:
    window = contraction_window(ivp.order, ivp.L)
    if ivp.L == 0.0:
        span = min(horizon, 10.0 / ivp.order.lam)
    else:
        span = min(horizon, cfg.segment_fraction * window)
    steps = math.floor(span / cfg.dt_grid * (1.0 + _STEP_RTOL))
    if steps < 1:
        raise ValueError(
            f"dt_grid={cfg.dt_grid!r} is longer than the admissible segment length {span!r}"
        )
    return steps * cfg.dt_grid


def _finish(ivp, rhs, grid, values, boundaries, segment, iters, qs, changes, shift, note):
    f = SampledFunction(grid, values)
    residual = np.abs(cf_derivative(f, ivp.order).values - _rhs_values(rhs, grid.nodes, f.values))
    return Trajectory(
        grid=grid,
        values=f.values,
        segment_boundaries=np.asarray(boundaries, dtype=float),
        segment=segment,
        picard_iters=iters,
        contraction_factors=qs,
        picard_changes=changes,
        max_residual=float(np.max(residual)),
        compat_shift=shift,
        note=note,
    )


def solve_local(ivp: IVP, T: float, cfg: SolverConfig | None = None) -> Trajectory:
    """Solve on ``[a, T]`` by one Picard fixed-point solve.

    ``T - a`` must be shorter than :func:`contraction_window` and a multiple
    of ``cfg.dt_grid``.
    """
    cfg = cfg or SolverConfig()
    order = ivp.order
    span = T - ivp.a
    window = contraction_window(order, ivp.L)
    if not 0.0 < span < window:
        raise WindowViolation(
            f"horizon T - a = {span:g} must lie in (0, {window:g}), the contraction window"
        )
    rhs, shift, note = _compat(ivp, cfg)
    n = _steps(span, cfg.dt_grid)
    grid = UniformGrid(ivp.a, span / n, n)
    q = contraction_factor(order, ivp.L, span)
    assert q < 1.0
    values, iters, changes = _picard(rhs, grid.nodes, ivp.a0, order, ivp.L, cfg, q)
    return _finish(ivp, rhs, grid, values, [], np.zeros(n + 1, dtype=int),
                   [iters], [q], [changes], shift, note)


def solve_global(ivp: IVP, t_end: float, cfg: SolverConfig | None = None) -> Trajectory:
    """Solve on ``[a, t_end]`` for any ``t_end > a`` by chained local solves.

    Segments have length ``segment_fraction * window`` (rounded down to a
    multiple of ``dt_grid``; the last one may be shorter). Segment ``k >= 1``
    starts from the stored value ``f(T_k)`` and solves with lower limit
    ``T_k`` and right-hand side
    ``phi(t, x) - exp(-lam (t - T_k)) phi(T_k, f(T_k))``.
    """
    cfg = cfg or SolverConfig()
    order = ivp.order
    horizon = t_end - ivp.a
    if not horizon > 0.0:
        raise ValueError(f"t_end must exceed a, got t_end={t_end!r}, a={ivp.a!r}")
    contraction_window(order, ivp.L)
    rhs, shift, note = _compat(ivp, cfg)
    n_total = _steps(horizon, cfg.dt_grid)
    grid = UniformGrid(ivp.a, horizon / n_total, n_total)
    dt = grid.dt
    t_all = grid.nodes
    seg_steps = min(n_total, round(_segment_span(ivp, cfg, horizon) / dt))

    values = np.empty(n_total + 1)
    segment = np.empty(n_total + 1, dtype=int)
    values[0] = ivp.a0
    segment[0] = 0
    boundaries, iters, qs, changes = [], [], [], []
    start = 0
    k = 0
    while start < n_total:
        stop = min(start + seg_steps, n_total)
        t_seg = t_all[start:stop + 1]
        x0 = values[start]
        if k == 0:
            seg_rhs = rhs
        else:
            t_k = t_all[start]
            memory = float(_rhs_values(rhs, np.array([t_k]), np.array([x0]))[0])

            def seg_rhs(t, x, t_k=t_k, memory=memory):
                return rhs(t, x) - np.exp(-order.lam * (np.asarray(t) - t_k)) * memory

            boundaries.append(t_k)
        q = contraction_factor(order, ivp.L, t_seg[-1] - t_seg[0])
        assert q < 1.0
        seg_values, seg_iters, seg_changes = _picard(seg_rhs, t_seg, x0, order, ivp.L, cfg, q)
        values[start:stop + 1] = seg_values
        segment[start + 1:stop + 1] = k
        iters.append(seg_iters)
        qs.append(q)
        changes.append(seg_changes)
        logger.debug("segment %d on [%g, %g]: %d Picard iterations", k, t_seg[0], t_seg[-1], seg_iters)
        start = stop
        k += 1
    return _finish(ivp, rhs, grid, values, boundaries, segment, iters, qs, changes, shift, note)


def segment_join_check(traj: Trajectory, ivp: IVP) -> float:
    """Largest defect ``|D^alpha f(T_k) - phi(T_k, f(T_k))|`` over the restart times.

    The derivative uses the full history from ``a``. Returns 0 when there is
    a single segment.
    """
    if traj.segment_boundaries.size == 0:
        return 0.0
    rhs = _effective_rhs(ivp.rhs, ivp.order, ivp.a, traj.compat_shift)
    deriv = cf_derivative(SampledFunction(traj.grid, traj.values), ivp.order).values
    idx = np.rint((traj.segment_boundaries - traj.grid.a) / traj.grid.dt).astype(int)
    phi = _rhs_values(rhs, traj.grid.nodes[idx], traj.values[idx])
    return float(np.max(np.abs(deriv[idx] - phi)))

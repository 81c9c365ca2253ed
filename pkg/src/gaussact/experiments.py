"""Activation experiments: the squeezed three-mode input family, input
optimization under a photon-number budget, sweeps and threshold search.

The combined channel is ``SSY-PPT (modes 1, 2) x attenuator (mode 3)``.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .capacity import activation_gap, coherent_information, lossy_capacity, ta_capacity_upper_bound
from .channels import make_lossy, make_ssy_ppt, make_thermal_attenuator, tensor
from .dilation import dilate
from .errors import DomainError, GaussactError, InfinityError, NoActivation, NoFeasiblePoint, NoSolution
from .search import golden_section_max

LOSSY = "lossy"
THERMAL = "thermal"
KINDS = (LOSSY, THERMAL)

DEFAULT_T_GRID = tuple(round(0.5 + 0.005 * k, 3) for k in range(11))
DEFAULT_NBAR_GRID = tuple(float(v) for v in np.geomspace(0.1, 20.0, 50))


@dataclass(frozen=True)
class InputParams:
    """Squeezing parameters ``(x, y)`` of the three-mode input."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.x > 0 and self.y > 0):
            raise DomainError(f"squeezing parameters must be positive, got x={self.x}, y={self.y}")

    def canonical(self):
        """Map ``x -> 1/x`` when ``x < 1``; this only flips the sign of mode 3 couplings."""
        return InputParams(max(self.x, 1.0 / self.x), self.y)


def gamma_in(p):
    """Three-mode input covariance for squeezing parameters ``p``.

    Modes 1 and 2 feed the PPT channel; mode 3 is thermal with
    ``2 * nbar(p) + 1`` on its diagonal and feeds the attenuator.
    """
    x, y = p.x, p.y
    x2, x4, y2, y4 = x * x, x**4, y * y, y**4
    a = (x4 + 1.0) / (2.0 * x2)
    c_minus = (x4 - 1.0) * (y2 - 1.0) / (4.0 * x2 * y)
    c_plus = (x4 - 1.0) * (y2 + 1.0) / (4.0 * x2 * y)
    d = (x4 + 1.0) * (y4 + 1.0) / (4.0 * x2 * y2)
    g = np.diag([a, a, a, a, d, d])
    g[0, 4] = g[4, 0] = c_minus
    g[1, 5] = g[5, 1] = c_minus
    g[2, 4] = g[4, 2] = c_plus
    g[3, 5] = g[5, 3] = -c_plus
    return g


def nbar(p):
    """Mean photon number of the thermal mode 3 of :func:`gamma_in`."""
    x2, y2 = p.x * p.x, p.y * p.y
    num = x2 * x2 * y2 * y2 + x2 * x2 - 4.0 * x2 * y2 + y2 * y2 + 1.0
    return num / (8.0 * x2 * y2)


def _cosh_form(x):
    # (x^4 + 1) / (2 x^2), i.e. cosh(2 ln x)
    return 0.5 * (x * x + 1.0 / (x * x))


def x_max(n):
    """Largest ``x >= 1`` compatible with photon number ``n`` (attained at ``y = 1``)."""
    a = 2.0 * n + 1.0
    return math.sqrt(a + math.sqrt(a * a - 1.0))


def solve_y(x, n):
    """All ``y > 0`` with ``nbar(x, y) == n``, ascending.

    The roots come as a reciprocal pair ``(1/y, y)`` which collapses to
    ``[1.0]`` on the boundary ``x == x_max(n)``.
    """
    if not (x > 0 and n >= 0):
        raise DomainError(f"need x > 0 and n >= 0, got x={x}, n={n}")
    b = (2.0 * n + 1.0) / _cosh_form(x)
    if b < 1.0:
        if b < 1.0 - 1e-12:
            raise NoSolution(f"x={x} already exceeds the photon budget n={n}")
        b = 1.0
    y2 = b + math.sqrt(max(b * b - 1.0, 0.0))
    y = math.sqrt(y2)
    if y == 1.0:
        return [1.0]
    return [1.0 / y, y]


def diagonal_input(n):
    """The ``x == y`` member of the family with photon number ``n``."""
    if n < 0:
        raise DomainError(f"photon number must be nonnegative, got {n}")
    s = math.sqrt(8.0 * n)
    x = math.sqrt(0.5 * (s + math.sqrt(s * s + 4.0)))
    return InputParams(x, x)


def attenuator(kind, T, N=0.0):
    if kind == LOSSY:
        return make_lossy(T)
    if kind == THERMAL:
        return make_thermal_attenuator(T, N)
    raise DomainError(f"unknown attenuator kind {kind!r}")


def combined_channel(kind, T, N=0.0):
    return tensor(make_ssy_ppt(), attenuator(kind, T, N))


def combined_dilation(kind, T, N=0.0):
    return dilate(combined_channel(kind, T, N))


def single_capacity(kind, T, N=0.0):
    """Exact capacity (lossy) or upper bound (thermal) of the attenuator alone."""
    if kind == LOSSY:
        return lossy_capacity(T)
    if kind == THERMAL:
        return ta_capacity_upper_bound(T, N)
    raise DomainError(f"unknown attenuator kind {kind!r}")


def evaluate_input(kind, T, N, p, dilation=None):
    d = dilation if dilation is not None else combined_dilation(kind, T, N)
    return coherent_information(d.channel, gamma_in(p), dilation=d)


@dataclass(frozen=True)
class OptimizerSettings:
    grid_points: int = 64
    xtol: float = 1e-9

    def __post_init__(self):
        if self.grid_points < 3:
            raise ValueError("optimizer grid needs at least 3 points")
        if not self.xtol > 0:
            raise ValueError("xtol must be positive")


def optimize_input(kind, T, N, n, settings=OptimizerSettings()):
    """Maximize the combined coherent information over the input family at photon number ``n``.

    Scans a log grid in ``x`` on both ``y`` branches, then refines the best
    grid cell of each branch by golden-section search. Returns
    ``(InputParams, CoherentInfoResult)``.
    """
    if not n >= 0:
        raise NoFeasiblePoint(f"photon number must be nonnegative, got {n}")
    d = combined_dilation(kind, T, N)
    hi = x_max(n)
    if hi <= 1.0 + 1e-15:
        p = InputParams(1.0, 1.0)
        return p, evaluate_input(kind, T, N, p, d)

    def branch_param(x, branch):
        roots = solve_y(min(x, hi), n)
        return InputParams(float(x), roots[branch] if len(roots) == 2 else roots[0])

    def objective(x, branch):
        return evaluate_input(kind, T, N, branch_param(x, branch), d).i_c

    xs = np.geomspace(1.0, hi, settings.grid_points)
    xs[-1] = hi
    best = None
    for branch in (0, 1):
        vals = [objective(x, branch) for x in xs]
        i = int(np.argmax(vals))
        lo_x, hi_x = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
        x_opt, f_opt = golden_section_max(lambda x: objective(x, branch), lo_x, hi_x, settings.xtol * (1.0 + hi_x))
        if f_opt < vals[i]:
            x_opt, f_opt = xs[i], vals[i]
        if best is None or f_opt > best[0]:
            best = (f_opt, x_opt, branch)
    p = branch_param(best[1], best[2])
    return p, evaluate_input(kind, T, N, p, d)


@dataclass(frozen=True)
class ActivationRecord:
    T: float
    N: float
    nbar: float
    params: InputParams | None
    i_c: float
    h_out: float
    cap: object
    gap: float
    error: str | None = None


def evaluate_point(kind, T, N, n, settings=OptimizerSettings(), input_slice="optimized"):
    """One sweep row; errors are captured in the record instead of raised."""
    try:
        cap = single_capacity(kind, T, N)
        if input_slice == "optimized":
            p, res = optimize_input(kind, T, N, n, settings)
        elif input_slice == "diagonal":
            p = diagonal_input(n)
            res = evaluate_input(kind, T, N, p)
        else:
            raise DomainError(f"unknown input slice {input_slice!r}")
        try:
            gap = activation_gap(res.i_c, cap)
        except InfinityError:
            gap = -math.inf
        return ActivationRecord(T, N, nbar(p), p, res.i_c, res.h_out, cap, gap)
    except GaussactError as exc:
        return ActivationRecord(T, N, n, None, math.nan, math.nan, None, math.nan, f"{type(exc).__name__}: {exc}")


def thread_count():
    raw = os.environ.get("GAUSSACT_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("GAUSSACT_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


@dataclass(frozen=True)
class SweepSpec:
    T_grid: tuple
    nbar_grid: tuple
    N: float = 0.0
    kind: str = LOSSY
    settings: OptimizerSettings = field(default_factory=OptimizerSettings)
    input_slice: str = "optimized"

    def __post_init__(self):
        object.__setattr__(self, "T_grid", tuple(float(t) for t in self.T_grid))
        object.__setattr__(self, "nbar_grid", tuple(float(n) for n in self.nbar_grid))
        if not self.T_grid:
            raise ValueError("T grid is empty")
        if not self.nbar_grid:
            raise ValueError("nbar grid is empty")
        if any(not 0.0 <= t <= 1.0 for t in self.T_grid):
            raise ValueError("T grid values must lie in [0, 1]")
        if any(not n >= 0.0 for n in self.nbar_grid):
            raise ValueError("nbar grid values must be nonnegative")
        if not self.N >= 0.0:
            raise ValueError("N must be nonnegative")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.input_slice not in ("optimized", "diagonal"):
            raise ValueError(f"input_slice must be 'optimized' or 'diagonal', got {self.input_slice!r}")


def run_sweep(spec, threads=None):
    """Evaluate every ``(T, nbar)`` point; rows are T-major regardless of thread count."""
    points = [(t, n) for t in spec.T_grid for n in spec.nbar_grid]

    def work(pt):
        return evaluate_point(spec.kind, pt[0], spec.N, pt[1], spec.settings, spec.input_slice)

    workers = thread_count() if threads is None else max(1, threads)
    if workers == 1:
        return [work(pt) for pt in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, points))


@dataclass(frozen=True)
class ThresholdResult:
    """Largest transmissivity ``T`` found with a positive gap, with its bracket."""

    T: float
    T_upper: float
    gap_lower: float
    gap_upper: float


def optimized_gap(kind, T, N, n, settings=OptimizerSettings()):
    _, res = optimize_input(kind, T, N, n, settings)
    return activation_gap(res.i_c, single_capacity(kind, T, N))


def find_threshold(N, n, tol=1e-4, bracket=(0.5, 0.6), settings=OptimizerSettings()):
    """Bisect the zero of the optimized activation gap in ``T``."""
    if not n > 0:
        raise DomainError(f"photon number must be positive, got {n}")
    kind = LOSSY if N == 0 else THERMAL
    lo, hi = bracket[0] + 1e-6, bracket[1]
    g_lo = optimized_gap(kind, lo, N, n, settings)
    if g_lo <= 0:
        raise NoActivation(f"no activation at T={lo} (gap {g_lo:.6g} bits)")
    g_hi = optimized_gap(kind, hi, N, n, settings)
    if g_hi > 0:
        raise DomainError(f"gap still positive at T={hi}; widen the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = optimized_gap(kind, mid, N, n, settings)
        if g_mid > 0:
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    return ThresholdResult(lo, hi, g_lo, g_hi)

"""Forward integration over lambda grids, plus power-law slope fits."""

from __future__ import annotations

import csv
import math
import multiprocessing as mp
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .admissible import AdmissibleSystem

__all__ = [
    "SimConfig",
    "SimulationTrace",
    "BifurcationDiagram",
    "SlopeFit",
    "NonFiniteStateError",
    "integrate",
    "integrate_euler",
    "integrate_batch",
    "sweep",
    "loglog_slope",
    "n_steps",
    "write_csv",
    "read_csv",
]

DEFAULT_INITIAL = (0.1, -0.2, 0.3, 0.4, 0.5)


class NonFiniteStateError(ArithmeticError):
    def __init__(self, step: int, lam=None):
        self.step = step
        self.lam = lam
        where = f" at lambda={lam}" if lam is not None else ""
        super().__init__(f"state became non-finite at step {step}{where}")


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.1
    t_end: float = 2000.0
    initial: tuple[float, ...] = DEFAULT_INITIAL
    lambda_min: float = -0.03
    lambda_max: float = 0.03
    lambda_steps: int = 600
    steady_tol: float = 1e-8
    stride: int = 100
    method: str = "euler"
    chunk: int = 150

    def __post_init__(self):
        if not self.dt > 0 or not self.t_end > 0:
            raise ValueError("dt and t_end must be positive")
        if self.lambda_steps < 1:
            raise ValueError("lambda grid must be non-empty")
        if self.lambda_steps > 1 and not self.lambda_max >= self.lambda_min:
            raise ValueError("lambda_max must be >= lambda_min")
        if self.stride < 1 or self.chunk < 1:
            raise ValueError("stride and chunk must be positive")
        if self.method not in ("euler", "rk4"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def lambdas(self) -> np.ndarray:
        return np.linspace(self.lambda_min, self.lambda_max, self.lambda_steps)

    @property
    def steps(self) -> int:
        return n_steps(self.t_end, self.dt)


def n_steps(t_end: float, dt: float) -> int:
    # rounding first keeps 2000/0.1 at 20000 rather than 20001
    return math.ceil(round(t_end / dt, 9))


def _step(system: AdmissibleSystem, x: np.ndarray, lam, dt: float, method: str) -> np.ndarray:
    if method == "euler":
        return x + dt * system.eval(x, lam)
    k1 = system.eval(x, lam)
    k2 = system.eval(x + 0.5 * dt * k1, lam)
    k3 = system.eval(x + 0.5 * dt * k2, lam)
    k4 = system.eval(x + dt * k3, lam)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class SimulationTrace:
    times: np.ndarray
    states: np.ndarray
    lam: float

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def integrate(system: AdmissibleSystem, lam: float, config: SimConfig = SimConfig(),
              initial: Sequence[float] | None = None) -> SimulationTrace:
    """Fixed-step integration over ``[0, t_end]``; every ``stride``-th state is kept plus the last."""
    x = np.array(config.initial if initial is None else initial, dtype=float)
    if x.shape != (system.net.state_dim,):
        raise ValueError(f"initial state has shape {x.shape}, expected ({system.net.state_dim},)")
    n = config.steps
    times, states = [0.0], [x.copy()]
    with np.errstate(all="ignore"):
        for i in range(1, n + 1):
            x = _step(system, x, lam, config.dt, config.method)
            if not np.all(np.isfinite(x)):
                raise NonFiniteStateError(i, lam)
            if i % config.stride == 0 or i == n:
                times.append(i * config.dt)
                states.append(x.copy())
    return SimulationTrace(np.array(times), np.array(states), lam)


def integrate_euler(system: AdmissibleSystem, lam: float, config: SimConfig = SimConfig(),
                    initial: Sequence[float] | None = None) -> SimulationTrace:
    """Forward Euler ``x <- x + dt f(x, lam)`` for ``ceil(t_end/dt)`` steps."""
    if config.method != "euler":
        config = SimConfig(**{**config.__dict__, "method": "euler"})
    return integrate(system, lam, config, initial)


def integrate_batch(system: AdmissibleSystem, lams: np.ndarray, config: SimConfig,
                    initial: Sequence[float] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Integrate one trajectory per ``lam`` at once.

    Returns final states ``(B, D)`` and the first non-finite step per row
    (``-1`` if the row stayed finite).  Rows that blow up are frozen at NaN.
    """
    lams = np.asarray(lams, dtype=float)
    x0 = np.array(config.initial if initial is None else initial, dtype=float)
    x = np.tile(x0, (len(lams), 1))
    failed = np.full(len(lams), -1, dtype=np.int64)
    with np.errstate(all="ignore"):
        for i in range(1, config.steps + 1):
            x = _step(system, x, lams, config.dt, config.method)
            bad = ~np.all(np.isfinite(x), axis=1)
            if bad.any():
                fresh = bad & (failed < 0)
                failed[fresh] = i
                x[bad] = np.nan
    return x, failed


@dataclass(frozen=True)
class BifurcationDiagram:
    columns: tuple[str, ...]
    lambdas: np.ndarray
    states: np.ndarray
    residual: np.ndarray
    converged: np.ndarray
    failed_step: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.failed_step is None:
            object.__setattr__(self, "failed_step", np.full(len(self.lambdas), -1, dtype=np.int64))

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.columns.index(name)]

    def __len__(self):
        return len(self.lambdas)

    def identical(self, other: BifurcationDiagram) -> bool:
        """Bitwise equality of every array (NaNs compare equal)."""
        return (self.columns == other.columns
                and all(np.array_equal(a, b, equal_nan=True) for a, b in (
                    (self.lambdas, other.lambdas), (self.states, other.states),
                    (self.residual, other.residual)))
                and np.array_equal(self.converged, other.converged)
                and np.array_equal(self.failed_step, other.failed_step))


def state_columns(system: AdmissibleSystem) -> tuple[str, ...]:
    net = system.net
    cols = []
    for v in net.vertex_ids:
        d = net.dim(v)
        cols.extend([v] if d == 1 else [f"{v}[{c}]" for c in range(d)])
    return tuple(cols)


_WORKER: dict = {}


def _init_worker(system, config, initial):
    # fork start: arguments are inherited, so closures in builtin responses need no pickling
    _WORKER.update(system=system, config=config, initial=initial)


def _chunk_job(lams):
    return integrate_batch(_WORKER["system"], lams, _WORKER["config"], _WORKER["initial"])


def sweep(system: AdmissibleSystem, config: SimConfig = SimConfig(), initial: Sequence[float] | None = None,
          jobs: int = 1, lambdas: Sequence[float] | None = None) -> BifurcationDiagram:
    """Integrate at every grid value of lambda and record final states and residuals.

    The grid is cut into fixed chunks of ``config.chunk`` values regardless of
    ``jobs``, so sequential and parallel sweeps perform identical arithmetic.
    """
    lams = np.asarray(config.lambdas if lambdas is None else lambdas, dtype=float)
    chunks = [lams[i:i + config.chunk] for i in range(0, len(lams), config.chunk)]
    if jobs > 1 and len(chunks) > 1 and "fork" in mp.get_all_start_methods():
        with ProcessPoolExecutor(max_workers=jobs, mp_context=mp.get_context("fork"),
                                 initializer=_init_worker, initargs=(system, config, initial)) as pool:
            results = list(pool.map(_chunk_job, chunks))
    else:
        results = [integrate_batch(system, c, config, initial) for c in chunks]
    states = np.concatenate([r[0] for r in results]) if results else np.zeros((0, system.net.state_dim))
    failed = np.concatenate([r[1] for r in results]) if results else np.zeros(0, dtype=np.int64)
    with np.errstate(all="ignore"):
        res = np.max(np.abs(system.eval(states, lams)), axis=1) if len(lams) else np.zeros(0)
    res = np.where(np.isfinite(res), res, np.inf)
    converged = (res <= config.steady_tol) & (failed < 0)
    return BifurcationDiagram(state_columns(system), lams, states, res, converged, failed)


# -- slope fitting --------------------------------------------------------------------------


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r2: float
    n: int
    lam_range: tuple[float, float]


def default_fit_range(lambdas: np.ndarray) -> tuple[float, float]:
    """Upper half-decade of the positive lambdas: ``[max / sqrt(10), max]``."""
    top = float(np.max(lambdas))
    if top <= 0:
        raise ValueError("no positive lambda values to fit")
    return top / math.sqrt(10.0), top


def loglog_slope(lambdas, quantity, lam_range: tuple[float, float] | None = None,
                 floor: float = 1e-14, min_points: int = 5) -> SlopeFit:
    """Least-squares slope of ``log(quantity)`` against ``log(lambda)``.

    Only rows with ``lambda`` in range (inclusive), ``lambda > 0`` and a finite
    ``quantity > floor`` enter the fit.
    """
    lam = np.asarray(lambdas, dtype=float)
    q = np.asarray(quantity, dtype=float)
    lo, hi = lam_range if lam_range is not None else default_fit_range(lam)
    eps = 1e-12 * max(abs(lo), abs(hi))
    use = (lam > 0) & (lam >= lo - eps) & (lam <= hi + eps) & np.isfinite(q) & (q > floor)
    n = int(use.sum())
    if n < min_points:
        raise ValueError(f"only {n} usable points in [{lo}, {hi}], need {min_points}")
    x, y = np.log(lam[use]), np.log(q[use])
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ np.array([slope, intercept])
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return SlopeFit(float(slope), float(intercept), r2, n, (lo, hi))


def diagram_slope(diagram: BifurcationDiagram, pair: tuple[str, str] = ("w0", "w1"),
                  lam_range: tuple[float, float] | None = None) -> SlopeFit:
    q = np.abs(diagram.column(pair[0]) - diagram.column(pair[1]))
    return loglog_slope(diagram.lambdas, q, lam_range)


# -- CSV --------------------------------------------------------------------------------------


def write_csv(diagram: BifurcationDiagram, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["lambda", *diagram.columns, "residual", "converged"])
    for i in range(len(diagram)):
        w.writerow([repr(float(diagram.lambdas[i])), *(repr(float(s)) for s in diagram.states[i]),
                    repr(float(diagram.residual[i])), "true" if diagram.converged[i] else "false"])


def read_csv(fh) -> BifurcationDiagram:
    r = csv.reader(fh)
    try:
        header = next(r)
    except StopIteration:
        raise ValueError("empty CSV") from None
    if len(header) < 3 or header[0] != "lambda" or header[-2:] != ["residual", "converged"]:
        raise ValueError("CSV header must be 'lambda,<columns...>,residual,converged'")
    rows = [row for row in r if row]
    for n, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise ValueError(f"CSV line {n}: expected {len(header)} fields, got {len(row)}")
    lam = np.array([float(row[0]) for row in rows])
    states = np.array([[float(x) for x in row[1:-2]] for row in rows]).reshape(len(rows), len(header) - 3)
    res = np.array([float(row[-2]) for row in rows])
    conv = np.array([row[-1].strip().lower() == "true" for row in rows])
    return BifurcationDiagram(tuple(header[1:-2]), lam, states, res, conv)

"""BFGS minimizer and the layerwise VQE driver with multi-step-size restarts.

The driver grows the circuit one repeating unit at a time.  At each depth L
it keeps the optimized parameters of the first L-1 units as a warm start and
launches one independent minimization per restart step size delta, with the
new unit initialized to u/max|u| * delta for uniform random u.  Because the
delta = 0 restart reproduces the previous state exactly (the all-zero unit is
the identity for the staircase ansatz families) and the minimizer only ever
accepts descent steps, the collected energies are exactly nonincreasing for
those families.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .ansatz import AnsatzKind, Circuit, build_ansatz
from .gradient import energy_and_gradient
from .pauli import PauliSum
from .statevector import Statevector, basis_state

logger = logging.getLogger("vqekit")

_DEFAULT_STEP_SIZES = tuple(2 * math.pi / 2**k for k in range(6)) + (0.0,)


class OptimizationError(RuntimeError):
    """Raised when a minimization aborts (non-finite objective)."""


@dataclass
class BfgsConfig:
    max_iterations: int = 3000
    gradient_tolerance: float = 1e-7
    c1: float = 1e-4
    c2: float = 0.9

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.c1 < self.c2 < 1:
            raise ValueError("Wolfe constants need 0 < c1 < c2 < 1")


@dataclass
class RestartSpec:
    step_sizes: tuple[float, ...] = _DEFAULT_STEP_SIZES
    seed: int = 0

    def __post_init__(self) -> None:
        self.step_sizes = tuple(float(s) for s in self.step_sizes)
        if 0.0 not in self.step_sizes:
            raise ValueError("step_sizes must contain 0 (monotonicity guarantee)")


@dataclass
class LayerRecord:
    layer: int
    energy: float
    params: np.ndarray
    step_size: float
    iterations: int
    wall_time_s: float


@dataclass
class LayerwiseResult:
    records: list[LayerRecord] = field(default_factory=list)

    @property
    def energies(self) -> list[float]:
        return [r.energy for r in self.records]

    @property
    def final(self) -> LayerRecord:
        return self.records[-1]


ObjectiveWithGradient = Callable[[np.ndarray], tuple[float, np.ndarray]]


def _check_finite(f: float, x: np.ndarray) -> None:
    if not math.isfinite(f):
        raise OptimizationError(f"objective is {f!r} at x with |x|_max={np.max(np.abs(x)):.3e}")


def _wolfe_line_search(
    fg: ObjectiveWithGradient,
    x: np.ndarray,
    p: np.ndarray,
    f0: float,
    slope0: float,
    c1: float,
    c2: float,
    max_evals: int = 30,
):
    """Strong Wolfe search along p.  Returns (alpha, f, g) or None.

    Falls back to the best Armijo point when the curvature condition cannot
    be met within the evaluation budget, so an accepted step always strictly
    decreases the objective.
    """

    def phi(alpha: float):
        f, g = fg(x + alpha * p)
        _check_finite(f, x + alpha * p)
        return f, g, float(g @ p)

    armijo_fallback = None

    def zoom(lo, f_lo, slope_lo, hi, f_hi, budget):
        nonlocal armijo_fallback
        for _ in range(budget):
            # quadratic interpolation with a bisection guard
            denom = 2.0 * (f_hi - f_lo - slope_lo * (hi - lo))
            alpha = lo + (slope_lo * (hi - lo) ** 2) / -denom if denom != 0 else 0.5 * (lo + hi)
            span = abs(hi - lo)
            if not (min(lo, hi) + 0.1 * span <= alpha <= max(lo, hi) - 0.1 * span):
                alpha = 0.5 * (lo + hi)
            f, g, slope = phi(alpha)
            if f > f0 + c1 * alpha * slope0 or f >= f_lo:
                hi, f_hi = alpha, f
            else:
                armijo_fallback = (alpha, f, g)
                if abs(slope) <= -c2 * slope0:
                    return alpha, f, g
                if slope * (hi - lo) >= 0:
                    hi, f_hi = lo, f_lo
                lo, f_lo, slope_lo = alpha, f, slope
            if abs(hi - lo) < 1e-16 * max(1.0, abs(lo)):
                break
        return armijo_fallback

    alpha_prev, f_prev, slope_prev = 0.0, f0, slope0
    alpha = 1.0
    for i in range(max_evals):
        f, g, slope = phi(alpha)
        if f > f0 + c1 * alpha * slope0 or (i > 0 and f >= f_prev):
            return zoom(alpha_prev, f_prev, slope_prev, alpha, f, max_evals - i)
        armijo_fallback = (alpha, f, g)
        if abs(slope) <= -c2 * slope0:
            return alpha, f, g
        if slope >= 0:
            return zoom(alpha, f, slope, alpha_prev, f_prev, max_evals - i)
        alpha_prev, f_prev, slope_prev = alpha, f, slope
        alpha *= 2.0
        if alpha > 1e10:
            break
    return armijo_fallback


def minimize_bfgs(
    fun_and_grad: ObjectiveWithGradient,
    x0: Sequence[float],
    config: BfgsConfig | None = None,
) -> tuple[np.ndarray, float, int]:
    """Dense BFGS with strong Wolfe line search; returns (x*, f*, iterations).

    Descent-only: the returned value never exceeds f(x0).  Terminates on the
    max-norm gradient tolerance, the iteration cap, or line-search failure
    (after one inverse-Hessian reset attempt).
    """
    config = config or BfgsConfig()
    x = np.asarray(x0, dtype=float).copy()
    if not np.all(np.isfinite(x)):
        raise OptimizationError("x0 contains non-finite entries")
    n = x.size
    f, g = fun_and_grad(x)
    _check_finite(f, x)
    if n == 0:
        return x, f, 0
    hess_inv = np.eye(n)
    identity = np.eye(n)
    iterations = 0
    while iterations < config.max_iterations:
        if np.max(np.abs(g)) <= config.gradient_tolerance:
            break
        iterations += 1
        p = -hess_inv @ g
        slope = float(g @ p)
        if slope >= 0:  # stale curvature: reset to steepest descent
            hess_inv = np.eye(n)
            p = -g
            slope = float(g @ p)
            if slope >= 0:
                break  # gradient is numerically zero
        result = _wolfe_line_search(fun_and_grad, x, p, f, slope, config.c1, config.c2)
        if result is None and not np.array_equal(hess_inv, identity):
            hess_inv = np.eye(n)
            p = -g
            slope = float(g @ p)
            if slope < 0:
                result = _wolfe_line_search(fun_and_grad, x, p, f, slope, config.c1, config.c2)
        if result is None:
            break
        alpha, f_new, g_new = result
        s = alpha * p
        y = g_new - g
        x = x + s
        sy = float(s @ y)
        if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            a = identity - rho * np.outer(s, y)
            hess_inv = a @ hess_inv @ a.T + rho * np.outer(s, s)
        f, g = f_new, g_new
    return x, f, iterations


def random_layer_params(dim: int, delta: float, rng: np.random.Generator) -> np.ndarray:
    """u / max|u| * delta for uniform u in [-1, 1]; zeros when delta = 0."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    u = rng.uniform(-1.0, 1.0, size=dim)
    if delta == 0.0:
        return np.zeros(dim)
    return u / np.max(np.abs(u)) * delta


def _vqe_objective(h: PauliSum, circuit: Circuit, reference: Statevector) -> ObjectiveWithGradient:
    def fg(x: np.ndarray) -> tuple[float, np.ndarray]:
        result = energy_and_gradient(h, circuit, x, reference)
        return result.energy, result.gradient

    return fg


def _run_restart(args) -> tuple[int, np.ndarray, float, int]:
    index, n_qubits, terms, circuit, reference_bits, x0, config = args
    h = PauliSum(n_qubits, terms)
    reference = basis_state(n_qubits, reference_bits)
    x, f, iterations = minimize_bfgs(_vqe_objective(h, circuit, reference), x0, config)
    return index, x, f, iterations


def layerwise_step(
    h: PauliSum,
    kind: AnsatzKind,
    reference: str,
    result: LayerwiseResult,
    bfgs: BfgsConfig | None = None,
    restarts: RestartSpec | None = None,
    workers: int = 1,
) -> LayerRecord:
    """Append one depth to a layerwise run (see layerwise_vqe)."""
    bfgs = bfgs or BfgsConfig()
    restarts = restarts or RestartSpec()
    n = h.n_qubits
    if len(reference) != n:
        raise ValueError("reference bitstring length must match the Hamiltonian")
    if result.records:
        L = result.records[-1].layer + 1
        prev_params = result.records[-1].params
    else:
        L = 1
        prev_params = np.zeros(0)
    start = time.perf_counter()
    circuit = build_ansatz(kind, n, L)
    new_dim = circuit.n_params - prev_params.size
    tasks = []
    for i, delta in enumerate(restarts.step_sizes):
        rng = np.random.default_rng([restarts.seed, L, i])
        x0 = np.concatenate([prev_params, random_layer_params(new_dim, delta, rng)])
        tasks.append((i, n, h.terms, circuit, reference, x0, bfgs))

    outcomes: dict[int, tuple[np.ndarray, float, int]] = {}
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_restart, t) for t in tasks]
            for task, future in zip(tasks, futures):
                try:
                    idx, x, f, its = future.result()
                    outcomes[idx] = (x, f, its)
                except Exception as exc:
                    logger.warning("restart %d at L=%d failed: %s", task[0], L, exc)
    else:
        for task in tasks:
            try:
                idx, x, f, its = _run_restart(task)
                outcomes[idx] = (x, f, its)
            except Exception as exc:
                logger.warning("restart %d at L=%d failed: %s", task[0], L, exc)
    if not outcomes:
        raise OptimizationError(f"every restart failed at L={L}")

    best_index = min(outcomes, key=lambda i: (outcomes[i][1], restarts.step_sizes[i]))
    x_best, f_best, its_best = outcomes[best_index]
    record = LayerRecord(
        layer=L,
        energy=f_best,
        params=x_best,
        step_size=restarts.step_sizes[best_index],
        iterations=its_best,
        wall_time_s=time.perf_counter() - start,
    )
    result.records.append(record)
    return record


def layerwise_vqe(
    h: PauliSum,
    kind: AnsatzKind,
    reference: str,
    L_max: int,
    bfgs: BfgsConfig | None = None,
    restarts: RestartSpec | None = None,
    workers: int = 1,
) -> LayerwiseResult:
    """Layerwise optimization: warm-start L-1 units, restart the new unit.

    All restarts of a depth are independent minimizations over the full
    parameter vector; the minimum energy wins, ties broken by the smallest
    step size.  A restart that raises is dropped with a warning as long as at
    least one succeeds.  Seeds derive from (spec.seed, L, restart index), so
    results do not depend on worker scheduling.
    """
    if L_max < 1:
        raise ValueError("L_max must be >= 1")
    result = LayerwiseResult()
    for _ in range(L_max):
        layerwise_step(h, kind, reference, result, bfgs, restarts, workers)
    return result

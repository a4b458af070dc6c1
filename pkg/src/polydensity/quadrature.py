"""Adaptive tensor-product quadrature over boxes in up to four dimensions.

Each cell carries two nested Gauss-Legendre estimates (orders 7 and 11 per
axis); their difference is the error estimate, and the cell with the worst
estimate is bisected along its widest axis until the requested tolerance or
the evaluation budget is reached.  Integrands are vectorised callables over
coordinate arrays and may be complex-valued.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

_LOW_ORDER = 7
_HIGH_ORDER = 11


@dataclass
class QuadratureResult:
    value: float | complex
    abs_error_estimate: float
    evaluations: int
    converged: bool = True


def _nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


_X_LOW, _W_LOW = _nodes(_LOW_ORDER)
_X_HIGH, _W_HIGH = _nodes(_HIGH_ORDER)


def _cell_estimates(func, cell) -> tuple[complex, complex, int]:
    """(low-order estimate, high-order estimate, evaluation count)."""
    n = len(cell)
    low = _tensor_rule(func, cell, _X_LOW, _W_LOW)
    high = _tensor_rule(func, cell, _X_HIGH, _W_HIGH)
    return low, high, _LOW_ORDER**n + _HIGH_ORDER**n


def _tensor_rule(func, cell, x, w) -> complex:
    n = len(cell)
    axes_pts = []
    axes_wts = []
    for a, b in cell:
        half = (b - a) / 2.0
        axes_pts.append((a + b) / 2.0 + half * x)
        axes_wts.append(half * w)
    grids = np.meshgrid(*axes_pts, indexing="ij", sparse=True)
    vals = func(grids)
    weight = axes_wts[0].reshape((-1,) + (1,) * (n - 1))
    for i in range(1, n):
        weight = weight * axes_wts[i].reshape((1,) * i + (-1,) + (1,) * (n - 1 - i))
    return complex(np.sum(vals * weight))


def integrate_box(
    func: Callable[[Sequence[np.ndarray]], np.ndarray],
    bounds: Sequence[tuple[float, float]],
    tol: float,
    pre_subdivisions: Sequence[int] | int = 1,
    max_evaluations: int = 4_000_000,
) -> QuadratureResult:
    """Integrate a vectorised integrand over a box to absolute tolerance."""
    n = len(bounds)
    if isinstance(pre_subdivisions, int):
        pre_subdivisions = [pre_subdivisions] * n
    axes = []
    for (a, b), k in zip(bounds, pre_subdivisions):
        edges = np.linspace(float(a), float(b), max(1, int(k)) + 1)
        axes.append(list(zip(edges[:-1], edges[1:])))
    cells = [tuple(c) for c in itertools.product(*axes)]

    total_evals = 0
    heap = []  # (-error, counter, cell, high_estimate)
    counter = 0
    value = 0.0 + 0.0j
    error = 0.0
    for cell in cells:
        low, high, ev = _cell_estimates(func, cell)
        total_evals += ev
        err = abs(high - low)
        heapq.heappush(heap, (-err, counter, cell, high))
        value += high
        error += err
        counter += 1

    while error > tol and total_evals < max_evaluations:
        neg_err, _, cell, high = heapq.heappop(heap)
        value -= high
        error += neg_err
        widths = [b - a for a, b in cell]
        axis = widths.index(max(widths))
        a, b = cell[axis]
        mid = (a + b) / 2.0
        for sub in ((a, mid), (mid, b)):
            child = list(cell)
            child[axis] = sub
            low, high, ev = _cell_estimates(func, tuple(child))
            total_evals += ev
            err = abs(high - low)
            heapq.heappush(heap, (-err, counter, tuple(child), high))
            value += high
            error += err
            counter += 1

    # recompute totals once to shed float accumulation drift
    value = sum(item[3] for item in heap)
    error = sum(-item[0] for item in heap)
    if abs(complex(value).imag) == 0:
        value = complex(value).real
    return QuadratureResult(
        value=value,
        abs_error_estimate=error,
        evaluations=total_evals,
        converged=error <= tol,
    )

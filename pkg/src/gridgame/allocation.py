"""Closed-form solutions of the per-slot lower-level allocation problems.

Two decoupled static problems live below the supply/demand game:

* generation: the supplier splits a committed supply ``s`` across its
  generators to minimise total quadratic cost ``sum_g 0.5 * delta_g * e_g**2``
  subject to ``sum_g e_g = s``;
* consumption: a user splits a demand ``d`` across appliances to maximise the
  weighted log utility ``sum_a psi_a * ln(v_a)`` subject to ``sum_a v_a = d``.

Both are solved exactly by their KKT conditions. The game layer never sees
the per-device vectors; it only consumes the aggregated quadratic-cost
coefficient (``aggregate_generation_cost``) and the per-user utility
coefficient (``utility_coefficient``).

A note on conventions: the utility coefficient is ``exp(sum_a psi_a * ln
psi_a)`` with ``0 * ln 0 = 0``, and the consumption split is ``v_a = (psi_a /
q) * d`` where ``q = sum_a psi_a``. An alternative convention scales the
split as ``v_a = psi_a * d``, which respects the budget constraint only when
``q = 1``; we keep the KKT-consistent split for all ``q`` (the two coincide
at ``q = 1``) while leaving the utility coefficient untouched, since only the
coefficient feeds the game layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDelta, NonPositiveDemand

__all__ = [
    "GenerationAllocation",
    "ConsumptionAllocation",
    "solve_generation",
    "aggregate_generation_cost",
    "solve_consumption",
    "utility_coefficient",
]


@dataclass(frozen=True)
class GenerationAllocation:
    """Optimal per-generator output for one slot.

    ``e`` sums to the committed supply, ``lam`` is the multiplier of the
    supply-balance constraint and ``cost`` the minimised total cost.
    """

    e: np.ndarray
    lam: float
    cost: float


@dataclass(frozen=True)
class ConsumptionAllocation:
    """Optimal per-appliance split of one slot's demand.

    ``lam`` is ``None`` for the degenerate zero-demand case, where the
    multiplier formula ``q / d`` is singular and the allocation is all zeros.
    """

    v: np.ndarray
    lam: float | None
    utility: float


def aggregate_generation_cost(delta) -> float:
    """Quadratic coefficient of the minimised generation cost.

    The minimised cost equals ``0.5 * delta_bar * s**2`` with
    ``delta_bar = 1 / sum_g (1 / delta_g)`` (the harmonic aggregation of the
    generator coefficients; algebraically identical to the double-sum form
    ``sum_g (1/delta_g) * (1 / sum_h 1/delta_h)**2``).
    """
    delta = np.asarray(delta, dtype=float)
    if delta.size == 0:
        raise NonPositiveDelta("generator cost vector is empty")
    if np.any(delta <= 0.0):
        raise NonPositiveDelta(f"generator costs must be > 0, got {delta.tolist()}")
    return 1.0 / float(np.sum(1.0 / delta))


def solve_generation(delta, s: float) -> GenerationAllocation:
    """Split supply ``s`` across generators with cost coefficients ``delta``.

    KKT solution: ``e_g = s / (delta_g * sum_h 1/delta_h)`` and
    ``lam = -s / sum_h 1/delta_h``.
    """
    delta = np.asarray(delta, dtype=float)
    if delta.size == 0 or np.any(delta <= 0.0):
        raise NonPositiveDelta(f"generator costs must be > 0, got {delta.tolist()}")
    if s < 0.0:
        raise ValueError(f"supply must be >= 0, got {s}")
    inv_sum = float(np.sum(1.0 / delta))
    e = s / (delta * inv_sum)
    lam = -s / inv_sum
    cost = float(np.sum(0.5 * delta * e**2))
    return GenerationAllocation(e=e, lam=lam, cost=cost)


def utility_coefficient(psi) -> float:
    """``exp(sum_a psi_a * ln psi_a)`` with the ``0 * ln 0 = 0`` convention."""
    psi = np.asarray(psi, dtype=float)
    if np.any(psi < 0.0):
        raise ValueError(f"appliance weights must be >= 0, got {psi.tolist()}")
    positive = psi[psi > 0.0]
    return math.exp(float(np.sum(positive * np.log(positive))))


def solve_consumption(psi, d: float, q: float, sigma: float | None = None) -> ConsumptionAllocation:
    """Split demand ``d`` across appliances weighted by ``psi`` (sum = q).

    KKT solution of the log-utility problem: ``v_a = (psi_a / q) * d`` with
    multiplier ``lam = q / d``. The achieved utility is reported as
    ``utility_coefficient(psi) * d**(sigma * q)``; ``sigma`` defaults to
    ``1 / q``, the regime in which utility is linear in demand.

    ``d = 0`` returns the all-zeros allocation with utility 0 and no
    multiplier (``lam = q / d`` is singular there).
    """
    psi = np.asarray(psi, dtype=float)
    if d < 0.0:
        raise NonPositiveDemand(f"demand must be >= 0, got {d}")
    if q <= 0.0:
        raise ValueError(f"weight budget q must be > 0, got {q}")
    if abs(float(np.sum(psi)) - q) > 1e-9:
        raise ValueError(f"weights sum to {float(np.sum(psi))}, expected q = {q}")
    if sigma is None:
        sigma = 1.0 / q
    if d == 0.0:
        return ConsumptionAllocation(v=np.zeros_like(psi), lam=None, utility=0.0)
    v = (psi / q) * d
    utility = utility_coefficient(psi) * d ** (sigma * q)
    return ConsumptionAllocation(v=v, lam=q / d, utility=float(utility))

"""Domain types, validation and lower-level reduction.

A :class:`Scenario` is the full parameterisation of the game: horizon,
price-law parameters, one :class:`UserParams` per user, supplier parameters
and the common appliance-weight budget ``q``. All per-slot quantities are
stored as full arrays over the ``T`` slots; scalar inputs are broadcast at
construction time so solvers never special-case constants.

``reduce`` eliminates the lower level: it attaches the per-slot aggregated
generation-cost coefficient ``delta_bar`` and the per-user marginal-utility
coefficient ``psi_bar``, the only two quantities the game layer consumes.

Conventions: time slots are 1..T; array index ``t-1`` holds slot ``t``.
Price paths have length T+1 (terminal price included). The utility
sensitivity is pinned to ``sigma = 1/q`` — that is what makes user utility
linear in demand, and every equilibrium formula downstream relies on it, so
it is enforced here rather than silently producing wrong equilibria.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import allocation
from .errors import ScenarioValidationError

__all__ = [
    "Horizon",
    "PriceParams",
    "UserParams",
    "SupplierParams",
    "Scenario",
    "ReducedScenario",
    "validate",
    "reduce",
    "from_mapping",
]

_BUDGET_TOL = 1e-9


def per_slot(value, T: int, name: str = "value") -> np.ndarray:
    """Coerce a scalar or length-T sequence to a read-only (T,) array."""
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a scalar or 1-d sequence, got shape {arr.shape}")
    if arr.size == 1:
        arr = np.full(T, arr[0])
    elif arr.size != T:
        raise ValueError(f"{name} has length {arr.size}, expected 1 or T={T}")
    arr.flags.writeable = False
    return arr


def per_slot_vectors(value, T: int, name: str = "value") -> np.ndarray:
    """Coerce a K-vector or T x K nested sequence to a read-only (T, K) array."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1:
        arr = np.tile(arr, (T, 1))
    elif arr.ndim == 2:
        if arr.shape[0] == 1:
            arr = np.tile(arr[0], (T, 1))
        elif arr.shape[0] != T:
            raise ValueError(f"{name} has {arr.shape[0]} rows, expected 1 or T={T}")
    else:
        raise ValueError(f"{name} must be 1-d or 2-d, got shape {arr.shape}")
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Horizon:
    """Number of time slots T; slots are indexed 1..T, prices 1..T+1."""

    T: int


@dataclass(frozen=True, eq=False)
class PriceParams:
    """Sticky-price law parameters.

    ``omega`` (per slot, < 0) damps the carried-over price, ``gamma`` (> 0)
    scales the demand-minus-supply force, ``noise_variance`` (per slot, >= 0)
    is the variance of the additive zero-mean Gaussian disturbance ``eta``.
    Variance 0 expresses the deterministic counterpart. Prices may go
    negative; nothing here clips them.
    """

    p1: float
    omega: np.ndarray
    gamma: float
    noise_variance: np.ndarray


@dataclass(frozen=True, eq=False)
class UserParams:
    """One user's cost/utility parameters.

    ``alpha`` (per slot, > 0) weighs the quadratic adjustment cost, ``sigma``
    is the utility sensitivity (pinned to 1/q at validation) and
    ``appliance_weights`` is the (T, A) matrix of per-slot appliance weights,
    each row summing to the scenario budget ``q``.
    """

    alpha: np.ndarray
    sigma: float
    appliance_weights: np.ndarray
    appliance_names: tuple[str, ...] | None = None


@dataclass(frozen=True, eq=False)
class SupplierParams:
    """Supplier's imbalance penalty ``kappa`` (per slot, > 0) and the
    (T, G) matrix of per-slot generator cost coefficients (> 0)."""

    kappa: np.ndarray
    generator_costs: np.ndarray
    generator_names: tuple[str, ...] | None = None


@dataclass(frozen=True, eq=False)
class Scenario:
    """Immutable full parameterisation of the game."""

    horizon: Horizon
    price: PriceParams
    users: tuple[UserParams, ...]
    supplier: SupplierParams
    q: float

    @property
    def T(self) -> int:
        return self.horizon.T

    @property
    def N(self) -> int:
        return len(self.users)

    def alpha_matrix(self) -> np.ndarray:
        """Per-user adjustment weights stacked as an (N, T) array."""
        return np.vstack([u.alpha for u in self.users])


@dataclass(frozen=True, eq=False)
class ReducedScenario(Scenario):
    """Scenario plus the lower-level reduction coefficients.

    ``psi_bar`` is (N, T): user i's marginal utility per slot. ``delta_bar``
    is (T,): the aggregated quadratic generation-cost coefficient.
    """

    psi_bar: np.ndarray = None
    delta_bar: np.ndarray = None


def _collect_violations(s: Scenario) -> list[tuple[str, str]]:
    v: list[tuple[str, str]] = []
    T = s.horizon.T
    if T < 1:
        v.append(("NonPositiveHorizon", f"T = {T} must be >= 1"))
    if s.N < 1:
        v.append(("EmptyUserSet", "scenario has no users"))
    if s.q <= 0.0:
        v.append(("NonPositiveBudget", f"q = {s.q} must be > 0"))

    p = s.price
    if p.p1 <= 0.0:
        v.append(("NonPositiveInitialPrice", f"p1 = {p.p1} must be > 0"))
    if p.gamma <= 0.0:
        v.append(("NonPositiveGamma", f"gamma = {p.gamma} must be > 0"))
    bad = np.nonzero(p.omega >= 0.0)[0]
    if bad.size:
        t = bad[0] + 1
        v.append(("NonNegativeOmega", f"omega[t={t}] = {p.omega[bad[0]]} must be < 0"))
    bad = np.nonzero(p.noise_variance < 0.0)[0]
    if bad.size:
        t = bad[0] + 1
        v.append(("NegativeNoiseVariance", f"noise_variance[t={t}] = {p.noise_variance[bad[0]]} must be >= 0"))

    for i, u in enumerate(s.users, start=1):
        if np.any(u.alpha <= 0.0):
            t = int(np.nonzero(u.alpha <= 0.0)[0][0]) + 1
            v.append(("NonPositiveAlpha", f"user {i}: alpha[t={t}] = {u.alpha[t - 1]} must be > 0"))
        if u.appliance_weights.shape[1] == 0:
            v.append(("EmptyApplianceSet", f"user {i} has no appliances"))
            continue
        if np.any(u.appliance_weights < 0.0):
            v.append(("NegativeWeight", f"user {i} has a negative appliance weight"))
        sums = u.appliance_weights.sum(axis=1)
        bad = np.nonzero(np.abs(sums - s.q) > _BUDGET_TOL)[0]
        if bad.size:
            t = bad[0] + 1
            v.append((
                "WeightBudgetMismatch",
                f"user {i}: weights at t={t} sum to {sums[bad[0]]!r}, expected q = {s.q}",
            ))
        if abs(u.sigma - 1.0 / s.q) > _BUDGET_TOL:
            v.append((
                "SigmaMismatch",
                f"user {i}: sigma = {u.sigma} must equal 1/q = {1.0 / s.q}",
            ))

    sup = s.supplier
    if np.any(sup.kappa <= 0.0):
        t = int(np.nonzero(sup.kappa <= 0.0)[0][0]) + 1
        v.append(("NonPositiveKappa", f"kappa[t={t}] = {sup.kappa[t - 1]} must be > 0"))
    if sup.generator_costs.shape[1] == 0:
        v.append(("EmptyGeneratorSet", "supplier has no generators"))
    elif np.any(sup.generator_costs <= 0.0):
        v.append(("NonPositiveDelta", "supplier has a generator cost <= 0"))

    return v


def validate(s: Scenario) -> Scenario:
    """Return ``s`` unchanged if every invariant holds, else raise
    :class:`ScenarioValidationError` listing all violations at once."""
    violations = _collect_violations(s)
    if violations:
        raise ScenarioValidationError(violations)
    return s


def reduce(s: Scenario) -> ReducedScenario:
    """Validate and attach the lower-level reduction coefficients.

    Deterministic and idempotent: reducing an already reduced scenario
    recomputes identical coefficients.
    """
    validate(s)
    T = s.T
    delta_bar = np.array([
        allocation.aggregate_generation_cost(s.supplier.generator_costs[t])
        for t in range(T)
    ])
    psi_bar = np.array([
        [allocation.utility_coefficient(u.appliance_weights[t]) for t in range(T)]
        for u in s.users
    ])
    delta_bar.flags.writeable = False
    psi_bar.flags.writeable = False
    return ReducedScenario(
        horizon=s.horizon,
        price=s.price,
        users=s.users,
        supplier=s.supplier,
        q=s.q,
        psi_bar=psi_bar,
        delta_bar=delta_bar,
    )


def from_mapping(data: dict) -> Scenario:
    """Build a Scenario from the parsed scenario-file data model.

    Expected top-level keys: ``horizon`` ({"T": int}), ``price`` ({"p1",
    "omega", "gamma", "noise_variance"?}), ``users`` (array of {"alpha",
    "sigma"?, "appliance_weights"}), ``supplier`` ({"kappa",
    "generator_costs"}) and ``q``. Scalars given for per-slot sequences are
    broadcast over 1..T; ``sigma`` defaults to 1/q; ``noise_variance``
    defaults to 0. Weight/cost collections may be mappings (name -> value)
    or plain arrays.
    """
    try:
        T = int(data["horizon"]["T"])
        q = float(data["q"])
        praw = data["price"]
        price = PriceParams(
            p1=float(praw["p1"]),
            omega=per_slot(praw["omega"], T, "price.omega"),
            gamma=float(praw["gamma"]),
            noise_variance=per_slot(praw.get("noise_variance", 0.0), T, "price.noise_variance"),
        )
        users = []
        for i, uraw in enumerate(data["users"], start=1):
            weights = uraw["appliance_weights"]
            names: tuple[str, ...] | None = None
            if isinstance(weights, dict):
                names = tuple(weights.keys())
                weights = np.column_stack([
                    per_slot(weights[k], T, f"users[{i}].appliance_weights[{k}]") for k in names
                ])
            users.append(UserParams(
                alpha=per_slot(uraw["alpha"], T, f"users[{i}].alpha"),
                sigma=float(uraw.get("sigma", 1.0 / q)),
                appliance_weights=per_slot_vectors(weights, T, f"users[{i}].appliance_weights"),
                appliance_names=names,
            ))
        sraw = data["supplier"]
        costs = sraw["generator_costs"]
        gnames: tuple[str, ...] | None = None
        if isinstance(costs, dict):
            gnames = tuple(costs.keys())
            costs = np.column_stack([
                per_slot(costs[k], T, f"supplier.generator_costs[{k}]") for k in gnames
            ])
        supplier = SupplierParams(
            kappa=per_slot(sraw["kappa"], T, "supplier.kappa"),
            generator_costs=per_slot_vectors(costs, T, "supplier.generator_costs"),
            generator_names=gnames,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioValidationError([("MalformedScenario", str(exc))]) from exc
    return Scenario(horizon=Horizon(T=T), price=price, users=tuple(users), supplier=supplier, q=q)

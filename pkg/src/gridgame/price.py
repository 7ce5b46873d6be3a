"""Sticky-price state equation, deterministic and stochastic.

The price advances as ``p_{t+1} = (1 + omega_t) * p_t + gamma * (d_t - s_t)
+ eta_t``: a damped carry-over plus a force proportional to the
demand/supply gap plus an optional zero-mean Gaussian disturbance. Prices
may go negative and are propagated unmodified.

The disturbance is called ``eta`` throughout this package; the adjoint
multiplier sequence of the upper-level solver (``theta`` in
:mod:`gridgame.stackelberg`) is an unrelated deterministic quantity.

Because the disturbance enters additively and the dynamics are affine, the
expected stochastic path equals the deterministic path exactly;
``monte_carlo_mean`` exists to verify that certainty equivalence empirically
and to quantify sampling error. Trajectories draw from per-trajectory child
generators spawned deterministically from the master seed, so results are
reproducible and trajectories could be generated in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import ReducedScenario

__all__ = [
    "NoiseDraw",
    "MonteCarloPrice",
    "step",
    "roll_deterministic",
    "roll_stochastic",
    "sample_noise",
    "monte_carlo_mean",
]


@dataclass(frozen=True)
class NoiseDraw:
    """One realisation of the disturbance sequence, tagged with its seed."""

    eta: np.ndarray
    seed: int


@dataclass(frozen=True)
class MonteCarloPrice:
    """Sample mean and per-slot standard error of the stochastic price path."""

    mean: np.ndarray
    se: np.ndarray
    deterministic: np.ndarray
    draws: int
    seed: int


def step(p_t: float, omega_t: float, gamma: float, d_t: float, s_t: float,
         eta_t: float = 0.0) -> float:
    """One application of the price law."""
    return (1.0 + omega_t) * p_t + gamma * (d_t - s_t) + eta_t


def _total_demand(demands) -> np.ndarray:
    demands = np.asarray(demands, dtype=float)
    if demands.ndim == 1:
        demands = demands[None, :]
    return demands.sum(axis=0)


def roll_deterministic(reduced: ReducedScenario, demands, supply) -> np.ndarray:
    """Price path (length T+1) for given demands (N, T) and supply (T,),
    with the disturbance identically zero."""
    return roll_stochastic(reduced, demands, supply, np.zeros(reduced.T))


def roll_stochastic(reduced: ReducedScenario, demands, supply, eta) -> np.ndarray:
    """Price path (length T+1) under a given disturbance sequence."""
    T = reduced.T
    d_tot = _total_demand(demands)
    supply = np.asarray(supply, dtype=float)
    eta = np.asarray(eta, dtype=float)
    omega = reduced.price.omega
    gamma = reduced.price.gamma
    p = np.empty(T + 1)
    p[0] = reduced.price.p1
    for t in range(T):
        p[t + 1] = step(p[t], omega[t], gamma, d_tot[t], supply[t], eta[t])
    return p


def sample_noise(reduced: ReducedScenario, rng: np.random.Generator) -> np.ndarray:
    """One disturbance sequence eta_1..eta_T from a given generator."""
    return rng.normal(0.0, np.sqrt(reduced.price.noise_variance))


def monte_carlo_mean(reduced: ReducedScenario, demands, supply, draws: int,
                     seed: int) -> MonteCarloPrice:
    """Sample mean of the stochastic price path over ``draws`` trajectories.

    Standard errors are per slot (zero at t=1 where the price is fixed).
    Each trajectory uses its own child generator spawned from ``seed``.
    """
    if draws < 1:
        raise ValueError(f"draws must be >= 1, got {draws}")
    T = reduced.T
    children = np.random.SeedSequence(seed).spawn(draws)
    eta = np.empty((draws, T))
    for m, child in enumerate(children):
        eta[m] = sample_noise(reduced, np.random.default_rng(child))
    # Roll all trajectories at once; the demand side is fixed, only the
    # disturbance differs across rows.
    d_tot = _total_demand(demands)
    supply = np.asarray(supply, dtype=float)
    omega = reduced.price.omega
    gamma = reduced.price.gamma
    paths = np.empty((draws, T + 1))
    paths[:, 0] = reduced.price.p1
    for t in range(T):
        paths[:, t + 1] = (1.0 + omega[t]) * paths[:, t] \
            + gamma * (d_tot[t] - supply[t]) + eta[:, t]
    mean = paths.mean(axis=0)
    if draws > 1:
        se = paths.std(axis=0, ddof=1) / np.sqrt(draws)
    else:
        se = np.zeros(T + 1)
    det = roll_deterministic(reduced, demands, supply)
    return MonteCarloPrice(mean=mean, se=se, deterministic=det, draws=draws, seed=seed)

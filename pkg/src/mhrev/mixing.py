"""Transition semigroups by uniformization, total-variation mixing and separation,
and fastest strong stationary times of birth-death chains started at state 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TOL_ORDER, as_distribution, as_generator, from_off_diagonal, is_reversible
from .errors import (
    EpsilonOutOfRange,
    NegativeTime,
    NonPositiveAlpha,
    NotBirthDeath,
    NotIrreducible,
    NotReversible,
    ZeroGap,
)
from .spectral import relaxation_time, reversible_spectrum

POISSON_TAIL = 1e-13
# Larger Lambda*t is handled by halving t and squaring the result.
MAX_UNIFORM_STEP = 50.0
BISECTION_WIDTH = 1e-8


def _uniformized_block(rates: np.ndarray, lam: float, t: float) -> np.ndarray:
    n = rates.shape[0]
    jump = np.eye(n) + rates / lam
    mean = lam * t
    cap = int(math.ceil(mean + 40.0 * math.sqrt(mean) + 50.0))
    weight = math.exp(-mean)
    term = np.eye(n)
    out = weight * term
    mass = weight
    for k in range(1, cap + 1):
        if 1.0 - mass < POISSON_TAIL:
            break
        weight *= mean / k
        term = term @ jump
        out += weight * term
        mass += weight
    return out


def transition_semigroup(g, t: float) -> np.ndarray:
    """exp(G t) via uniformization: sum_k Poisson(Lambda t; k) (I + G/Lambda)^k."""
    t = float(t)
    if t < 0:
        raise NegativeTime(f"t={t} is negative")
    g = as_generator(g)
    lam = float(np.max(-np.diag(g.rates), initial=0.0))
    if lam == 0.0 or t == 0.0:
        return np.eye(g.n)
    squarings = max(0, math.ceil(math.log2(lam * t / MAX_UNIFORM_STEP))) if lam * t > MAX_UNIFORM_STEP else 0
    p = _uniformized_block(g.rates, lam, t / 2.0**squarings)
    for _ in range(squarings):
        p = p @ p
    p[(p < 0) & (p >= -POISSON_TAIL)] = 0.0
    return p


def worst_tv(g, stationary, t: float) -> float:
    """sup_x || P_t(x, .) - stationary ||_TV."""
    p = transition_semigroup(g, t)
    return float(0.5 * np.abs(p - stationary[None, :]).sum(axis=1).max())


def tv_mixing_time(g, stationary, eps: float = 0.25) -> float:
    """inf{t >= 0 : sup_x ||P_t(x,.) - pi||_TV < eps}, to absolute width 1e-8.

    Brackets by doubling (from the relaxation time when defined, else from
    1/Lambda) and then bisects, assuming the worst-case distance is
    non-increasing in t.
    """
    if not 0.0 < eps < 1.0:
        raise EpsilonOutOfRange(f"epsilon={eps} is outside (0, 1)")
    g = as_generator(g)
    pi = as_distribution(stationary, g.n, strict=True)
    if not g.irreducible:
        raise NotIrreducible("a reducible chain does not mix")
    if worst_tv(g, pi, 0.0) < eps:
        return 0.0
    try:
        hi = relaxation_time(g, pi)
    except ZeroGap:
        hi = 1.0 / float(np.max(-np.diag(g.rates)))
    lo = 0.0
    while worst_tv(g, pi, hi) >= eps:
        lo, hi = hi, 2.0 * hi
    while hi - lo > BISECTION_WIDTH:
        mid = 0.5 * (lo + hi)
        if worst_tv(g, pi, mid) < eps:
            hi = mid
        else:
            lo = mid
    return hi


def separation_distance(g, stationary, start: int, t: float) -> float:
    """max_y {1 - P_t(start, y) / pi(y)}, clipped to [0, 1]."""
    g = as_generator(g)
    pi = as_distribution(stationary, g.n, strict=True)
    row = transition_semigroup(g, t)[start]
    return float(np.clip(np.max(1.0 - row / pi), 0.0, 1.0))


@dataclass(frozen=True)
class SstDistribution:
    """Law of a sum of independent exponentials with the given rates.

    For an ergodic birth-death chain started at 0 the rates are the non-zero
    eigenvalues of -G, and the law is that of the fastest strong stationary time.
    """

    rates: tuple[float, ...]
    source: int = 0

    def laplace(self, alpha: float) -> float:
        return sst_laplace(self, alpha)

    @property
    def mean(self) -> float:
        return sst_mean(self)

    @property
    def variance(self) -> float:
        return sst_variance(self)

    def survival(self, t: float) -> float:
        return sst_survival(self, t)


def _is_birth_death(g) -> bool:
    off = g.off_diagonal()
    off[np.abs(off) <= 1e-14 * g.scale] = 0.0
    n = g.n
    band = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) == 1
    return bool(np.all(off[~band] == 0.0) and np.all(off[band] > 0.0))


def bd_sst(g, mu) -> SstDistribution:
    """Fastest strong stationary time from 0 of an ergodic mu-reversible birth-death chain."""
    g = as_generator(g)
    mu = as_distribution(mu, g.n, strict=True)
    if g.n < 2 or not _is_birth_death(g):
        raise NotBirthDeath("generator is not tridiagonal with positive birth and death rates")
    if not is_reversible(g, mu, TOL_ORDER):
        raise NotReversible("birth-death generator is not reversible with respect to the target")
    rates = np.sort(reversible_spectrum(g, mu).nonzero)
    return SstDistribution(tuple(float(r) for r in rates))


def sst_laplace(d: SstDistribution, alpha: float) -> float:
    """E[exp(-alpha T)] = prod_i rate_i / (rate_i + alpha)."""
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    r = np.asarray(d.rates)
    return float(np.prod(r / (r + alpha)))


def sst_mean(d: SstDistribution) -> float:
    return float(np.sum(1.0 / np.asarray(d.rates)))


def sst_variance(d: SstDistribution) -> float:
    return float(np.sum(1.0 / np.asarray(d.rates) ** 2))


def pure_birth_generator(rates) -> np.ndarray:
    """Chain 0 -> 1 -> ... -> k with the given successive rates; k is absorbing."""
    r = np.asarray(rates, dtype=float)
    k = r.size
    off = np.zeros((k + 1, k + 1))
    off[np.arange(k), np.arange(1, k + 1)] = r
    return from_off_diagonal(off)


def sst_survival(d: SstDistribution, t: float) -> float:
    """P(T > t), as the probability the auxiliary pure-birth chain is not yet absorbed.

    Going through the semigroup avoids partial fractions, so repeated rates need
    no special casing.
    """
    aux = pure_birth_generator(d.rates)
    return float(1.0 - transition_semigroup(aux, t)[0, -1])

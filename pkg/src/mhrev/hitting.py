"""Exact hitting-time functionals and capacities from dense linear solves."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .core import TOL_ORDER, as_distribution, as_generator, is_reversible
from .errors import (
    DimensionMismatch,
    NonPositiveLambda,
    NotIrreducible,
    OverlappingSets,
    SameState,
    SingularSystem,
    UnreachableTarget,
)
from .spectral import reversible_spectrum

RESIDUAL_TOL = 1e-10


def target_set(members: Iterable[int], n: int) -> np.ndarray:
    """Validate a non-empty subset of range(n); returns sorted unique indices."""
    idx = np.unique(np.asarray(list(members), dtype=int))
    if idx.size == 0:
        raise DimensionMismatch("target set is empty")
    if idx[0] < 0 or idx[-1] >= n:
        raise DimensionMismatch(f"target set {idx.tolist()} is not inside [0, {n})")
    return idx


def _complement(idx: np.ndarray, n: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[idx] = False
    return np.flatnonzero(mask)


def _reaches(rates: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Boolean mask of states with a positive-rate path into ``idx``."""
    adj = rates > 0
    np.fill_diagonal(adj, False)
    hit = np.zeros(rates.shape[0], dtype=bool)
    hit[idx] = True
    while True:
        new = hit | adj[:, hit].any(axis=1)
        if np.array_equal(new, hit):
            return hit
        hit = new


def _solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    scale = np.abs(a).sum(axis=1).max(initial=1.0) * np.abs(x).max(initial=0.0) + np.abs(b).max(initial=1.0)
    if not np.all(np.isfinite(x)) or np.abs(a @ x - b).max(initial=0.0) > RESIDUAL_TOL * scale:
        raise SingularSystem("linear system is numerically singular")
    return x


def _check_reachable(g, idx):
    reach = _reaches(g.rates, idx)
    if not reach.all():
        bad = int(np.flatnonzero(~reach)[0])
        raise UnreachableTarget(f"state {bad} cannot reach the target set")


def expected_hitting_times(g, members) -> np.ndarray:
    """E_x(tau_A) for every starting state x; zero on A."""
    g = as_generator(g)
    a = target_set(members, g.n)
    _check_reachable(g, a)
    rest = _complement(a, g.n)
    v = np.zeros(g.n)
    if rest.size:
        v[rest] = _solve(-g.rates[np.ix_(rest, rest)], np.ones(rest.size))
    return v


def hitting_laplace(g, members, lam: float) -> np.ndarray:
    """E_x(exp(-lam * tau_A)) for every x; one on A."""
    if not lam > 0:
        raise NonPositiveLambda(f"lambda must be positive, got {lam}")
    g = as_generator(g)
    a = target_set(members, g.n)
    _check_reachable(g, a)
    rest = _complement(a, g.n)
    u = np.ones(g.n)
    if rest.size:
        lhs = lam * np.eye(rest.size) - g.rates[np.ix_(rest, rest)]
        rhs = g.rates[np.ix_(rest, a)].sum(axis=1)
        u[rest] = _solve(lhs, rhs)
    return u


def mean_hitting_time(g, mu, members) -> float:
    """E_mu(tau_A)."""
    g = as_generator(g)
    mu = as_distribution(mu, g.n)
    return float(mu @ expected_hitting_times(g, members))


def mean_hitting_laplace(g, mu, members, lam: float) -> float:
    """E_mu(exp(-lam * tau_A))."""
    g = as_generator(g)
    mu = as_distribution(mu, g.n)
    return float(mu @ hitting_laplace(g, members, lam))


def hitting_time_matrix(g) -> np.ndarray:
    """H[x, y] = E_x(tau_y); requires an irreducible generator."""
    g = as_generator(g)
    if not g.irreducible:
        raise NotIrreducible("hitting times are infinite for a reducible generator")
    h = np.zeros((g.n, g.n))
    for y in range(g.n):
        h[:, y] = expected_hitting_times(g, [y])
    return h


def average_hitting_time(g, mu) -> float:
    """t_av = sum_{x,y} E_x(tau_y) mu(x) mu(y), by direct solves."""
    g = as_generator(g)
    mu = as_distribution(mu, g.n)
    if g.n == 1:
        return 0.0
    return float(mu @ hitting_time_matrix(g) @ mu)


def average_hitting_time_spectral(g, mu) -> float:
    """Sum of reciprocals of the non-zero eigenvalues of -G (reversible G only)."""
    g = as_generator(g)
    if not g.irreducible:
        raise NotIrreducible("t_av is infinite for a reducible generator")
    return float(np.sum(1.0 / reversible_spectrum(g, mu).nonzero))


def commute_time(g, x: int, y: int) -> float:
    """E_x(tau_y) + E_y(tau_x)."""
    g = as_generator(g)
    if x == y:
        raise SameState("commute time needs two distinct states")
    if not g.irreducible:
        raise NotIrreducible("commute time is infinite for a reducible generator")
    return float(expected_hitting_times(g, [y])[x] + expected_hitting_times(g, [x])[y])


def _disjoint_sets(g, a, b):
    a = target_set(a, g.n)
    b = target_set(b, g.n)
    if np.intersect1d(a, b).size:
        raise OverlappingSets(f"sets {a.tolist()} and {b.tolist()} intersect")
    return a, b


def equilibrium_potential(g, a, b) -> np.ndarray:
    """h = P(hit A before B): one on A, zero on B, G-harmonic elsewhere."""
    g = as_generator(g)
    a, b = _disjoint_sets(g, a, b)
    h = np.zeros(g.n)
    h[a] = 1.0
    rest = _complement(np.concatenate([a, b]), g.n)
    if rest.size:
        lhs = -g.rates[np.ix_(rest, rest)]
        rhs = g.rates[np.ix_(rest, a)].sum(axis=1)
        h[rest] = _solve(lhs, rhs)
    return h


def capacity_dirichlet(g, mu, a, b) -> float:
    """Dirichlet-form energy <-G h, h>_mu of the equilibrium potential."""
    g = as_generator(g)
    mu = as_distribution(mu, g.n)
    h = equilibrium_potential(g, a, b)
    return float(-np.sum(mu * h * (g.rates @ h)))


def capacity_probabilistic(g, mu, a, b) -> float:
    """sum_{x in A} mu(x) q(x) P_x(jump chain reaches B before returning to A).

    q(x) is the exit rate.  Hitting probabilities are solved on the embedded
    jump chain, so the return time counts only after the first jump.
    """
    g = as_generator(g)
    mu = as_distribution(mu, g.n)
    a, b = _disjoint_sets(g, a, b)
    q = g.exit_rates()
    off = g.off_diagonal()
    jump = np.divide(off, q[:, None], out=np.zeros_like(off), where=q[:, None] > 0)
    # escape[z] = P_z(reach B before A) for z outside A; 1 on B
    escape = np.zeros(g.n)
    escape[b] = 1.0
    rest = _complement(np.concatenate([a, b]), g.n)
    if rest.size:
        lhs = np.eye(rest.size) - jump[np.ix_(rest, rest)]
        rhs = jump[np.ix_(rest, b)].sum(axis=1)
        escape[rest] = _solve(lhs, rhs)
    first_step = jump[a] @ escape
    return float(np.sum(mu[a] * q[a] * first_step))


def capacity(g, mu, a, b) -> float:
    """Capacity between disjoint A and B, with the exit-rate-weighted convention.

    Reversible generators use the Dirichlet principle; others use the
    probabilistic formula.  Both agree whenever both apply.
    """
    g = as_generator(g)
    mu = as_distribution(mu, g.n, strict=True)
    if is_reversible(g, mu, TOL_ORDER):
        return capacity_dirichlet(g, mu, a, b)
    return capacity_probabilistic(g, mu, a, b)

"""Asymptotic variance through the Poisson equation, and Donsker-Varadhan rate functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .core import (
    TOL_ORDER,
    as_distribution,
    as_generator,
    as_observable,
    dirichlet_form,
    is_reversible,
)
from .errors import (
    DegenerateSupport,
    NotMeanZero,
    NotReversible,
    NotStationary,
    SingularSystem,
)

MEAN_ZERO_TOL = 1e-10
POISSON_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class PoissonSolution:
    g: np.ndarray
    residual: float


def solve_poisson(gen, mu, f) -> PoissonSolution:
    """Solve G g = f with the normalisation mu . g = 0.

    G has a one-dimensional kernel (the constants), so the system is bordered
    with the normalisation row and an extra unknown that must come out zero.
    """
    gen = as_generator(gen)
    mu = as_distribution(mu, gen.n, strict=True)
    f = as_observable(f, gen.n)
    fscale = max(1.0, float(np.abs(f).max()))
    if abs(float(mu @ f)) > MEAN_ZERO_TOL * fscale:
        raise NotMeanZero(f"mu(f) = {mu @ f!r} is not zero")
    if np.abs(mu @ gen.rates).max() > TOL_ORDER * gen.scale:
        raise NotStationary("target is not stationary for the generator")
    n = gen.n
    border = np.zeros((n + 1, n + 1))
    border[:n, :n] = gen.rates
    border[:n, n] = 1.0
    border[n, :n] = mu
    rhs = np.append(f, 0.0)
    try:
        sol = np.linalg.solve(border, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    g = sol[:n]
    residual = float(np.abs(gen.rates @ g - f).max())
    if not np.isfinite(residual) or residual > POISSON_RESIDUAL_TOL * gen.scale * max(1.0, float(np.abs(g).max())):
        raise SingularSystem(f"Poisson residual {residual:.3e} too large")
    return PoissonSolution(g, residual)


def asymptotic_variance(gen, mu, f) -> float:
    """CLT variance -2 <f, g>_mu of time averages of a mean-zero f, where G g = f."""
    f = as_observable(f)
    sol = solve_poisson(gen, mu, f)
    mu = np.asarray(mu, dtype=float)
    return float(-2.0 * np.sum(mu * f * sol.g))


def rate_function_reversible(m, mu, nu) -> float:
    """Closed-form rate function of a mu-reversible generator.

    Equal to the Dirichlet form of sqrt(nu / mu); zero entries of nu are allowed.
    """
    m = as_generator(m)
    mu = as_distribution(mu, m.n, strict=True)
    nu = as_distribution(nu, m.n)
    if not is_reversible(m, mu, TOL_ORDER):
        raise NotReversible("closed-form rate function needs a mu-reversible generator")
    return dirichlet_form(m, mu, np.sqrt(nu / mu)) + 0.0


def rate_function_point_mass(gen, x: int) -> float:
    """I(G, delta_x) = exit rate of x (the supremum is a boundary limit)."""
    return float(-as_generator(gen).rates[x, x])


def dv_objective(gen, nu, u) -> float:
    """-sum_x nu(x) (G u)(x) / u(x) for a positive vector u."""
    rates = np.asarray(as_generator(gen).rates)
    u = np.asarray(u, dtype=float)
    return float(-np.sum(np.asarray(nu) * (rates @ u) / u))


def _log_objective(rates, nu):
    off = rates.copy()
    np.fill_diagonal(off, 0.0)
    const = -float(nu @ np.diag(rates))
    weighted = nu[:, None] * off

    def edges(v_free):
        v = np.concatenate([[0.0], v_free])
        return weighted * np.exp(v[None, :] - v[:, None])

    # minimise the negated objective; in log coordinates it is convex
    def fun(v_free):
        return float(edges(v_free).sum()) - const

    def grad(v_free):
        e = edges(v_free)
        return (e.sum(axis=0) - e.sum(axis=1))[1:]

    def hess(v_free):
        e = edges(v_free)
        w = e + e.T
        lap = np.diag(w.sum(axis=1)) - w
        return lap[1:, 1:]

    return fun, grad, hess


def rate_function_variational(gen, nu, *, seed: int = 0, starts: int = 8) -> float:
    """sup_{u > 0} -sum_x nu(x) (G u)(x) / u(x) for a full-support nu.

    Parametrised as u = exp(v) with v(0) pinned to zero; Newton-type trust-region
    ascent from ``starts`` initial points (the first is u = 1).
    """
    gen = as_generator(gen)
    nu = as_distribution(nu, gen.n)
    if np.any(nu <= 0):
        raise DegenerateSupport("variational rate function needs full-support nu; use the closed form or the exit rate")
    if gen.n == 1:
        return 0.0
    fun, grad, hess = _log_objective(np.asarray(gen.rates), nu)
    rng = np.random.default_rng(seed)
    best = -fun(np.zeros(gen.n - 1))
    for k in range(starts):
        v0 = np.zeros(gen.n - 1) if k == 0 else rng.normal(scale=1.0, size=gen.n - 1)
        res = minimize(fun, v0, jac=grad, hess=hess, method="trust-exact", options={"gtol": 1e-12, "maxiter": 500})
        best = max(best, -float(res.fun))
    return best

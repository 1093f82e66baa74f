"""Seeded random instances and brute-force oracles used by the test and property suites.

Nothing here shares code paths with the routines it checks: the projection oracle
samples reversible generators directly, and the rate-function oracle is a grid
search polished by Nelder-Mead instead of the Newton-type solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import minimize

from .core import Generator, as_distribution, as_generator, from_off_diagonal
from .errors import DegenerateSupport, DimensionMismatch
from .kernels import MhPair, distance_to_reversible, l1_distance

Structure = Literal["dense", "birth-death", "mis"]


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    seed: int
    structure: Structure = "dense"
    rate_scale: float = 1.0
    # smallest rate as a fraction of rate_scale; the "hard" pool uses 1e-4
    floor: float = 0.1

    def __post_init__(self):
        if self.n < 2:
            raise DimensionMismatch("instances need at least two states")
        if self.structure not in ("dense", "birth-death", "mis"):
            raise ValueError(f"unknown structure {self.structure!r}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def random_irreducible_generator(spec: InstanceSpec) -> Generator:
    rng = spec.rng()
    n, hi = spec.n, spec.rate_scale
    lo = spec.floor * hi
    if spec.structure == "mis":
        p = random_target(n, rng)
        return from_off_diagonal(hi * np.tile(p, (n, 1)))
    off = rng.uniform(lo, hi, size=(n, n))
    if spec.structure == "birth-death":
        band = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) == 1
        off = np.where(band, off, 0.0)
    return from_off_diagonal(off)


def random_target(n: int, rng: np.random.Generator, floor: float = 0.02) -> np.ndarray:
    """Strictly positive distribution with every entry at least floor / (1 + n floor)."""
    w = rng.dirichlet(np.ones(n)) + floor
    return w / w.sum()


def random_mean_zero(mu, rng: np.random.Generator) -> np.ndarray:
    f = rng.normal(size=len(mu))
    return f - float(np.dot(mu, f))


def random_subset(n: int, rng: np.random.Generator, proper: bool = True) -> list[int]:
    size = rng.integers(1, n if proper else n + 1)
    return sorted(rng.choice(n, size=size, replace=False).tolist())


def random_disjoint_pair(n: int, rng: np.random.Generator) -> tuple[list[int], list[int]]:
    perm = rng.permutation(n)
    cut_a = rng.integers(1, n)
    cut_b = rng.integers(cut_a + 1, n + 1)
    return sorted(perm[:cut_a].tolist()), sorted(perm[cut_a:cut_b].tolist())


def random_state_pair(n: int, rng: np.random.Generator) -> tuple[int, int]:
    x, y = rng.choice(n, size=2, replace=False)
    return int(x), int(y)


def _from_flux(flux: np.ndarray, mu: np.ndarray) -> Generator:
    flux = 0.5 * (flux + flux.T)
    np.fill_diagonal(flux, 0.0)
    return from_off_diagonal(np.maximum(flux, 0.0) / mu[:, None])


def random_reversible_generator(mu, rng: np.random.Generator, scale: float = 1.0, density: float = 1.0) -> Generator:
    """N(x,y) = S(x,y) / mu(x) for a random symmetric S >= 0; ``density`` < 1 zeroes edges."""
    mu = as_distribution(mu, strict=True)
    n = mu.size
    s = rng.uniform(0.0, scale, size=(n, n))
    if density < 1.0:
        s *= rng.random((n, n)) < density
    s = np.triu(s, 1)
    return _from_flux(s + s.T, mu)


@dataclass(frozen=True)
class ProjectionResult:
    closed_form: float
    min_sampled: float
    samples: int
    verdict: bool
    uniqueness: bool
    side_conditions: bool


def _sample_near(flux_ref, rng, rel):
    noise = rng.normal(size=flux_ref.shape)
    noise = np.triu(noise, 1)
    noise = noise + noise.T
    level = rel * max(float(flux_ref.max()), 1e-12)
    return flux_ref + level * noise


def projection_oracle(q, mu, samples: int = 1000, seed: int = 0, eps: float = 1e-3) -> ProjectionResult:
    """Check that no sampled mu-reversible generator is closer to Q than M1 and M2.

    Samples mix global draws with draws concentrated around M1, M2 and their
    convex combinations, plus one-sided draws that stay below M1 (resp. above
    M2) to exercise the uniqueness clause.  Deterministic ``eps`` perturbations
    of single edges probe uniqueness directly.
    """
    if samples < 100:
        raise ValueError("projection oracle needs at least 100 samples")
    q = as_generator(q)
    mu = as_distribution(mu, q.n, strict=True)
    rng = np.random.default_rng(seed)
    pair = MhPair.build(q, mu)
    best = distance_to_reversible(q, mu)
    d1 = l1_distance(q, pair.m1, mu)
    d2 = l1_distance(q, pair.m2, mu)
    f1 = mu[:, None] * pair.m1.off_diagonal()
    f2 = mu[:, None] * pair.m2.off_diagonal()
    q_off = q.off_diagonal()
    scale = float(q_off.max()) if q.n > 1 else 1.0

    tol = 1e-12
    min_seen = np.inf
    side_ok = True
    for k in range(samples):
        kind = k % 5
        if kind == 0:
            n_gen = random_reversible_generator(mu, rng, scale=2.0 * scale * float(mu.max()), density=rng.uniform(0.3, 1.0))
        elif kind == 1:
            a = rng.uniform()
            n_gen = _from_flux(_sample_near(a * f1 + (1 - a) * f2, rng, 10.0 ** rng.uniform(-4, -1)), mu)
        elif kind == 2:
            n_gen = _from_flux(f1 * (1.0 - rng.uniform(0, 0.1) * rng.random(f1.shape)), mu)
        elif kind == 3:
            n_gen = _from_flux(f2 * (1.0 + rng.uniform(0, 0.1) * rng.random(f2.shape)), mu)
        else:
            ref = f1 if rng.random() < 0.5 else f2
            n_gen = _from_flux(_sample_near(ref, rng, 10.0 ** rng.uniform(-6, -2)), mu)
        d = l1_distance(q, n_gen, mu)
        min_seen = min(min_seen, d)
        n_off = n_gen.off_diagonal()
        if np.all(n_off <= q_off) and np.abs(n_off - pair.m1.off_diagonal()).max() > 1e-9:
            side_ok &= d > d1 + tol
        if np.all(n_off >= q_off) and np.abs(n_off - pair.m2.off_diagonal()).max() > 1e-9:
            side_ok &= d > d2 + tol

    unique_ok = True
    iu, ju = np.triu_indices(q.n, 1)
    for x, y in zip(iu, ju):
        if f1[x, y] > 0:
            down = f1.copy()
            down[x, y] = down[y, x] = f1[x, y] * (1.0 - eps)
            unique_ok &= l1_distance(q, _from_flux(down, mu), mu) > d1 + tol
        up = f2.copy()
        up[x, y] = up[y, x] = f2[x, y] * (1.0 + eps) if f2[x, y] > 0 else eps * scale * float(mu.min())
        unique_ok &= l1_distance(q, _from_flux(up, mu), mu) > d2 + tol

    verdict = bool(min_seen >= best - tol)
    return ProjectionResult(best, float(min_seen), samples, verdict, bool(unique_ok), bool(side_ok))


def _grid_axis(points: int, span: float) -> np.ndarray:
    return np.linspace(-span, span, points)


def variational_ldp_oracle(g, nu, points: int = 9, span: float = 6.0) -> float:
    """Grid search of the rate-function objective over log u in [-span, span]^(n-1),
    polished with Nelder-Mead from the best grid node.

    Every value it returns is attained at some u > 0, so it is a lower bound for
    the supremum.
    """
    g = as_generator(g)
    nu = as_distribution(nu, g.n)
    if np.any(nu <= 0):
        raise DegenerateSupport("oracle needs full-support nu")
    if g.n > 6:
        raise DimensionMismatch("grid oracle is limited to n <= 6")
    n = g.n
    if n == 1:
        return 0.0
    rates = np.asarray(g.rates)

    def objective_many(v_free):
        v = np.concatenate([np.zeros((v_free.shape[0], 1)), v_free], axis=1)
        u = np.exp(v)
        return -np.sum(nu[None, :] * (u @ rates.T) / u, axis=1)

    axes = np.meshgrid(*[_grid_axis(points, span)] * (n - 1), indexing="ij")
    grid = np.stack([a.ravel() for a in axes], axis=1)
    vals = objective_many(grid)
    start = grid[int(np.argmax(vals))]
    best = float(vals.max())

    def neg(vf):
        return -float(objective_many(vf[None, :])[0])

    x = start
    for _ in range(4):
        res = minimize(neg, x, method="Nelder-Mead", options={"xatol": 1e-11, "fatol": 1e-14, "maxiter": 20000, "maxfev": 40000})
        x = res.x
        best = max(best, -float(res.fun))
    return best

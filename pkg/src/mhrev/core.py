"""Finite-state continuous-time generators and the operations every other module builds on.

A generator is a conservative rate matrix: non-negative off-diagonal entries and
rows summing to zero.  Distributions and observables are plain 1-d numpy arrays,
validated at the API boundary by :func:`as_distribution` and :func:`as_observable`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyMatrix,
    InvalidDistribution,
    MarkovError,
    NegativeOffDiagonal,
    NotIrreducible,
    RowSumViolation,
    ZeroTargetMass,
)

TOL_IDENTITY = 1e-12
TOL_ORDER = 1e-9
ROW_SUM_TOL = 1e-9
DIST_SUM_TOL = 1e-9


def _off_diagonal(rates: np.ndarray) -> np.ndarray:
    off = np.array(rates, dtype=float, copy=True)
    np.fill_diagonal(off, 0.0)
    return off


def _reach_all(adj: np.ndarray) -> bool:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[0] = True
    while True:
        new = seen | adj[seen].any(axis=0)
        if new.all():
            return True
        if np.array_equal(new, seen):
            return False
        seen = new


def _is_strongly_connected(rates: np.ndarray) -> bool:
    if rates.shape[0] <= 1:
        return True
    adj = _off_diagonal(rates) > 0
    return _reach_all(adj) and _reach_all(adj.T)


@dataclass(frozen=True, eq=False)
class Generator:
    """Conservative rate matrix of a continuous-time Markov chain.

    Construct through :func:`validate_generator` (checked) or
    :func:`from_off_diagonal` (diagonal filled in exactly).  The stored matrix
    is read-only.
    """

    rates: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        rates = np.array(self.rates, dtype=float, copy=True)
        rates.setflags(write=False)
        object.__setattr__(self, "rates", rates)

    @cached_property
    def irreducible(self) -> bool:
        """Strong connectivity of the positive-rate digraph."""
        return _is_strongly_connected(self.rates)

    @property
    def n(self) -> int:
        return self.rates.shape[0]

    @property
    def scale(self) -> float:
        """max(1, largest off-diagonal rate); the unit for every tolerance."""
        if self.n <= 1:
            return 1.0
        return max(1.0, float(_off_diagonal(self.rates).max()))

    def off_diagonal(self) -> np.ndarray:
        return _off_diagonal(self.rates)

    def exit_rates(self) -> np.ndarray:
        return -np.diag(self.rates).copy()

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.rates, dtype=dtype)

    def __add__(self, other):
        return from_off_diagonal(self.off_diagonal() + as_generator(other).off_diagonal())

    def __sub__(self, other):
        return validate_generator(self.rates - as_generator(other).rates)

    def __mul__(self, c: float):
        c = float(c)
        if c < 0:
            raise NegativeOffDiagonal("cannot scale a generator by a negative number")
        return from_off_diagonal(c * self.off_diagonal())

    __rmul__ = __mul__

    def allclose(self, other, atol: float = TOL_IDENTITY) -> bool:
        other = as_generator(other)
        return self.n == other.n and bool(np.max(np.abs(self.rates - other.rates), initial=0.0) <= atol * max(self.scale, other.scale))

    def __repr__(self):
        return f"Generator(n={self.n}, irreducible={self.irreducible})"


def validate_generator(matrix, labels: Sequence[str] | None = None) -> Generator:
    """Check the generator invariants and wrap ``matrix``.

    Reducible matrices are accepted; inspect ``Generator.irreducible``.

    Raises
    ------
    EmptyMatrix, NegativeOffDiagonal, RowSumViolation
    """
    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        raise EmptyMatrix("generator has no states")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"generator must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise MarkovError("generator has non-finite entries")
    off = _off_diagonal(a)
    bad = np.argwhere(off < 0)
    if bad.size:
        x, y = bad[0]
        raise NegativeOffDiagonal(f"rate ({x},{y}) = {a[x, y]} is negative")
    scale = max(1.0, float(off.max()))
    sums = a.sum(axis=1)
    bad_rows = np.flatnonzero(np.abs(sums) > ROW_SUM_TOL * scale)
    if bad_rows.size:
        x = int(bad_rows[0])
        raise RowSumViolation(f"row {x} sums to {float(sums[x])!r}, not 0")
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != a.shape[0]:
            raise DimensionMismatch("label count does not match state count")
    return Generator(a, labels)


def from_off_diagonal(off, labels=None) -> Generator:
    """Build a generator from off-diagonal rates; the diagonal is set to minus the row sums."""
    off = _off_diagonal(np.asarray(off, dtype=float))
    if np.any(off < 0):
        x, y = np.argwhere(off < 0)[0]
        raise NegativeOffDiagonal(f"rate ({x},{y}) is negative")
    np.fill_diagonal(off, -off.sum(axis=1))
    return Generator(off, None if labels is None else tuple(labels))


def as_generator(g) -> Generator:
    if isinstance(g, Generator):
        return g
    return validate_generator(g)


def as_distribution(weights, n: int | None = None, *, strict: bool = False) -> np.ndarray:
    """Validate a probability vector; ``strict`` additionally forbids zero entries."""
    w = np.asarray(weights, dtype=float).reshape(-1)
    if n is not None and w.shape[0] != n:
        raise DimensionMismatch(f"distribution has length {w.shape[0]}, expected {n}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidDistribution("distribution entries must be finite and non-negative")
    if abs(w.sum() - 1.0) > DIST_SUM_TOL:
        raise InvalidDistribution(f"distribution sums to {w.sum()!r}")
    if strict and np.any(w <= 0):
        raise ZeroTargetMass(f"target has zero mass at state {int(np.flatnonzero(w <= 0)[0])}")
    return w


def as_observable(values, n: int | None = None) -> np.ndarray:
    f = np.asarray(values, dtype=float).reshape(-1)
    if n is not None and f.shape[0] != n:
        raise DimensionMismatch(f"function has length {f.shape[0]}, expected {n}")
    if not np.all(np.isfinite(f)):
        raise InvalidDistribution("function values must be finite")
    return f


def _gth_stationary(off: np.ndarray) -> np.ndarray:
    # Grassmann-Taksar-Heyman state reduction: subtraction-free, hence accurate
    a = off.copy()
    n = a.shape[0]
    for k in range(n - 1, 0, -1):
        s = a[k, :k].sum()
        if s <= 0:
            raise NotIrreducible("state reduction met a state with no way back")
        a[:k, k] /= s
        a[:k, :k] += np.outer(a[:k, k], a[k, :k])
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ a[:k, k]
    return pi / pi.sum()


def stationary_distribution(g) -> np.ndarray:
    """Solve pi G = 0, pi . 1 = 1 for an irreducible generator.

    >>> stationary_distribution([[-2.0, 2.0], [1.0, -1.0]])
    array([0.33333333, 0.66666667])
    """
    g = as_generator(g)
    if g.n == 1:
        return np.ones(1)
    if not g.irreducible:
        raise NotIrreducible("stationary distribution is not unique for a reducible generator")
    pi = _gth_stationary(g.off_diagonal())
    if np.any(pi <= 0):
        raise NotIrreducible("stationary solution is not strictly positive")
    return pi


def time_reversal(g, mu) -> Generator:
    """mu-time-reversal: off-diagonal mu(y) G(y,x) / mu(x), diagonal re-closed."""
    g = as_generator(g)
    mu = as_distribution(mu, g.n, strict=True)
    rev = (g.off_diagonal().T * mu[None, :]) / mu[:, None]
    return from_off_diagonal(rev, g.labels)


def additive_reversiblization(g, mu) -> Generator:
    """(G + G*) / 2 with G* the mu-time-reversal."""
    g = as_generator(g)
    star = time_reversal(g, mu)
    return from_off_diagonal(0.5 * (g.off_diagonal() + star.off_diagonal()), g.labels)


def is_reversible(g, mu, tol: float = TOL_IDENTITY) -> bool:
    """Detailed balance mu(x)G(x,y) = mu(y)G(y,x) up to ``tol * scale``."""
    g = as_generator(g)
    mu = as_distribution(mu, g.n, strict=True)
    flux = mu[:, None] * g.off_diagonal()
    return bool(np.max(np.abs(flux - flux.T), initial=0.0) <= tol * g.scale)


def peskun_dominates(g1, g2, tol: float = TOL_ORDER) -> bool:
    """True iff G1(x,y) >= G2(x,y) - tol for every x != y."""
    g1, g2 = as_generator(g1), as_generator(g2)
    if g1.n != g2.n:
        raise DimensionMismatch(f"{g1.n} vs {g2.n} states")
    return bool(np.all(g1.off_diagonal() >= g2.off_diagonal() - tol))


def inner_product(f, g, mu) -> float:
    f = as_observable(f)
    g = as_observable(g, f.shape[0])
    mu = as_distribution(mu, f.shape[0])
    return float(np.sum(f * g * mu))


def dirichlet_form(g, mu, f) -> float:
    """<-G f, f>_mu."""
    g = as_generator(g)
    f = as_observable(f, g.n)
    mu = as_distribution(mu, g.n)
    return float(-np.sum(mu * f * (g.rates @ f)))

"""The two Metropolis-Hastings reversiblizations and the weighted l1 geometry around them.

For a proposal generator Q and a strictly positive target mu, both kernels compare
the forward rate Q(x,y) with the reversed rate mu(y) Q(y,x) / mu(x):

* ``build_m1`` keeps the smaller of the two (the classical Metropolis-Hastings move),
* ``build_m2`` keeps the larger.

Every convex combination of the pair is a closest mu-reversible generator to Q in
the metric ``l1_distance``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Generator,
    as_distribution,
    as_generator,
    from_off_diagonal,
    time_reversal,
)
from .errors import AlphaOutOfRange, DimensionMismatch


def _forward_and_reversed(q, mu):
    q = as_generator(q)
    mu = as_distribution(mu, q.n, strict=True)
    return q, mu, q.off_diagonal(), time_reversal(q, mu).off_diagonal()


def build_m1(q, mu) -> Generator:
    """First MH generator: off-diagonal min{Q(x,y), mu(y)Q(y,x)/mu(x)}.

    The result may be reducible (an edge with no reverse edge is removed);
    check ``.irreducible`` on the returned generator.
    """
    q, _, fwd, rev = _forward_and_reversed(q, mu)
    return from_off_diagonal(np.minimum(fwd, rev), q.labels)


def build_m2(q, mu) -> Generator:
    """Second MH generator: off-diagonal max{Q(x,y), mu(y)Q(y,x)/mu(x)}."""
    q, _, fwd, rev = _forward_and_reversed(q, mu)
    return from_off_diagonal(np.maximum(fwd, rev), q.labels)


@dataclass(frozen=True, eq=False)
class MhPair:
    m1: Generator
    m2: Generator
    target: np.ndarray
    source: Generator

    @classmethod
    def build(cls, q, mu) -> "MhPair":
        q = as_generator(q)
        mu = as_distribution(mu, q.n, strict=True)
        return cls(build_m1(q, mu), build_m2(q, mu), mu, q)

    @property
    def residual(self) -> Generator:
        """M2 - M1, itself a mu-reversible generator."""
        return from_off_diagonal(self.m2.off_diagonal() - self.m1.off_diagonal(), self.source.labels)


def convex_combination(pair: MhPair, alpha: float) -> Generator:
    """alpha * M1 + (1 - alpha) * M2."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRange(f"alpha={alpha} is outside [0, 1]")
    if alpha == 1.0:
        return pair.m1
    if alpha == 0.0:
        return pair.m2
    off = alpha * pair.m1.off_diagonal() + (1.0 - alpha) * pair.m2.off_diagonal()
    return from_off_diagonal(off, pair.source.labels)


def l1_distance(g1, g2, mu) -> float:
    """sum_x sum_{y != x} mu(x) |G1(x,y) - G2(x,y)|."""
    g1, g2 = as_generator(g1), as_generator(g2)
    if g1.n != g2.n:
        raise DimensionMismatch(f"{g1.n} vs {g2.n} states")
    mu = as_distribution(mu, g1.n)
    return float(np.sum(mu[:, None] * np.abs(g1.off_diagonal() - g2.off_diagonal())))


def distance_to_reversible(q, mu) -> float:
    """Distance from Q to the set of mu-reversible generators.

    Closed form: total positive part of the net probability flux,
    sum over ordered pairs of max(0, mu(x)Q(x,y) - mu(y)Q(y,x)).
    """
    q = as_generator(q)
    mu = as_distribution(mu, q.n, strict=True)
    flux = mu[:, None] * q.off_diagonal()
    return float(np.sum(np.maximum(flux - flux.T, 0.0)))

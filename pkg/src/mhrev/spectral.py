"""Spectra of reversible generators, spectral gap and relaxation time."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    TOL_ORDER,
    additive_reversiblization,
    as_distribution,
    as_generator,
    is_reversible,
)
from .errors import NotReversible, ZeroGap


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Eigen-system of -G for a mu-reversible G.

    ``eigenvalues`` are ascending; column ``i`` of ``eigenvectors`` pairs with
    ``eigenvalues[i]`` and the columns are orthonormal in l2(mu).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    target: np.ndarray

    @property
    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[1:]


def reversible_spectrum(g, mu) -> SpectrumResult:
    """Diagonalise a mu-reversible generator through the similarity D^(1/2) (-G) D^(-1/2).

    Raises NotReversible if detailed balance fails at 1e-9 relative to the rate scale.
    """
    g = as_generator(g)
    mu = as_distribution(mu, g.n, strict=True)
    if not is_reversible(g, mu, TOL_ORDER):
        raise NotReversible("generator is not reversible with respect to the target")
    root = np.sqrt(mu)
    sym = -(root[:, None] * g.rates) / root[None, :]
    sym = 0.5 * (sym + sym.T)
    vals, vecs = np.linalg.eigh(sym)
    vecs = vecs / root[:, None]
    return SpectrumResult(vals, vecs, mu)


def spectral_gap(g, mu) -> float:
    """Second smallest eigenvalue of -(G + G*)/2 in l2(mu).

    The additive reversiblization has the same Dirichlet form as G, so this is the
    variational gap for any input; a reversible G is used as is.  Zero for a
    reducible chain, ``inf`` for a single state.
    """
    g = as_generator(g)
    mu = as_distribution(mu, g.n, strict=True)
    if g.n == 1:
        return math.inf
    sym = g if is_reversible(g, mu, TOL_ORDER) else additive_reversiblization(g, mu)
    if not sym.irreducible:
        return 0.0
    return max(float(reversible_spectrum(sym, mu).eigenvalues[1]), 0.0)


def relaxation_time(g, mu) -> float:
    gap = spectral_gap(g, mu)
    if gap <= 0.0:
        raise ZeroGap("spectral gap is zero; relaxation time is infinite")
    return 1.0 / gap


def l2_decay(g, mu, t) -> np.ndarray:
    """Worst-case l2(mu) distance to equilibrium after time t: exp(-gap * t)."""
    return np.exp(-spectral_gap(g, mu) * np.asarray(t, dtype=float))

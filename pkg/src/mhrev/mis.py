"""Closed-form eigen-system of both MH kernels for Metropolised independent sampling.

The proposal jumps at rate one to a fresh draw from ``p`` regardless of the
current state, i.e. Q = P - I with every row of P equal to p.  Once states are
relabelled so that the importance weights mu(x) / p(x) decrease, both kernels are
triangular-plus-rank-one and their spectra are explicit.  Everything returned here
is in the caller's ORIGINAL labels; ``order`` records the relabelling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Generator, as_distribution, from_off_diagonal
from .errors import DimensionMismatch, ValidationFailure, ZeroMass
from .kernels import build_m1, build_m2
from .spectral import reversible_spectrum

CROSS_CHECK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MisInstance:
    proposal: np.ndarray
    target: np.ndarray
    weights: np.ndarray
    order: np.ndarray  # sorted position k holds original state order[k]

    @property
    def m(self) -> int:
        return self.proposal.shape[0]

    @property
    def is_sorted(self) -> bool:
        return bool(np.array_equal(self.order, np.arange(self.m)))

    def proposal_generator(self) -> Generator:
        return from_off_diagonal(np.tile(self.proposal, (self.m, 1)))


def build_mis(p, mu) -> MisInstance:
    p = np.asarray(p, dtype=float).reshape(-1)
    mu = np.asarray(mu, dtype=float).reshape(-1)
    if p.shape != mu.shape:
        raise DimensionMismatch(f"proposal has {p.size} states, target has {mu.size}")
    if p.size < 2:
        raise DimensionMismatch("need at least two states")
    if np.any(p <= 0) or np.any(mu <= 0):
        raise ZeroMass("proposal and target must be strictly positive")
    p = as_distribution(p)
    mu = as_distribution(mu)
    w = mu / p
    order = np.argsort(-w, kind="stable")
    return MisInstance(p, mu, w, order)


@dataclass(frozen=True, eq=False)
class MisSpectrum:
    """Non-zero eigen-pairs of M1 and M2 (as generators, so eigenvalues are negative).

    ``gamma[x]`` and ``beta[i]`` are indexed by sorted position; ``gamma`` covers
    positions 0..m-2 and ``beta`` positions 1..m-1.  Eigenvector columns are in
    original labels and pair with the eigenvalue at the same index.
    """

    gamma: np.ndarray
    beta: np.ndarray
    m1_eigenvalues: np.ndarray
    m2_eigenvalues: np.ndarray
    m1_eigenvectors: np.ndarray
    m2_eigenvectors: np.ndarray
    order: np.ndarray

    def l2_rates(self) -> tuple[float, float]:
        """Exponential l2 decay rates (M1, M2): 1 - gamma_1 and 1 - max beta."""
        return 1.0 - float(self.gamma[0]), 1.0 - float(self.beta.max())


def mis_spectrum(inst: MisInstance) -> MisSpectrum:
    m, order = inst.m, inst.order
    p = inst.proposal[order]
    mu = inst.target[order]
    w = inst.weights[order]
    # mu(j) / w_j == p_j, so each sum is over p_j - mu(j) / w_x
    gamma = np.array([np.sum(p[x:] - mu[x:] / w[x]) for x in range(m - 1)])
    beta = np.array([np.sum(p[: i + 1] - mu[: i + 1] / w[i]) for i in range(1, m)])

    v = np.zeros((m, m - 1))
    for col, i in enumerate(range(1, m)):
        v[:i, col] = -mu[i]
        v[i, col] = mu[:i].sum()
    wv = np.zeros((m, m - 1))
    for x in range(m - 1):
        wv[x, x] = mu[x + 1 :].sum()
        wv[x + 1 :, x] = -mu[x]

    def unsort(vecs):
        out = np.empty_like(vecs)
        out[order] = vecs
        return out

    return MisSpectrum(
        gamma=gamma,
        beta=beta,
        m1_eigenvalues=gamma - 1.0,
        m2_eigenvalues=beta - 1.0,
        m1_eigenvectors=unsort(wv),
        m2_eigenvectors=unsort(v),
        order=order.copy(),
    )


@dataclass(frozen=True)
class MisValidation:
    m1_eigenvalue_error: float
    m2_eigenvalue_error: float
    m1_residual: float
    m2_residual: float
    passed: bool


def _eigen_check(gen: Generator, mu, closed_vals, closed_vecs, label: str, tol: float):
    numeric = np.sort(-reversible_spectrum(gen, mu).eigenvalues)
    closed = np.sort(np.append(closed_vals, 0.0))
    diffs = np.abs(numeric - closed)
    if diffs.max() > tol:
        raise ValidationFailure(f"{label} eigenvalue mismatch {diffs.max():.3e}", int(np.argmax(diffs)))
    res = np.abs(gen.rates @ closed_vecs - closed_vecs * closed_vals[None, :]).max(axis=0)
    if res.max() > tol:
        raise ValidationFailure(f"{label} eigenvector residual {res.max():.3e}", int(np.argmax(res)))
    return float(diffs.max()), float(res.max())


def mis_cross_validate(inst: MisInstance, tol: float = CROSS_CHECK_TOL) -> MisValidation:
    """Compare the closed forms with a numeric eigensolver on the assembled kernels."""
    if inst.m > 200:
        raise DimensionMismatch("cross-validation is limited to m <= 200")
    spec = mis_spectrum(inst)
    q = inst.proposal_generator()
    m1 = build_m1(q, inst.target)
    m2 = build_m2(q, inst.target)
    e1, r1 = _eigen_check(m1, inst.target, spec.m1_eigenvalues, spec.m1_eigenvectors, "M1", tol)
    e2, r2 = _eigen_check(m2, inst.target, spec.m2_eigenvalues, spec.m2_eigenvectors, "M2", tol)
    return MisValidation(e1, e2, r1, r2, True)

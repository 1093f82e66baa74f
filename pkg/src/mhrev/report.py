"""Comparison reports: every convergence functional for Q, Q*, Q-bar, M1 and M2 on one
instance, plus ordering verdicts for each comparison clause.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import (
    TOL_IDENTITY,
    TOL_ORDER,
    Generator,
    additive_reversiblization,
    as_distribution,
    as_generator,
    is_reversible,
    stationary_distribution,
    time_reversal,
)
from .errors import MarkovError, NotIrreducible
from .hitting import (
    average_hitting_time,
    capacity,
    commute_time,
    mean_hitting_laplace,
    mean_hitting_time,
)
from .kernels import build_m1, build_m2
from .mixing import BISECTION_WIDTH, tv_mixing_time
from .spectral import relaxation_time, spectral_gap
from .variance import (
    asymptotic_variance,
    rate_function_point_mass,
    rate_function_reversible,
    rate_function_variational,
)

log = logging.getLogger(__name__)

TOL_VARIATIONAL = 1e-6
GENERATORS = ("Q", "Q*", "Qbar", "M1", "M2")

HOLDS = "holds"
AT_TOL = "holds-at-tolerance"
VIOLATED = "violated"
NA = "not-applicable"
REPORTED = "reported"


@dataclass
class Battery:
    """Test functions, distributions and sets on which functionals are evaluated."""

    fs: list[np.ndarray] = field(default_factory=list)
    nus: list[np.ndarray] = field(default_factory=list)
    set_pairs: list[tuple[list[int], list[int]]] = field(default_factory=list)
    hit_sets: list[list[int]] = field(default_factory=list)
    state_pairs: list[tuple[int, int]] = field(default_factory=list)
    lambdas: list[float] = field(default_factory=lambda: [0.1, 1.0, 10.0])

    @classmethod
    def default(cls, n: int, mu: np.ndarray) -> "Battery":
        k = min(n, 8)
        eye = np.eye(n)
        fs = [eye[x] - mu[x] for x in range(k)] if n > 1 else []
        nus = [np.full(n, 1.0 / n)] + [eye[x] for x in range(k)]
        state_pairs = [(x, y) for x in range(k) for y in range(x + 1, k)]
        set_pairs = [([x], [y]) for x, y in state_pairs]
        hit_sets = [[x] for x in range(k)] if n > 1 else []
        return cls(fs, nus, set_pairs, hit_sets, state_pairs)


def _safe(fn: Callable[[], float]):
    try:
        value = fn()
    except (MarkovError, np.linalg.LinAlgError) as exc:
        log.debug("functional unavailable: %s", exc)
        return None
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return None
    return float(value)


def _rate_function(gen: Generator, mu, nu, seed: int):
    if is_reversible(gen, mu, TOL_ORDER):
        return _safe(lambda: rate_function_reversible(gen, mu, nu))
    support = np.flatnonzero(nu > 0)
    if support.size == 1:
        return _safe(lambda: rate_function_point_mass(gen, int(support[0])))
    return _safe(lambda: rate_function_variational(gen, nu, seed=seed))


def evaluate_functionals(gen: Generator, mu: np.ndarray, battery: Battery, eps: float, seed: int = 0) -> dict:
    """All functionals of one generator; entries that are undefined come back as None.

    ``mu`` is the reference distribution for averages and inner products; the
    mixing time is measured against the generator's own stationary law.
    """
    stationary = mu if is_reversible(gen, mu, TOL_ORDER) else _safe_stationary(gen)
    mu_stationary = bool(np.abs(mu @ gen.rates).max() <= TOL_ORDER * gen.scale)
    out = {
        "reversible": is_reversible(gen, mu, TOL_ORDER),
        "irreducible": gen.irreducible,
        "spectral_gap": _safe(lambda: spectral_gap(gen, mu)),
        "relaxation_time": _safe(lambda: relaxation_time(gen, mu)),
        "average_hitting_time": _safe(lambda: average_hitting_time(gen, mu)),
        "t_mix": None if stationary is None else _safe(lambda: tv_mixing_time(gen, stationary, eps)),
        "asymptotic_variance": [
            _safe(lambda f=f: asymptotic_variance(gen, mu, f)) if mu_stationary else None for f in battery.fs
        ],
        "rate_function": [_rate_function(gen, mu, nu, seed) for nu in battery.nus],
        "capacity": [_safe(lambda a=a, b=b: capacity(gen, mu, a, b)) for a, b in battery.set_pairs],
        "commute_time": [_safe(lambda x=x, y=y: commute_time(gen, x, y)) for x, y in battery.state_pairs],
        "mean_hitting_time": [_safe(lambda a=a: mean_hitting_time(gen, mu, a)) for a in battery.hit_sets],
        "hitting_laplace": [
            [_safe(lambda a=a, lam=lam: mean_hitting_laplace(gen, mu, a, lam)) for lam in battery.lambdas]
            for a in battery.hit_sets
        ],
    }
    return out


def _safe_stationary(gen):
    try:
        return stationary_distribution(gen)
    except NotIrreducible:
        return None


def chain_verdict(values: Sequence, tol: float) -> tuple[str, float | None]:
    """Verdict for values[0] <= values[1] <= ...; tolerance is relative to max(1, |value|)."""
    if any(v is None for v in values):
        return NA, None
    worst = 0.0
    for a, b in zip(values, values[1:]):
        excess = (a - b) / max(1.0, abs(a), abs(b))
        worst = max(worst, excess)
    if worst <= 0.0:
        return HOLDS, worst
    if worst <= tol:
        return AT_TOL, worst
    return VIOLATED, worst


def _clause(name, detail, values, tol, labels):
    verdict, excess = chain_verdict(values, tol)
    return {"clause": name, "detail": detail, "chain": labels, "values": list(values), "verdict": verdict, "excess": excess}


def _min_or_none(*xs):
    return None if any(x is None for x in xs) else min(xs)


def _max_or_none(*xs):
    return None if any(x is None for x in xs) else max(xs)


def compare(
    q,
    mu=None,
    battery: Battery | None = None,
    eps: float = 0.25,
    tol_order: float = TOL_ORDER,
    tol_identity: float = TOL_IDENTITY,
    seed: int = 0,
) -> dict:
    """Evaluate every functional for the five generators and record ordering verdicts.

    Without ``mu`` the stationary law of Q is used.  The three-way comparisons
    involving Q and Q-bar apply only when mu is stationary for Q; otherwise
    they are marked not-applicable.
    """
    q = as_generator(q)
    source = "explicit"
    if mu is None:
        mu = stationary_distribution(q)
        source = "stationary"
    mu = as_distribution(mu, q.n, strict=True)
    stationary_target = bool(np.abs(mu @ q.rates).max() <= tol_order * q.scale)
    battery = battery or Battery.default(q.n, mu)
    gens = {
        "Q": q,
        "Q*": time_reversal(q, mu),
        "Qbar": additive_reversiblization(q, mu),
        "M1": build_m1(q, mu),
        "M2": build_m2(q, mu),
    }
    f = {name: evaluate_functionals(g, mu, battery, eps, seed) for name, g in gens.items()}

    clauses = []

    def pairwise(name, detail, key, pick, increasing_in_speed):
        v1, v2 = pick(f["M1"][key]), pick(f["M2"][key])
        vals, labels = ((v1, v2), ["M1", "M2"]) if increasing_in_speed else ((v2, v1), ["M2", "M1"])
        clauses.append(_clause("m1-vs-m2/" + name, detail, vals, tol_order, labels))

    def sandwich(name, detail, key, pick, increasing_in_speed, tol=tol_order):
        m1, qb, m2, qq = (pick(f[k][key]) for k in ("M1", "Qbar", "M2", "Q"))
        if not stationary_target:
            clauses.append({"clause": "sandwich/" + name, "detail": detail, "verdict": NA, "values": None, "excess": None,
                            "chain": None})
            return
        if increasing_in_speed:
            vals, labels = (m1, qb, _min_or_none(qq, m2)), ["M1", "Qbar", "min(Q,M2)"]
        else:
            vals, labels = (_max_or_none(qq, m2), qb, m1), ["max(Q,M2)", "Qbar", "M1"]
        clauses.append(_clause("sandwich/" + name, detail, vals, tol, labels))

    both = (pairwise, sandwich)
    for fn in both:
        fn("spectral-gap", None, "spectral_gap", lambda v: v, True)
        fn("average-hitting-time", None, "average_hitting_time", lambda v: v, False)
    for i, a in enumerate(battery.hit_sets):
        for j, lam in enumerate(battery.lambdas):
            for fn in both:
                fn("hitting-laplace", {"A": a, "lambda": lam}, "hitting_laplace", lambda v, i=i, j=j: v[i][j], True)
        for fn in both:
            fn("mean-hitting-time", {"A": a}, "mean_hitting_time", lambda v, i=i: v[i], False)
    for i, fv in enumerate(battery.fs):
        for fn in both:
            fn("asymptotic-variance", {"f": fv.tolist()}, "asymptotic_variance", lambda v, i=i: v[i], False)
    for i, nu in enumerate(battery.nus):
        pairwise("rate-function", {"nu": nu.tolist()}, "rate_function", lambda v, i=i: v[i], True)
        sandwich("rate-function", {"nu": nu.tolist()}, "rate_function", lambda v, i=i: v[i], True, tol=TOL_VARIATIONAL)
    for i, (a, b) in enumerate(battery.set_pairs):
        for fn in both:
            fn("capacity", {"A": a, "B": b}, "capacity", lambda v, i=i: v[i], True)
    for i, (x, y) in enumerate(battery.state_pairs):
        for fn in both:
            fn("commute-time", {"x": x, "y": y}, "commute_time", lambda v, i=i: v[i], False)

    t1, t2, tb = f["M1"]["t_mix"], f["M2"]["t_mix"], f["Qbar"]["t_mix"]
    mixing = {
        "clause": "mixing-time",
        "verdict": REPORTED,
        "epsilon": eps,
        "t_mix": {k: f[k]["t_mix"] for k in GENERATORS},
        "ratio_M2_over_M1": None if not t1 or t2 is None else t2 / t1,
        # t_mix is resolved only to the bisection width
        "qbar_between": None if None in (t1, t2, tb) else bool(
            min(t1, t2) - BISECTION_WIDTH <= tb <= max(t1, t2) + BISECTION_WIDTH
        ),
    }

    violated = [c for c in clauses if c["verdict"] == VIOLATED]
    return {
        "n": q.n,
        "states": list(q.labels) if q.labels else None,
        "target": mu.tolist(),
        "target_source": source,
        "target_is_stationary": stationary_target,
        "tolerances": {"identity": tol_identity, "order": tol_order, "variational": TOL_VARIATIONAL},
        "battery": {
            "f": [v.tolist() for v in battery.fs],
            "nu": [v.tolist() for v in battery.nus],
            "set_pairs": battery.set_pairs,
            "hit_sets": battery.hit_sets,
            "state_pairs": battery.state_pairs,
            "lambdas": battery.lambdas,
        },
        "generators": {k: gens[k].rates.tolist() for k in GENERATORS},
        "functionals": f,
        "verdicts": clauses,
        "mixing": mixing,
        "violated": len(violated),
        "ok": not violated,
    }


def report_rows(report: dict) -> list[dict]:
    """Flatten a report to one row per (generator, functional, index) for CSV output."""
    rows = []
    for gen, funcs in report["functionals"].items():
        for key, value in funcs.items():
            if isinstance(value, list):
                for i, v in enumerate(value):
                    if isinstance(v, list):
                        for j, w in enumerate(v):
                            rows.append({"generator": gen, "functional": key, "index": f"{i}:{j}", "value": w})
                    else:
                        rows.append({"generator": gen, "functional": key, "index": str(i), "value": v})
            else:
                rows.append({"generator": gen, "functional": key, "index": "", "value": value})
    for c in report["verdicts"]:
        rows.append({"generator": "verdict", "functional": c["clause"], "index": str(c["detail"] or ""), "value": c["verdict"]})
    return rows

"""Command-line front end.

Exit codes: 0 success, 1 a comparison clause is violated, 2 invalid input or a
failed cross-validation.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .chainfile import chain_to_dict, normalize_target, parse_vector, read_chain, read_vector_arg
from .core import TOL_IDENTITY, TOL_ORDER, additive_reversiblization, is_reversible, stationary_distribution
from .errors import MarkovError, ValidationFailure
from .kernels import MhPair, build_m1, build_m2, convex_combination, l1_distance
from .mis import build_mis, mis_cross_validate, mis_spectrum
from .mixing import bd_sst
from .oracles import projection_oracle
from .report import Battery, chain_verdict, compare, report_rows

log = logging.getLogger("mhrev")

EXIT_OK, EXIT_VIOLATED, EXIT_INVALID = 0, 1, 2


def _to_jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(doc, fmt: str = "json", out=None):
    out = out or sys.stdout
    if fmt == "csv":
        rows = doc if isinstance(doc, list) else [doc]
        writer = csv.DictWriter(out, fieldnames=list(rows[0].keys()) if rows else ["value"])
        writer.writeheader()
        writer.writerows(rows)
    else:
        out.write(json.dumps(doc, indent=2, default=_to_jsonable) + "\n")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("MHREV_SEED", "0"))


def _resolve_target(args, chain, needed: bool = True):
    """Target from --target, else the file, else the stationary law of Q."""
    if getattr(args, "target", None):
        return normalize_target(read_vector_arg(args.target), chain.generator.n), "explicit"
    if chain.target is not None:
        return chain.target, "file"
    if not needed:
        return None, None
    return stationary_distribution(chain.generator), "stationary"


def cmd_info(args) -> int:
    chain = read_chain(args.input)
    g = chain.generator
    doc = {"n": g.n, "states": list(g.labels) if g.labels else None, "irreducible": g.irreducible, "scale": g.scale}
    if g.irreducible:
        pi = stationary_distribution(g)
        doc["stationary"] = pi
        doc["reversible_wrt_stationary"] = is_reversible(g, pi, args.tol_identity)
    mu, source = _resolve_target(args, chain, needed=False)
    if mu is not None:
        doc["target"] = mu
        doc["reversible_wrt_target"] = is_reversible(g, mu, args.tol_identity)
    _emit(doc)
    return EXIT_OK


def _parse_kind(kind: str, alpha):
    if kind.startswith("convex"):
        if ":" in kind:
            alpha = float(kind.split(":", 1)[1])
        if alpha is None:
            raise MarkovError("convex kind needs an alpha (convex:0.3 or --alpha)")
        return "convex", float(alpha)
    if kind not in ("m1", "m2", "additive"):
        raise MarkovError(f"unknown kind {kind!r}")
    return kind, None


def cmd_reversiblize(args) -> int:
    chain = read_chain(args.input)
    kind, alpha = _parse_kind(args.kind, args.alpha)
    mu, source = _resolve_target(args, chain)
    q = chain.generator
    if kind == "m1":
        out = build_m1(q, mu)
    elif kind == "m2":
        out = build_m2(q, mu)
    elif kind == "additive":
        out = additive_reversiblization(q, mu)
    else:
        out = convex_combination(MhPair.build(q, mu), alpha)
    doc = chain_to_dict(
        out,
        mu,
        kind=args.kind,
        target_source=source,
        reversible=is_reversible(out, mu, args.tol_identity),
        irreducible=out.irreducible,
    )
    if args.output:
        Path(args.output).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    else:
        _emit(doc)
    return EXIT_OK


def _battery_from_args(args, n: int, mu) -> Battery:
    default = Battery.default(n, mu)

    def sets(text):
        return sorted(int(t) for t in text.replace(";", ",").split(",") if t.strip())

    b = Battery(
        fs=[parse_vector(v) for v in args.f] if args.f else default.fs,
        nus=[normalize_nu(parse_vector(v)) for v in args.nu] if args.nu else default.nus,
        set_pairs=[tuple(sets(part) for part in p.split("|")) for p in args.pair] if args.pair else default.set_pairs,
        hit_sets=[sets(a) for a in args.hit_set] if args.hit_set else default.hit_sets,
        state_pairs=[tuple(sets(p)) for p in args.state_pair] if args.state_pair else default.state_pairs,
        lambdas=list(parse_vector(args.lambda_grid)) if args.lambda_grid else default.lambdas,
    )
    if args.pair and not args.state_pair:
        b.state_pairs = [(a[0], c[0]) for a, c in b.set_pairs if len(a) == 1 and len(c) == 1]
    return b


def normalize_nu(v):
    total = v.sum()
    if np.any(v < 0) or total <= 0:
        raise MarkovError("nu must be a non-negative, non-zero vector")
    return v / total


def _compare_one(path, target, args_dict):
    chain = read_chain(path)
    mu = normalize_target(read_vector_arg(target), chain.generator.n) if target else chain.target
    return compare(chain.generator, mu, eps=args_dict["epsilon"], tol_order=args_dict["tol_order"],
                   tol_identity=args_dict["tol_identity"], seed=args_dict["seed"])


def cmd_compare(args) -> int:
    chain = read_chain(args.input)
    q = chain.generator
    if not q.irreducible:
        raise MarkovError("compare needs an irreducible generator")
    mu, source = _resolve_target(args, chain)
    battery = _battery_from_args(args, q.n, mu)
    report = compare(q, mu, battery, eps=args.epsilon, tol_order=args.tol_order, tol_identity=args.tol_identity,
                     seed=_seed(args))
    report["target_source"] = source
    _emit(report_rows(report) if args.format == "csv" else report, args.format)
    return EXIT_OK if report["ok"] else EXIT_VIOLATED


def cmd_project(args) -> int:
    chain = read_chain(args.input)
    q = chain.generator
    mu, source = _resolve_target(args, chain)
    pair = MhPair.build(q, mu)
    grid = [0.0, 0.25, 0.5, 0.75, 1.0]
    oracle = projection_oracle(q, mu, samples=args.samples, seed=_seed(args))
    doc = {
        "target": mu,
        "target_source": source,
        "distance_to_reversible": oracle.closed_form,
        "d_M1": l1_distance(q, pair.m1, mu),
        "d_M2": l1_distance(q, pair.m2, mu),
        "d_Qbar": l1_distance(q, convex_combination(pair, 0.5), mu),
        "convex_grid": [{"alpha": a, "distance": l1_distance(q, convex_combination(pair, a), mu)} for a in grid],
        "oracle": {
            "samples": oracle.samples,
            "min_sampled": oracle.min_sampled,
            "verdict": oracle.verdict,
            "uniqueness": oracle.uniqueness,
            "side_conditions": oracle.side_conditions,
        },
    }
    if q.n == 2:
        # (a, b) = (rate 0 -> 1, rate 1 -> 0); reversible generators lie on mu1 * b = mu0 * a
        def ab(g):
            return [float(g.rates[0, 1]), float(g.rates[1, 0])]

        doc["plane"] = {
            "Q": ab(q),
            "M1": ab(pair.m1),
            "M2": ab(pair.m2),
            "line": {"slope": float(mu[0] / mu[1]), "equation": "mu[1] * b = mu[0] * a"},
        }
    _emit(doc)
    ok = oracle.verdict and oracle.uniqueness and oracle.side_conditions
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_mis(args) -> int:
    p = read_vector_arg(args.proposal)
    mu = read_vector_arg(args.target)
    inst = build_mis(p, mu)
    spec = mis_spectrum(inst)
    doc = {
        "order": inst.order,
        "weights": inst.weights,
        "gamma": spec.gamma,
        "beta": spec.beta,
        "m1_eigenvalues": spec.m1_eigenvalues,
        "m2_eigenvalues": spec.m2_eigenvalues,
        "m1_eigenvectors": spec.m1_eigenvectors.T,
        "m2_eigenvectors": spec.m2_eigenvectors.T,
        "l2_rates": {"M1": spec.l2_rates()[0], "M2": spec.l2_rates()[1]},
    }
    code = EXIT_OK
    try:
        check = mis_cross_validate(inst)
        doc["cross_validation"] = {"passed": True, **check.__dict__}
    except ValidationFailure as exc:
        doc["cross_validation"] = {"passed": False, "error": str(exc), "index": exc.index}
        code = EXIT_INVALID
    _emit(doc)
    return code


def cmd_bd_sst(args) -> int:
    chain = read_chain(args.input)
    mu, source = _resolve_target(args, chain)
    alphas = list(parse_vector(args.alphas))
    pair = MhPair.build(chain.generator, mu)
    doc = {"target": mu, "target_source": source}
    laws = {}
    for name, g in (("M1", pair.m1), ("M2", pair.m2)):
        law = bd_sst(g, mu)
        laws[name] = law
        doc[name] = {
            "rates": law.rates,
            "mean": law.mean,
            "variance": law.variance,
            "laplace": [{"alpha": a, "value": law.laplace(a)} for a in alphas],
        }
    tol = args.tol_order
    checks = [chain_verdict((a, b), tol)[0] for a, b in zip(laws["M1"].rates, laws["M2"].rates)]
    checks += [chain_verdict((laws["M1"].laplace(a), laws["M2"].laplace(a)), tol)[0] for a in alphas]
    checks.append(chain_verdict((laws["M2"].mean, laws["M1"].mean), tol)[0])
    checks.append(chain_verdict((laws["M2"].variance, laws["M1"].variance), tol)[0])
    doc["orderings"] = {
        "eigenvalues": checks[: len(laws["M1"].rates)],
        "laplace": checks[len(laws["M1"].rates) : -2],
        "mean": checks[-2],
        "variance": checks[-1],
    }
    _emit(doc)
    return EXIT_VIOLATED if "violated" in checks else EXIT_OK


def cmd_suite(args) -> int:
    files = sorted(Path(args.directory).glob("*.json"))
    if not files:
        raise MarkovError(f"no chain files in {args.directory}")
    opts = {"epsilon": args.epsilon, "tol_order": args.tol_order, "tol_identity": args.tol_identity, "seed": _seed(args)}
    summary = []
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        futures = {f: pool.submit(_compare_one, str(f), args.target, opts) for f in files}
        for f, fut in futures.items():
            try:
                rep = fut.result()
                summary.append({"file": f.name, "ok": rep["ok"], "violated": rep["violated"],
                                "t_mix_ratio_M2_over_M1": rep["mixing"]["ratio_M2_over_M1"]})
            except MarkovError as exc:
                summary.append({"file": f.name, "ok": False, "error": str(exc)})
    _emit(summary, args.format)
    if any("error" in s for s in summary):
        return EXIT_INVALID
    return EXIT_OK if all(s["ok"] for s in summary) else EXIT_VIOLATED


def _tolerance(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"tolerance must be non-negative, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mhrev", description="Metropolis-Hastings reversiblizations of Markov generators")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--target", help="target distribution: inline 'a,b,...' or a JSON file")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (falls back to $MHREV_SEED, then 0)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--tol-identity", type=_tolerance, default=TOL_IDENTITY)
    common.add_argument("--tol-order", type=_tolerance, default=TOL_ORDER)
    common.add_argument("--epsilon", type=float, default=0.25, help="total-variation threshold for mixing times")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[common], help="validate a chain file and print its basic properties")
    p.add_argument("input")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("reversiblize", parents=[common], help="build M1, M2, Q-bar or a convex combination")
    p.add_argument("input")
    p.add_argument("--kind", default="m2", help="m1 | m2 | additive | convex:ALPHA")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reversiblize)

    p = sub.add_parser("compare", parents=[common], help="full comparison report")
    p.add_argument("input")
    p.add_argument("--f", action="append", help="mean-zero observable 'v0,v1,...' (repeatable)")
    p.add_argument("--nu", action="append", help="distribution for the rate function (repeatable)")
    p.add_argument("--pair", action="append", help="disjoint sets for capacity, 'A|B' e.g. '0,1|3'")
    p.add_argument("--hit-set", action="append", help="target set for hitting statistics, e.g. '2,3'")
    p.add_argument("--state-pair", action="append", help="states for commute times, 'x,y'")
    p.add_argument("--lambda-grid", help="Laplace parameters, default 0.1,1,10")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("project", parents=[common], help="l1 projection distances and sampled oracle")
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("mis", parents=[common], help="closed-form spectra for independent sampling")
    p.add_argument("--proposal", required=True)
    p.set_defaults(func=cmd_mis)

    p = sub.add_parser("bd-sst", parents=[common], help="fastest strong stationary times of birth-death M1, M2")
    p.add_argument("input")
    p.add_argument("--alphas", default="0.1,1,10")
    p.set_defaults(func=cmd_bd_sst)

    p = sub.add_parser("suite", parents=[common], help="compare every chain file in a directory")
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "mis" and not args.target:
        parser.error("mis needs --target")
    try:
        return args.func(args)
    except MarkovError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Total-variation mixing times of M1, Q-bar, Q and M2 with mu = pi on random instances.

Writes one CSV row per instance, including the ratio t_mix(M2) / t_mix(M1) and
whether t_mix(Q-bar) falls between the two MH kernels.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from mhrev.core import additive_reversiblization, is_reversible, stationary_distribution
from mhrev.kernels import build_m1, build_m2
from mhrev.mixing import BISECTION_WIDTH, tv_mixing_time
from mhrev.oracles import InstanceSpec, random_irreducible_generator

log = logging.getLogger("mixing_table")


@dataclass
class Config:
    count: int = 50
    n_min: int = 3
    n_max: int = 8
    seed: int = 0
    structure: str = "dense"
    epsilon: float = 0.25
    floor: float = 0.1


def one(cfg: Config, k: int) -> dict:
    n = cfg.n_min + k % (cfg.n_max - cfg.n_min + 1)
    q = random_irreducible_generator(InstanceSpec(n, cfg.seed * 100_000 + k, cfg.structure, floor=cfg.floor))
    pi = stationary_distribution(q)
    t = {
        "M1": tv_mixing_time(build_m1(q, pi), pi, cfg.epsilon),
        "Qbar": tv_mixing_time(additive_reversiblization(q, pi), pi, cfg.epsilon),
        "Q": tv_mixing_time(q, pi, cfg.epsilon),
        "M2": tv_mixing_time(build_m2(q, pi), pi, cfg.epsilon),
    }
    return {
        "instance": k,
        "n": n,
        "q_reversible": is_reversible(q, pi),
        **{f"t_mix_{name}": value for name, value in t.items()},
        "ratio_M2_over_M1": t["M2"] / t["M1"],
        "qbar_between": min(t["M1"], t["M2"]) - BISECTION_WIDTH <= t["Qbar"] <= max(t["M1"], t["M2"]) + BISECTION_WIDTH,
    }


def run(cfg: Config, jobs: int | None = None) -> list[dict]:
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, [cfg] * cfg.count, range(cfg.count)))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--structure", choices=["dense", "birth-death", "mis"], default="dense")
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--floor", type=float, default=0.1, help="smallest rate relative to the largest")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("-o", "--output")
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    cfg = Config(args.count, args.n_min, args.n_max, args.seed, args.structure, args.epsilon, args.floor)
    table = run(cfg, args.jobs)
    between = sum(r["qbar_between"] for r in table)
    ratios = sorted(r["ratio_M2_over_M1"] for r in table)
    log.info("t_mix(Qbar) between M1 and M2 on %d/%d instances; ratio M2/M1 in [%.3f, %.3f]",
             between, len(table), ratios[0], ratios[-1])
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=list(table[0]))
        w.writeheader()
        w.writerows(table)
    finally:
        if args.output:
            fh.close()


if __name__ == "__main__":
    main()

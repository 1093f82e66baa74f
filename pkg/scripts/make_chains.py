"""Write a directory of random chain files for ``mhrev suite``."""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mhrev.chainfile import write_chain
from mhrev.oracles import InstanceSpec, random_irreducible_generator, random_target

log = logging.getLogger("make_chains")


@dataclass
class Config:
    out: Path
    count: int = 20
    n_min: int = 2
    n_max: int = 8
    seed: int = 0
    structure: str = "dense"
    with_target: bool = False


def run(cfg: Config) -> list[Path]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(cfg.seed)
    paths = []
    for k in range(cfg.count):
        n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
        q = random_irreducible_generator(InstanceSpec(n, cfg.seed * 100_000 + k, cfg.structure))
        target = random_target(n, rng) if cfg.with_target else None
        path = cfg.out / f"chain_{k:04d}.json"
        write_chain(path, q, target)
        paths.append(path)
    log.info("wrote %d chain files to %s", len(paths), cfg.out)
    return paths


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("out", type=Path)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--structure", choices=["dense", "birth-death", "mis"], default="dense")
    p.add_argument("--with-target", action="store_true", help="store a random target instead of using pi")
    args = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    run(Config(args.out, args.count, args.n_min, args.n_max, args.seed, args.structure, args.with_target))


if __name__ == "__main__":
    main()

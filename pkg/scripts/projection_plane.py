"""Plot-ready data for the two-state projection picture.

For Q = [[-a, a], [b, -b]] every generator is a point (a, b).  The mu-reversible
ones form the line mu0 * a = mu1 * b.  This writes Q, M1, M2, the segment between
M1 and M2, and the d_mu level set through M1 (an l1 diamond) as CSV.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from mhrev.core import validate_generator
from mhrev.kernels import MhPair, convex_combination, distance_to_reversible, l1_distance


@dataclass
class Config:
    a: float = 2.0
    b: float = 1.0
    mu0: float = 0.5
    segment_points: int = 11


def rows(cfg: Config) -> list[dict]:
    mu = np.array([cfg.mu0, 1.0 - cfg.mu0])
    q = validate_generator([[-cfg.a, cfg.a], [cfg.b, -cfg.b]])
    pair = MhPair.build(q, mu)
    d = distance_to_reversible(q, mu)
    out = []

    def point(kind, g, alpha=""):
        out.append({"kind": kind, "alpha": alpha, "a": g.rates[0, 1], "b": g.rates[1, 0],
                    "distance": l1_distance(q, g, mu)})

    point("Q", q)
    point("M1", pair.m1)
    point("M2", pair.m2)
    for alpha in np.linspace(0.0, 1.0, cfg.segment_points):
        point("segment", convex_combination(pair, float(alpha)), f"{alpha:.3f}")
    # reversible line through the origin, clipped to the box containing every point above
    hi = 1.2 * max(cfg.a, cfg.b, pair.m2.rates[0, 1], pair.m2.rates[1, 0])
    for t in np.linspace(0.0, hi, 2):
        out.append({"kind": "line", "alpha": "", "a": t, "b": mu[0] * t / mu[1], "distance": ""})
    # diamond mu0 |da| + mu1 |db| = d around Q
    for da, db in ((d / mu[0], 0.0), (0.0, d / mu[1]), (-d / mu[0], 0.0), (0.0, -d / mu[1]), (d / mu[0], 0.0)):
        out.append({"kind": "level-set", "alpha": "", "a": cfg.a + da, "b": cfg.b + db, "distance": d})
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--mu0", type=float, default=0.5)
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    args = p.parse_args(argv)
    data = rows(Config(args.a, args.b, args.mu0))
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=["kind", "alpha", "a", "b", "distance"])
        w.writeheader()
        w.writerows(data)
    finally:
        if args.output:
            fh.close()


if __name__ == "__main__":
    main()

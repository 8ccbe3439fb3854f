"""Compare evolve, evolve_spectral and evolve_transform on the standard grid."""
import argparse
import itertools
import time

import numpy as np

from dunklgroup.dunkl import EigenCoefficients
from dunklgroup.evolution import evolve
from dunklgroup.oracles import evolve_spectral, evolve_transform

FUNCS = {"phi0": {0: 1.0}, "phi1": {1: 1.0}, "phi0+phi2": {0: 1.0, 2: 1.0}}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", type=float, nargs="+", default=[0.25, 0.6, 1.5])
    ap.add_argument("--t", type=float, nargs="+", default=[0.3, 1.0])
    ap.add_argument("--x", type=float, nargs="+", default=[-1.2, -0.4, 0.4, 1.2])
    ap.add_argument("--N", type=int, default=80, help="spectral truncation order")
    args = ap.parse_args()

    xs = np.array(args.x)
    print(f"{'b':>5} {'t':>4} {'f':>10} {'x':>5} {'evolve':>20} {'|ev-spec|':>10} {'|ev-tr|':>10} {'|spec-tr|':>10}")
    worst = 0.0
    t0 = time.perf_counter()
    for b, t, (name, fl) in itertools.product(args.b, args.t, FUNCS.items()):
        f = EigenCoefficients.from_pairs(b, fl)
        spec = evolve_spectral(b, t, f, args.N)(xs)
        trans = evolve_transform(b, t, f, xs).real
        for i, x in enumerate(xs):
            if x == 0 or x + t == 0:
                continue
            e = evolve(f, t, x).value
            gaps = (abs(e - spec[i]), abs(e - trans[i]), abs(spec[i] - trans[i]))
            worst = max(worst, *gaps)
            print(f"{b:5.2f} {t:4.1f} {name:>10} {x:5.1f} {e:20.15f} " + " ".join(f"{g:10.1e}" for g in gaps))
    print(f"max pairwise gap {worst:.2e} in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

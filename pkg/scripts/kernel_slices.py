"""Write K_b(x, y; t) over y for a few (b, x, t) to CSV, one file per slice."""
import argparse
import csv
from pathlib import Path

import numpy as np

from dunklgroup.dunkl import RegionTag, kernel_K, region_classify

SLICES = [(0.6, 0.6, 1.1), (0.6, 0.6, 3.0), (1.5, 0.6, 1.1), (-0.25, 0.6, 1.1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="kernel_slices")
    ap.add_argument("--ymax", type=float, default=3.0)
    ap.add_argument("--n", type=int, default=600)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ys = np.linspace(-args.ymax, args.ymax, args.n)
    for b, x, t in SLICES:
        path = out / f"K_b{b:g}_x{x:g}_t{t:g}.csv"
        with path.open("w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["y", "K", "region"])
            for y in ys:
                if y == 0:
                    continue
                region = region_classify(x, y, t)
                k = "" if region is RegionTag.BOUNDARY else format(kernel_K(b, x, y, t).value, ".17g")
                w.writerow([format(y, ".17g"), k, region.value])
        print(f"wrote {path}")


if __name__ == "__main__":
    main()

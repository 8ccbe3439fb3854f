"""Tabulate the boundary-value jump of Phi_b against K_b as eps -> 0."""
import argparse

from dunklgroup.evolution import boundary_value_diagnostic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", type=float, nargs="+", default=[0.25, 0.6, 1.5])
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4, 1e-5])
    args = ap.parse_args()

    triples = [(0.6, 0.8, 5.0), (-0.6, 0.8, 3.0), (0.7, -0.4, 2.0), (1.0, 1.05, 0.01)]
    for b in args.b:
        for x, y, t in triples:
            rep = boundary_value_diagnostic(b, x, y, t, args.eps)
            print(f"b={b:g} (x, y, t)=({x:g}, {y:g}, {t:g}) {rep.region.value} K={rep.reference:.12g}")
            for row, order in zip(rep.rows, (None,) + rep.orders):
                o = "" if order is None else f"order {order:5.2f}"
                print(f"    eps={row.eps:7.0e}  jump={row.jump.real:+.12f}{row.jump.imag:+.1e}i  err={row.error:.2e}  {o}")


if __name__ == "__main__":
    main()

"""Which lam^2 coefficient do the reference energies support for 2 < s < 3?

For each alpha the lam^s and lam terms of the expansion are subtracted from
reference energies on lam in [1e-4, 1e-2]; the remainder divided by lam^2 is
fit to c2 + c3 lam. The fitted c2 is printed next to the RS second-order
coefficient (with the first-order factor squared, as derived from the
matrix elements), the same sum without that factor, and the regime
formula's own lam^2 coefficient.

    python scripts/rs_second_order.py --alphas 2.35,2.4,2.45
"""

import argparse

from spikedosc.checks import rs_second_order


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphas", default="2.35,2.4,2.45")
    args = ap.parse_args()
    alphas = tuple(float(v) for v in args.alphas.split(","))
    for c in rs_second_order(alphas):
        print(f"{c.status:4}  {c.name}: {c.detail}")


if __name__ == "__main__":
    main()

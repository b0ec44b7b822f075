"""Compare the regime expansion with the reference energy across alpha.

For each alpha (at fixed A) and each lam in a log grid, prints the regime,
the expansion error E_exp - E_ref, and that error divided by the
expansion's own remainder order, which should stay bounded as lam shrinks.

    python scripts/regime_sweep.py --A 0 --alphas 6,4,3.5,3,2.75,2.5,2.4,2.3
"""

import argparse
import math

from spikedosc import OscillatorParams, ground_expansion, solve_reference


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--A", type=float, default=0.0)
    ap.add_argument("--alphas", default="6,4,3.5,3,2.75,2.5,2.4,2.3")
    ap.add_argument("--lams", default="1e-6,1e-5,1e-4,1e-3")
    args = ap.parse_args()
    lams = [float(v) for v in args.lams.split(",")]

    print(f"{'alpha':>6} {'regime':>12} {'lambda':>9} {'E_ref':>18} {'E_exp - E_ref':>14} {'/ remainder':>12}")
    for alpha in (float(v) for v in args.alphas.split(",")):
        p0 = OscillatorParams(args.A, alpha)
        e = ground_expansion(p0)
        for lam in lams:
            ref = solve_reference(p0.with_lambda(lam)).value
            diff = e.evaluate(lam) - ref
            rem = lam**e.error_lambda_power * abs(math.log(lam)) ** e.error_log_power
            print(f"{alpha:6g} {str(e.regime):>12} {lam:9.1e} {ref:18.12f} {diff:+14.3e} {diff / rem:+12.4g}")


if __name__ == "__main__":
    main()

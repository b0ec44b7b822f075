"""Fit the lam^2 log lam coefficient of the A=0, alpha=5/2 ground energy.

Subtracts 3 + (2 Gamma(1/4)/sqrt(pi)) lam from reference energies and fits
the remainder to c lam^2 log lam + d lam^2. Prints the fit, the two
candidate coefficients 32/sqrt(pi) and 16/sqrt(pi), and the error of each
truncated expansion at every grid point.

    python scripts/alpha52_fit.py --lo 1e-5 --hi 1e-3 --points 9
"""

import argparse
import math

import numpy as np

from spikedosc import harrell
from spikedosc.checks import alpha52_fit


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=1e-5)
    ap.add_argument("--hi", type=float, default=1e-3)
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args()

    lams = np.logspace(math.log10(args.lo), math.log10(args.hi), args.points)
    c, d, lams, energies = alpha52_fit(lams)
    new, old = 32 / math.sqrt(math.pi), 16 / math.sqrt(math.pi)
    print(f"fitted c = {c:.6f}   d = {d:.6f}")
    print(f"32/sqrt(pi) = {new:.6f}  (rel diff {abs(c - new) / new:.3%})")
    print(f"16/sqrt(pi) = {old:.6f}  (rel diff {abs(c - old) / old:.3%})")
    print()
    forms = {"32-form": harrell.alpha_equals_5_2(True), "16-form": harrell.alpha_equals_5_2(False)}
    print(f"{'lambda':>10} {'E_ref':>18} " + " ".join(f"{k + ' err':>14}" for k in forms))
    for lam, e in zip(lams, energies):
        errs = []
        for coeffs in forms.values():
            v = 3 + coeffs[(1.0, 0)] * lam + coeffs[(2.0, 1)] * lam**2 * math.log(lam)
            errs.append(v - e)
        print(f"{lam:10.3e} {e:18.14f} " + " ".join(f"{x:+14.3e}" for x in errs))


if __name__ == "__main__":
    main()

"""Sweep the anti-analytic polynomial length m in
g = e^{i theta} r^3 + sum_{l=1..m} zbar^l and report for each m whether
T_g^2 is itself a Toeplitz operator.  The threshold sits at m = 4: beyond it
the degree 1-m component of the squared operator would need the
non-integrable radial term r^{-2}.

Usage: python scripts/square_threshold.py [--max-m M]
"""
import argparse

from qhtoeplitz.operators import PolarSymbol, square_check
from qhtoeplitz.radial import RadialSymbol
from qhtoeplitz.symbols import format_symbol


def tail_symbol(m: int) -> PolarSymbol:
    g = PolarSymbol.quasihomogeneous(1, RadialSymbol.monomial(1, 3))
    for l in range(1, m + 1):
        g = g + PolarSymbol.zbar_power(l)
    return g


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-m", type=int, default=6)
    args = ap.parse_args()

    for m in range(args.max_m + 1):
        result = square_check(tail_symbol(m))
        if result:
            degs = ", ".join(str(d) for d in result.symbol.degrees)
            print(f"m={m}: T_g^2 is Toeplitz (symbol degrees {degs})")
            if m == 2:
                print(f"      symbol: {format_symbol(result.symbol)}")
        else:
            print(f"m={m}: not Toeplitz -- degree {result.degree} needs "
                  f"radial exponent {result.witness_exponent}")


if __name__ == "__main__":
    main()

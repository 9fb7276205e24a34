"""Run the commutant solver on the generic all-ones tail and print the
elimination trace: the ansatz top degree is forced down 5 -> 4 -> 3 -> 2 -> 1
by integrability residues and truncation-boundary evaluations, and the
surviving solution space is two-dimensional, spanned by the identity and the
operator itself.

Usage: python scripts/elimination_ladder.py [--top N] [--depth L] [--tail M]
"""
import argparse
import time

from qhtoeplitz.commutant import CommutantProblem, solve_ladder
from qhtoeplitz.symbols import format_symbol


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--top", type=int, default=5, help="ansatz top degree")
    ap.add_argument("--depth", type=int, default=8, help="ansatz depth")
    ap.add_argument("--tail", type=int, default=13,
                    help="number of unit tail coefficients of g")
    args = ap.parse_args()

    problem = CommutantProblem([1] * args.tail, args.top, args.depth)
    t0 = time.perf_counter()
    report = solve_ladder(problem)
    dt = time.perf_counter() - t0

    print(f"solved in {dt:.2f}s; surviving top degree {report.final_ansatz}, "
          f"dimension {report.dimension}\n")
    print("trace:")
    for line in report.trace:
        print(f"  {line}")
    print("\nconstraint ledger:")
    for entry in report.entries:
        print(f"  {entry}")
    print("\nbasis:")
    for name, sym, cls in zip(report.basis_params, report.basis,
                              report.classification_strings()):
        print(f"  {name}: T_f = {cls}")
        print(f"      f = {format_symbol(sym)}")


if __name__ == "__main__":
    main()

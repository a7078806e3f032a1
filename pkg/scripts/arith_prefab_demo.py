"""The multiplicative prefab on indices x_n: decompositions, compositions and invariants.

    python scripts/arith_prefab_demo.py --n 8 --m 4 --upto 30
"""
import argparse
import sys

from tgrw.packs import arith_compose, arith_decompositions, arith_invariant


def show(multiset: dict) -> str:
    return " + ".join(f"{k}x{i}" if k > 1 else f"x{i}" for i, k in sorted(multiset.items()))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--n", type=int, default=8)
    parser.add_argument("--m", type=int, default=4)
    parser.add_argument("--upto", type=int, default=20)
    args = parser.parse_args(argv)

    print(f"decompositions of x{args.n}:")
    for d in arith_decompositions(args.n):
        print("   ", show(d))
    print(f"x{args.n} o x{args.m}:")
    for m in sorted(arith_compose(args.n, args.m), key=lambda s: sorted(dict(s).items())):
        print("   ", show(dict(m)))
    print("normal forms:")
    for k in range(2, args.upto + 1):
        print(f"    x{k} -> {show(arith_invariant(k))}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

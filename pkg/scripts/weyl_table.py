"""Normal-ordered forms of words in the Weyl algebra ab = ba + 1.

    python scripts/weyl_table.py --max-len 5
    python scripts/weyl_table.py --word babab --verify
"""
import argparse
import itertools
import sys
from pathlib import Path

from tgrw.packs import weyl_normal_order


def format_terms(terms: dict) -> str:
    def mono(key):
        if not key:
            return "1"
        i, j = key.count("b"), key.count("a")
        parts = [f"b^{i}" if i > 1 else "b" * i, f"a^{j}" if j > 1 else "a" * j]
        return "".join(p for p in parts if p)

    order = sorted(terms, key=lambda k: (-len(k), k))
    return " + ".join((f"{terms[k]}·" if terms[k] != 1 else "") + mono(k) for k in order)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--max-len", type=int, default=4)
    parser.add_argument("--word", action="append", help="normal-order only these words")
    parser.add_argument("--central", action="store_true", help="allow a central letter c")
    parser.add_argument("--verify", action="store_true",
                        help="compare with the action of d/ds and s· on polynomials (needs tests/ on disk)")
    args = parser.parse_args(argv)

    words = args.word or ["".join(w) for n in range(1, args.max_len + 1) for w in itertools.product("ab", repeat=n)]
    check = None
    if args.verify:
        sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
        from oracles import normal_ordered_matrix, operator_matrix

        def check(w, terms):
            return normal_ordered_matrix(terms) == operator_matrix(w)

    failures = 0
    for w in words:
        terms = weyl_normal_order(w, args.central)
        line = f"{w:>10} = {format_terms(terms)}"
        if check is not None and not args.central:
            ok = check(w, terms)
            failures += not ok
            line += "   [operator check ok]" if ok else "   [operator check FAILED]"
        print(line)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

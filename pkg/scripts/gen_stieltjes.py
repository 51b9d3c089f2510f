"""Regenerate the Stieltjes constant table embedded in momlab/specfun.py.

Run with mpmath installed; prints the literal to paste.
"""
import mpmath

mpmath.mp.dps = 40


def main(count: int = 20) -> None:
    print("STIELTJES = (")
    for n in range(count):
        print(f"    {mpmath.nstr(mpmath.stieltjes(n), 22, min_fixed=-1, max_fixed=1)},")
    print(")")


if __name__ == "__main__":
    main()

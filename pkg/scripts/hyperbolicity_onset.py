"""Last step carrying elliptic eigenvalues, per seed, for blowup sequences with transversal limits.

    python scripts/hyperbolicity_onset.py [seeds]
"""
import sys
from collections import Counter

from canrel.lab import scenario_hyperbolicity


def main(seeds: int = 200):
    for n in (1, 2, 3):
        last = Counter(scenario_hyperbolicity(n, None, sd, steps=14).metrics["last_elliptic_step"]
                       for sd in range(seeds))
        print(f"n={n}: last elliptic step -> count {dict(sorted(last.items()))}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:2]))

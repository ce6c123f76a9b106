"""Per-step splitting-probe table for blowup sequences, as CSV on stdout.

    python scripts/continuity_sweep.py --n 3 --k 1 --seeds 5 --steps 20
"""
import argparse
import csv
import sys

from canrel.lab import scenario_continuity_sweep


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--onset", type=int, default=6)
    args = p.parse_args(argv)
    writer = None
    for sd in range(args.seeds):
        _, probe = scenario_continuity_sweep(args.n, args.k, sd, args.steps, args.onset)
        for row in probe.rows():
            row = {"seed": sd, **row}
            if writer is None:
                writer = csv.DictWriter(sys.stdout, fieldnames=list(row))
                writer.writeheader()
            writer.writerow(row)


if __name__ == "__main__":
    main()

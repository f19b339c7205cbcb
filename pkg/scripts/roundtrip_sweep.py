"""Exhaustive weights -> fan -> weights sweep.

    python3 scripts/roundtrip_sweep.py --max-weight 6 --max-dim 4
"""

import argparse
import time

from toric_wci.paperchecks import _roundtrip_counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-weight", type=int, default=6)
    ap.add_argument("--max-dim", type=int, default=4)
    args = ap.parse_args()
    t0 = time.perf_counter()
    counts = dict(_roundtrip_counts(args.max_weight, args.max_dim))
    dt = time.perf_counter() - t0
    for k, v in counts.items():
        print(f"{k:<40}{v}")
    print(f"{'seconds':<40}{dt:.2f}")
    return int(counts["roundtrip_failures"] > 0 or counts["primitive_iff_well_formed_violations"] > 0)


if __name__ == "__main__":
    raise SystemExit(main())

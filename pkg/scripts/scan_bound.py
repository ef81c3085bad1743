#!/usr/bin/env python3
"""Scan H(a, delta) over a and report the minimizer and its slack under 6.5.

Usage: python3 scripts/scan_bound.py [--delta 0.5] [--a-min 0.3] [--a-max 0.7]
       [--step 0.01]
"""
import argparse

from rankbound import bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--delta", type=float, default=0.5)
    ap.add_argument("--a-min", type=float, default=0.30)
    ap.add_argument("--a-max", type=float, default=0.70)
    ap.add_argument("--step", type=float, default=0.01)
    args = ap.parse_args()

    reports = bound.grid_reports(args.delta, args.a_min, args.a_max, args.step)
    print(f"{'a':>8}  {'H':>12}  {'bracket':>12}")
    for r in reports:
        print(f"{r.a:8.4f}  {r.H:12.8f}  {r.bracket:12.8f}")
    a_star, best = bound.minimize(args.delta, args.a_min, args.a_max, args.step)
    print()
    print(f"minimum: H({a_star:.4f}, {args.delta}) = {best.H:.8f}")
    print(f"slack under 6.5: {6.5 - best.H:.8f}")


if __name__ == "__main__":
    main()

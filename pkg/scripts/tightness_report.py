"""Entropy gap of a Gibbs state and its ground-state mixtures versus the optimised bound."""

import argparse

from ecbounds.verify.suites import tightness_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--energy", type=float, default=100.0)
    args = ap.parse_args()
    print(f"{'mix':>6} {'eps':>10} {'|dH|':>10} {'bound':>10} {'ratio':>7}")
    for row in tightness_report(E=args.energy):
        print(f"{row['mix']:>6g} {row['eps']:>10.4g} {row['delta_H']:>10.4g} "
              f"{row['bound']:>10.4g} {row['ratio']:>7.3f}")


if __name__ == "__main__":
    main()

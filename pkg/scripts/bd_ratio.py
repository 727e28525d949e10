"""Ratio of the two level sums returned by ``bd_sums`` for the one-mode oscillator."""

import argparse

from ecbounds.spectrum import Oscillator, bd_sums


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--energy", type=float, nargs="*", default=[1e2, 1e3, 1e4])
    args = ap.parse_args()
    for E in args.energy:
        up, down = bd_sums(Oscillator(1.0), E)
        print(f"E={E:g}  N_up={up:.15g}  N_down={down:.15g}  ratio={up / down:.9f}")


if __name__ == "__main__":
    main()

"""Re-derive the frozen regression values used in the tests at 40 digits.

Independent of the package: the one-mode envelope ``ln(E + 1) + 1`` and the
bound formulas are written out again with mpmath, and the bd sums are
accumulated in exact integer arithmetic.
"""

from fractions import Fraction

from mpmath import exp, log, mp, mpf, sqrt

mp.dps = 40
LN2 = log(2)


def g(x):
    x = mpf(x)
    return (x + 1) * log(x + 1) - (x * log(x) if x > 0 else 0)


def fbar_one_mode(E):
    return log(E + 1) + 1


def cb(ebar, eps, t, C, D, delta):
    ebar, eps, t = mpf(ebar), mpf(eps), mpf(t)
    return (C * eps * (1 + 4 * t) * (fbar_one_mode(ebar / (eps * t) ** 2) + delta)
            + D * (2 * g(eps * t) + g(eps * (1 + 2 * t))))


def big_f(u, ebar_m, t, s, delta):
    t = mpf(t)
    return (((4 + 8 * t) * u + 2 * s * u**2 * t**2) * fbar_one_mode(ebar_m / t**2)
            + (4 + 8 * t) * delta * u + 4 * g(t * u) + 2 * g((2 + 2 * t) * u))


def bd_sums_doubled(E2):
    # one-mode levels (2k+1)/2, so work with doubled energies
    up = down = 0
    k = 0
    while (2 * k + 1) + 1 <= E2:
        a = 2 * k + 1
        J = (E2 - a - 1) // 2
        up += a * a * (J + 1)
        down += a * (J + 1) ** 2
        k += 1
    return Fraction(up, 4), Fraction(down, 4)


def main():
    dstar = exp(-1) + LN2
    print("cb generic (C=D=1, delta=1/3+ln2):", cb(2.5, mpf("0.1"), 1, 1, 1, mpf(1) / 3 + LN2))
    print("cb oscillator (C=D=2):", cb(2.5, mpf("0.1"), mpf("0.5"), 2, 2, dstar))
    u = sqrt(mpf("2.5") / mpf(10**5))
    print("big_f s=0:", big_f(u, mpf(10**5), mpf("0.5"), 0, dstar))
    print("big_f s=1:", big_f(u, mpf(10**5), mpf("0.5"), 1, dstar))
    up, down = bd_sums_doubled(2 * 10**4)
    print("bd sums at E=1e4:", up, down, "ratio", float(up / down))


if __name__ == "__main__":
    main()

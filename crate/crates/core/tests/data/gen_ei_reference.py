#!/usr/bin/env python3
"""Regenerate the Ei / exp-Ei reference tables with mpmath at 40 digits.

    python3 gen_ei_reference.py
"""
import mpmath as mp

mp.mp.dps = 40


def logspace(lo, hi, n):
    a, b = mp.log10(lo), mp.log10(hi)
    return [mp.power(10, a + (b - a) * i / (n - 1)) for i in range(n)]


with open("ei_reference.csv", "w") as f:
    f.write("x,ei\n")
    for s in logspace(mp.mpf("1e-6"), mp.mpf(700), 10000):
        x = -s
        f.write("%s,%s\n" % (mp.nstr(x, 20, min_fixed=0, max_fixed=0), mp.nstr(mp.ei(x), 20, min_fixed=0, max_fixed=0)))

with open("exp_ei_reference.csv", "w") as f:
    f.write("s,exp_ei\n")
    for s in logspace(mp.mpf("1e-6"), mp.mpf("1e6"), 2000):
        f.write("%s,%s\n" % (mp.nstr(s, 20, min_fixed=0, max_fixed=0), mp.nstr(mp.exp(s) * mp.ei(-s), 20, min_fixed=0, max_fixed=0)))

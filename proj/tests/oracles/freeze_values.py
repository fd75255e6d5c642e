#!/usr/bin/env python3
"""Independent oracle for the constants frozen into the C++ tests.

Uses exact rational arithmetic (fractions / mpmath) and direct enumeration,
sharing no code with the library. Run it to regenerate the values quoted in
tests/*.cpp.
"""
from fractions import Fraction as F
import math
import mpmath as mp

mp.mp.dps = 50


def cp(p):
    p = F(p)
    return math.ceil(F(4) * (1 - p) / (1 - 2 * p) ** 2)


def majority_tail(p, n):
    """P(Binomial(n, p) > n/2), exact."""
    p = mp.mpf(p)
    return mp.fsum(mp.binomial(n, j) * p**j * (1 - p) ** (n - j) for j in range(n // 2 + 1, n + 1))


print("c_p:", {s: cp(v) for s, v in [("1/4", F(1, 4)), ("0", F(0)), ("1/10", F(1, 10)),
                                      ("5/11", F(5, 11)), ("2/5", F(2, 5)), ("1/200", F(1, 200))]})
print("c_p(2e^-3):", math.ceil(4 * (1 - 2 * mp.e**-3) / (1 - 4 * mp.e**-3) ** 2))

print("tail Bin(37,0.1):", mp.nstr(majority_tail("0.1", 37), 17))
print("tail Bin(25,0.25):", mp.nstr(majority_tail("0.25", 25), 17))
print("tail Bin(25,0.1):", mp.nstr(majority_tail("0.1", 25), 17))
print("tail Bin(3,0.49):", mp.nstr(majority_tail("0.49", 3), 17))

worst = 0
for p in ["0.05", "0.1", "0.25", "0.4"]:
    c = cp(F(p))
    for t in range(1, 9):
        ratio = majority_tail(p, 2 * c * t + 1) / mp.e ** (-t)
        worst = max(worst, ratio)
print("max tail / e^-t over grid:", mp.nstr(worst, 10))

# Tournament closed form, N = 8, alpha = 2, c_p = 12.
print("tournament N=8:", sum((8 >> i) * (2 * 12 * 2**i + 5) for i in range(1, 4)))
print("match alpha=2^0.9 round 3, c_p=12:", 2 * 12 * math.ceil(mp.mpf(2) ** mp.mpf("2.7")) + 5)


def knockout_matches(s):
    out = []
    while s > 1:
        out.append(s // 2)
        s = (s + 1) // 2
    return out


def find_min_cost(size, q, c):
    L = math.ceil(mp.log(1 / mp.mpf(q), 2))
    return sum(m * (2 * c * (i + 1 + L) + 1) for i, m in enumerate(knockout_matches(size)))


print("find_min 64, q=0.05, c_p=6:", find_min_cost(64, "0.05", 6))
print("find_min 48, q=0.1, c_p=6:", find_min_cost(48, "0.1", 6))
print("find_min 5, q=0.25, c_p=4:", find_min_cost(5, "0.25", 4))

# Modified schedule, N = 1024.
N = 1024
lnN = mp.log(N)
print("ceil ln 1024:", math.ceil(lnN))
print("prelim:", 8 * cp(F(5, 11)) * math.ceil(lnN) + 1)
eta = 1 + math.ceil(mp.log(N / mp.log(N, 2), 2))
print("eta:", eta)
print("tests:", [2 * math.ceil(2**i * lnN) * cp(F(2, 5)) + 1 for i in range(1, eta + 1)])
print("boost reps p=0.1:", 2 * cp(F(1, 10)) * math.ceil(mp.log(200)) + 1)

# Phase schedule, c_p = 6 / multiphase retrieval.
print("phase tests c_p=6:", [2 ** (i - 1) * 6 * 6 + 1 for i in range(1, 4)])
print("full pass n=256 c_p=6:", sum(2 ** (i - 1) * 36 + 1 for i in range(1, 10)))

# Reduction m values.
for n, g in [(1024, 600), (4096, 8), (256, 8), (8, 8)]:
    target = g * math.log2(n)
    m = 1
    while m < target:
        m *= 2
    print(f"m(n={n}, gamma={g}) =", m)

# Weak oracle probabilities at p = 0 (self draws count as favourable).
m = 64
r = 5
print("O1 p=0 rank5/64:", F(m - r, m) ** 2, "O2 p=0 rank60/64:", F(m - 60, m))

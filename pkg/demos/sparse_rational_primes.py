"""
Every other doubling of the prime index
========================================

Keep only the rational primes with index 1, 2, 4, 8, ...  Unique
factorization survives, the prime count is close to log2 x - log2 log x,
and as for the powers of two the integers have no density.
"""

import numpy as np

from beurling import inverse_zeta_scan, remainder_profile, system_sparse_rational_primes

S = system_sparse_rational_primes(1e8)
print("first primes:", S.primes.values[:8].astype(int).tolist())

xs = np.geomspace(1e3, 1e8, 6)
for x in xs:
    approx = np.log2(x) - np.log2(np.log(x))
    print(f"x={x:9.3g}  pi(x)={int(S.primes.count(x)):3d}  log2 x - log2 log x = {approx:6.2f}")

print("integers up to 1e8:", int(S.N(1e8)), " all masses one:", bool(np.all(S.dN.m == 1)))
print("remainder profile:", remainder_profile(S, "N_minus_ax", 1).verdict)
sc = inverse_zeta_scan(S, np.linspace(1, 50, 40), sigma=1.1)
print(f"sigma=1.1: max |1/zeta| = {sc.moduli.max():.4f}  flags {sc.flags}")

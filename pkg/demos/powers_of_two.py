"""
Primes 2, 4, 8, ...: zeta without a pole
=========================================

With p_k = 2^k the integers up to 2^m are counted by partition sums, so
N(x) grows slower than any multiple of x.  Yet 1/zeta stays bounded near the
line Re s = 1, so boundedness of 1/zeta alone does not force a density.
"""

import numpy as np

from beurling import (
    asymptote_example1,
    hardy_ramanujan,
    inverse_zeta_scan,
    partition_numbers,
    remainder_profile,
    system_powers_of_two,
)

S = system_powers_of_two(2.0**40)
p = partition_numbers(400)
sums = np.cumsum(np.array(p, dtype=object))

for m in (10, 20, 40):
    print(f"N(2^{m}) = {S.N(2.0**m):.0f}   partition sum = {sums[m]}")

# %%
# The count creeps towards its asymptote slowly.
for m in (50, 100, 200, 400):
    print(f"m={m:3d}  N/asymptote = {float(sums[m]) / asymptote_example1(2.0**m):.4f}"
          f"   p(m)/HR(m) = {p[m] / hardy_ramanujan(m):.4f}")

# %%
# N(x)/x tends to 0: no density can be fitted.
print("remainder profile:", remainder_profile(S, "N_minus_ax", 1).verdict)

# %%
# |1/zeta(sigma + it)| on t in [1, 50] stays bounded.
t = np.linspace(1, 50, 40)
for sigma in (1.1, 1.5):
    sc = inverse_zeta_scan(S, t, sigma=sigma)
    print(f"sigma={sigma}: max |1/zeta| = {sc.moduli.max():.4f}  flags {sc.flags}")

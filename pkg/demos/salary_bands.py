"""Two payroll offices encrypt salaries under their own keys.

Office 1 can sort its own ciphertexts with no extra key. Comparing
against office 2 needs the comparison key the key center hands out for
that pair, and the answer also reveals where the two values first differ.
"""

import random

from mcore import compare, compare_mc, encrypt, gen_cmp_key, gen_key, setup
from mcore.pairing import PairingStats

rng = random.Random(2024)
mk, pp = setup(N=2, n=32, rng=rng)
office1, office2 = gen_key(1, mk, pp), gen_key(2, mk, pp)

salaries1 = [58_000, 91_500, 73_250]
salaries2 = [60_000, 91_500]
ct1 = [encrypt(s, office1, pp) for s in salaries1]
ct2 = [encrypt(s, office2, pp) for s in salaries2]

print("same office, no key needed")
for a, ca in zip(salaries1, ct1):
    for b, cb in zip(salaries1, ct1):
        if a < b:
            out = compare(ca, cb)
            print(f"  {a:>7} vs {b:>7}: less={out.less} first differing bit={out.msdb}")

ck = gen_cmp_key(1, 2, mk, pp, rng=rng)
print("across offices, with the (1, 2) comparison key")
for a, ca in zip(salaries1, ct1):
    for b, cb in zip(salaries2, ct2):
        stats = PairingStats()
        out = compare_mc(ca, cb, ck, pp, stats)
        print(f"  {a:>7} vs {b:>7}: less={out.less} msdb={out.msdb:>2} pairings={stats.pairings}")

print(f"ciphertext size: {len(ct1[0].to_bytes())} bytes for a 32-bit value")

"""A server holds one client's encrypted column and answers "value < q"
for a query encrypted by another client.

All three strategies return the same rows. They differ only in how many
pairings they spend, which is what this script prints.
"""

import random

from mcore import encrypt, gen_cmp_key, gen_key, setup
from mcore.rangequery import EncryptedColumn, run_query

rng = random.Random(7)
mk, pp = setup(N=2, n=32, rng=rng)
owner, analyst = gen_key(1, mk, pp), gen_key(2, mk, pp)
ck = gen_cmp_key(1, 2, mk, pp, rng=rng)

R = 2**16
ages = [rng.randrange(R) for _ in range(100)]
column = EncryptedColumn(1, 32, ((row, encrypt(v, owner, pp)) for row, v in enumerate(ages)))

threshold = R // 3
query = encrypt(threshold, analyst, pp)
expected = {row for row, v in enumerate(ages) if v < threshold}

for method in ("simple", "binsearch", "hybrid"):
    res = run_query(method, column, query, ck, rng=rng)
    assert res.row_ids == expected
    s = res.stats
    print(f"{method:>9}: {len(res.row_ids)} rows, {s.pairings:>5} pairings, "
          f"{s.compare_mc_calls:>3} keyed comparisons, {s.compare_calls:>3} public comparisons")

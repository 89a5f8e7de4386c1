"""What an honest-but-curious server sees from stored ciphertexts.

It runs every public algorithm it can on everything it holds, given the
comparison keys revealed so far, and the result is compared with the
leakage function of each scheme.
"""

import random

from mcore.encoding import Plaintext
from mcore.leakage import adversary_view, instantiate, leak_basic, leak_eore, profile_csv, revealed

rng = random.Random(11)
q = [(1, Plaintext(v, 8)) for v in (40, 200)] + [(2, Plaintext(v, 8)) for v in (41, 7)]

for keys in ([], [(1, 2)]):
    S = revealed(keys)
    for scheme, oracle in (("basic", leak_basic), ("eore", leak_eore)):
        view = adversary_view(instantiate(scheme, 2, 8, rng=rng), S, q)
        assert view == oracle(S, q)
        print(f"{scheme} with keys {keys or 'none'}: {len(view)} records")
        print("  " + profile_csv(view).replace("\n", "\n  ").rstrip())
